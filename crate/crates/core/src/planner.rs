//! Reduction of a curve class `(d, g)` in `P^3` to a finite list of base
//! cases by two degeneration moves:
//!
//! - *pancake* `(d, g) -> (d - 4, g - 6)`, used while `g >= 9`;
//! - *one-secant* `(d, g) -> (d - ε, g)` with `ε = 1`, or `ε = 2` in
//!   characteristic 2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stability::{classify, rho, CurveClass, QUADRIC_EXCEPTIONS};

pub type Pair = (i64, i64);

/// Base cases in characteristic 2.
pub const BASE_CHAR2: [Pair; 17] = [
    (3, 0),
    (4, 1),
    (5, 1),
    (6, 2),
    (7, 2),
    (6, 3),
    (7, 3),
    (7, 4),
    (8, 4),
    (7, 5),
    (8, 5),
    (8, 6),
    (9, 6),
    (9, 7),
    (10, 7),
    (9, 8),
    (10, 8),
];

/// Base cases away from characteristic 2.
pub const BASE_OTHER: [Pair; 9] = [(3, 0), (4, 1), (6, 2), (6, 3), (7, 4), (7, 5), (8, 6), (9, 7), (9, 8)];

pub fn base_cases(char: u64) -> &'static [Pair] {
    if char == 2 {
        &BASE_CHAR2
    } else {
        &BASE_OTHER
    }
}

/// Step of a one-secant move.
pub fn epsilon(char: u64) -> i64 {
    if char == 2 {
        2
    } else {
        1
    }
}

/// `ρ(g, 3, d) >= 0`, `d >= 3`, `g >= 0`.
pub fn is_valid_pair((d, g): Pair) -> bool {
    g >= 0 && d >= 3 && rho(g, 3, d) >= 0
}

/// Pairs whose general normal bundle is unstable; these are leaves.
pub fn is_exceptional((d, g): Pair, char: u64) -> bool {
    QUADRIC_EXCEPTIONS.contains(&(d, g)) || (char == 2 && g == 0 && d % 2 == 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    Pancake,
    OneSecant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlannedMove {
    pub kind: MoveKind,
    pub to: Pair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminalKind {
    BaseCase,
    ExceptionalLeaf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terminal {
    pub kind: TerminalKind,
    pub pair: Pair,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionPlan {
    pub start: Pair,
    pub char: u64,
    pub moves: Vec<PlannedMove>,
    pub terminal: Terminal,
}

/// Deterministic plan: exceptional inputs stop at once; otherwise pancake
/// while `g >= 9`, then one-secant steps until a base case is reached.
pub fn plan(c: CurveClass) -> Result<ReductionPlan> {
    classify(c)?;
    let start = (c.d, c.g);
    let mut moves = Vec::new();
    let leaf = |pair, moves| ReductionPlan {
        start,
        char: c.char,
        moves,
        terminal: Terminal { kind: TerminalKind::ExceptionalLeaf, pair },
    };
    if is_exceptional(start, c.char) {
        return Ok(leaf(start, moves));
    }
    let base = base_cases(c.char);
    let mut cur = start;
    while cur.1 >= 9 {
        cur = (cur.0 - 4, cur.1 - 6);
        moves.push(PlannedMove { kind: MoveKind::Pancake, to: cur });
    }
    let eps = epsilon(c.char);
    while !base.contains(&cur) {
        let next = (cur.0 - eps, cur.1);
        if !is_valid_pair(next) || is_exceptional(next, c.char) {
            return Err(Error::PlanningFailure(cur.0, cur.1));
        }
        cur = next;
        moves.push(PlannedMove { kind: MoveKind::OneSecant, to: cur });
    }
    Ok(ReductionPlan { start, char: c.char, moves, terminal: Terminal { kind: TerminalKind::BaseCase, pair: cur } })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanCheck {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

/// Replays a plan and checks guards, arithmetic and the terminal.
pub fn verify_plan(p: &ReductionPlan) -> PlanCheck {
    let mut diag = Vec::new();
    let ch = p.char;
    if !is_valid_pair(p.start) {
        diag.push(format!("start {:?} is not a valid pair", p.start));
    }
    let mut cur = p.start;
    for (i, m) in p.moves.iter().enumerate() {
        if is_exceptional(cur, ch) {
            diag.push(format!("move {i} leaves exceptional pair {cur:?}"));
        }
        match m.kind {
            MoveKind::Pancake => {
                if cur.1 < 9 {
                    diag.push(format!("move {i}: pancake at genus {} < 9", cur.1));
                }
                if m.to != (cur.0 - 4, cur.1 - 6) {
                    diag.push(format!("move {i}: pancake from {cur:?} cannot reach {:?}", m.to));
                }
                if rho(m.to.1, 3, m.to.0) != rho(cur.1, 3, cur.0) + 2 {
                    diag.push(format!("move {i}: ρ does not increase by 2"));
                }
            }
            MoveKind::OneSecant => {
                if m.to != (cur.0 - epsilon(ch), cur.1) {
                    diag.push(format!("move {i}: one-secant from {cur:?} cannot reach {:?}", m.to));
                }
            }
        }
        if !is_valid_pair(m.to) {
            diag.push(format!("move {i}: {:?} is not a valid pair", m.to));
        }
        if is_exceptional(m.to, ch) {
            diag.push(format!("move {i}: routes through exceptional {:?}", m.to));
        }
        cur = m.to;
    }
    if p.terminal.pair != cur {
        diag.push(format!("terminal {:?} differs from final pair {cur:?}", p.terminal.pair));
    }
    match p.terminal.kind {
        TerminalKind::BaseCase => {
            if !base_cases(ch).contains(&p.terminal.pair) {
                diag.push(format!("{:?} is not a base case", p.terminal.pair));
            }
        }
        TerminalKind::ExceptionalLeaf => {
            if !is_exceptional(p.terminal.pair, ch) {
                diag.push(format!("{:?} is not exceptional", p.terminal.pair));
            }
            if !p.moves.is_empty() {
                diag.push("exceptional leaves take no moves".into());
            }
        }
    }
    PlanCheck { ok: diag.is_empty(), diagnostics: diag }
}

/// How the base case or leaf is settled, as a short description.
pub fn technique(t: &Terminal, char: u64) -> &'static str {
    match t.kind {
        TerminalKind::ExceptionalLeaf => {
            if char == 2 && t.pair.1 == 0 {
                "parity of splitting in characteristic 2"
            } else {
                "destabilizing quadric"
            }
        }
        TerminalKind::BaseCase => match t.pair {
            (3, 0) => "rational normal curve",
            (4, 1) => "elliptic normal curve as an intersection of two quadrics",
            (5, 1) => "1-secant line",
            (6, 2) => "cubic surfaces",
            (7, 5) => "a dedicated degeneration",
            (9, 7) | (10, 7) | (9, 8) | (10, 8) => "gluing data",
            _ => "limits of gluing data",
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cc(d: i64, g: i64, char: u64) -> CurveClass {
        CurveClass { d, g, char }
    }

    #[test]
    fn base_lists() {
        assert!(base_cases(0).contains(&(9, 8)));
        assert!(!base_cases(0).contains(&(10, 8)));
        assert!(base_cases(2).contains(&(10, 8)));
        assert_eq!(base_cases(3), base_cases(0));
    }

    #[test]
    fn plan_examples() {
        let p = plan(cc(10, 8, 0)).unwrap();
        assert_eq!(p.moves, vec![PlannedMove { kind: MoveKind::OneSecant, to: (9, 8) }]);
        assert_eq!(p.terminal, Terminal { kind: TerminalKind::BaseCase, pair: (9, 8) });
        assert!(verify_plan(&p).ok);

        let p = plan(cc(13, 12, 0)).unwrap();
        assert_eq!(p.moves[0], PlannedMove { kind: MoveKind::Pancake, to: (9, 6) });
        assert_eq!(rho(6, 3, 9), rho(12, 3, 13) + 2);
        assert!(verify_plan(&p).ok);

        let p = plan(cc(6, 0, 2)).unwrap();
        assert_eq!(p.terminal.kind, TerminalKind::ExceptionalLeaf);
        assert!(p.moves.is_empty());
        assert!(matches!(plan(cc(3, 2, 0)), Err(Error::NotBrillNoether(3, 2))));
    }

    #[test]
    fn forged_plans_fail() {
        let forged = ReductionPlan {
            start: (12, 8),
            char: 0,
            moves: vec![PlannedMove { kind: MoveKind::Pancake, to: (8, 2) }],
            terminal: Terminal { kind: TerminalKind::BaseCase, pair: (8, 2) },
        };
        let check = verify_plan(&forged);
        assert!(!check.ok);
        assert!(check.diagnostics.iter().any(|d| d.contains("genus 8")));

        let forged = ReductionPlan {
            start: (5, 2),
            char: 0,
            moves: vec![],
            terminal: Terminal { kind: TerminalKind::BaseCase, pair: (5, 2) },
        };
        assert!(!verify_plan(&forged).ok);
    }

    #[test]
    fn plan_json_shape() {
        let p = plan(cc(10, 8, 0)).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(
            text,
            r#"{"start":[10,8],"char":0,"moves":[{"kind":"OneSecant","to":[9,8]}],"terminal":{"kind":"BaseCase","pair":[9,8]}}"#
        );
        let back: ReductionPlan = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }
}
