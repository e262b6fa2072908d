//! Slope arithmetic for normal bundles of space curves, the stability
//! classifier, and adjusted slopes on nodal curves.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Stable,
    StrictlySemistable,
    Unstable,
}

/// Brill–Noether number `g - (r+1)(g - d + r)`.
pub fn rho(g: i64, r: i64, d: i64) -> i64 {
    g - (r + 1) * (g - d + r)
}

/// `deg N_C = 4d + 2g - 2` for a curve in `P^3`.
pub fn normal_degree(d: i64, g: i64) -> i64 {
    4 * d + 2 * g - 2
}

/// `μ(N_C) = 2d + g - 1` for a curve in `P^3`.
pub fn mu_normal(d: i64, g: i64) -> Rational64 {
    Rational64::new(normal_degree(d, g), 2)
}

/// Slope `2d + 2g - 2` of `N_{C/Q}` for `C` on a quadric `Q`.
pub fn quadric_sub_slope(d: i64, g: i64) -> Rational64 {
    Rational64::from_integer(2 * d + 2 * g - 2)
}

/// A curve class in `P^3`; `char` is 0 or a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveClass {
    pub d: i64,
    pub g: i64,
    pub char: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub reason: &'static str,
}

/// `(d, g)` where a quadric containing the curve destabilizes `N_C`.
pub const QUADRIC_EXCEPTIONS: [(i64, i64); 2] = [(5, 2), (6, 4)];

/// Stability of the normal bundle of a general curve of class `c`.
pub fn classify(c: CurveClass) -> Result<Classification> {
    let CurveClass { d, g, char } = c;
    if g < 0 || d < 3 || rho(g, 3, d) < 0 {
        return Err(Error::NotBrillNoether(d, g));
    }
    let (verdict, reason) = if g >= 2 {
        if QUADRIC_EXCEPTIONS.contains(&(d, g)) {
            (Verdict::Unstable, "quadric destabilizes")
        } else {
            (Verdict::Stable, "genus at least two")
        }
    } else if char == 2 && g == 0 && d % 2 == 0 {
        (Verdict::Unstable, "char-2 parity")
    } else {
        (Verdict::StrictlySemistable, "genus below two")
    };
    Ok(Classification { verdict, reason })
}

/// Necessary condition for semistability of `N_C` for a rational curve of
/// degree `d` in `P^r`: `r - 1 | 2d - 2`, and in characteristic 2 also
/// `d ≡ 1 (mod r - 1)`.
pub fn char2_semistability_necessary(d: i64, r: i64, char: u64) -> Result<bool> {
    if r < 2 || d < r {
        return Err(Error::Precondition(format!("need r >= 2 and d >= r (got d={d}, r={r})")));
    }
    let m = r - 1;
    let base = (2 * d - 2).rem_euclid(m) == 0;
    Ok(if char == 2 { base && (d - 1).rem_euclid(m) == 0 } else { base })
}

/// Number of points where the two pointing line bundles of degrees `a`, `b`
/// inside a rank-2 bundle of degree `a + b - 2` agree.
pub fn coincidence_count(a: i64, b: i64) -> Result<i64> {
    if a < 1 || b < 1 {
        return Err(Error::Precondition(format!("need a, b >= 1 (got {a}, {b})")));
    }
    Ok(a + b - 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodalComponent {
    pub id: String,
    pub rank: u32,
    pub degree: i64,
}

/// A node glues `(component, point)` to `(component, point)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node(pub (String, String), pub (String, String));

/// A bundle on a connected nodal curve, recorded per component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodalConfig {
    pub components: Vec<NodalComponent>,
    pub nodes: Vec<Node>,
}

fn find(parent: &mut [usize], i: usize) -> usize {
    if parent[i] != i {
        let root = find(parent, parent[i]);
        parent[i] = root;
    }
    parent[i]
}

impl NodalConfig {
    pub fn new(components: Vec<NodalComponent>, nodes: Vec<Node>) -> Result<Self> {
        let cfg = NodalConfig { components, nodes };
        cfg.validate()?;
        Ok(cfg)
    }

    fn index(&self) -> BTreeMap<&str, usize> {
        self.components.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect()
    }

    /// Unique ids, known endpoints, unused points, equal ranks across
    /// nodes, connected dual graph.
    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InconsistentDatum("no components".into()));
        }
        let idx = self.index();
        if idx.len() != self.components.len() {
            return Err(Error::InconsistentDatum("duplicate component id".into()));
        }
        let mut used = BTreeSet::new();
        let mut parent: Vec<usize> = (0..self.components.len()).collect();
        for Node(a, b) in &self.nodes {
            let mut ends = [0usize; 2];
            for (slot, (comp, point)) in ends.iter_mut().zip([a, b]) {
                *slot = *idx
                    .get(comp.as_str())
                    .ok_or_else(|| Error::InconsistentDatum(format!("unknown component {comp}")))?;
                if !used.insert((comp.clone(), point.clone())) {
                    return Err(Error::DuplicateNode);
                }
            }
            if self.components[ends[0]].rank != self.components[ends[1]].rank {
                return Err(Error::InconsistentDatum(format!("rank jumps across node {}~{}", a.0, b.0)));
            }
            let (ra, rb) = (find(&mut parent, ends[0]), find(&mut parent, ends[1]));
            parent[ra] = rb;
        }
        let root = find(&mut parent, 0);
        if (0..self.components.len()).any(|i| find(&mut parent, i) != root) {
            return Err(Error::InconsistentDatum("dual graph is disconnected".into()));
        }
        Ok(())
    }

    pub fn rank(&self) -> u32 {
        self.components[0].rank
    }

    pub fn degree(&self) -> i64 {
        self.components.iter().map(|c| c.degree).sum()
    }

    /// `μ(E) = Σ deg(E|_X) / rank`.
    pub fn slope(&self) -> Rational64 {
        Rational64::new(self.degree(), self.rank() as i64)
    }

    /// Whether the components form a chain (a path as dual graph, no
    /// self-nodes, each adjacent pair joined once).
    pub fn is_chain(&self) -> bool {
        let n = self.components.len();
        if self.nodes.len() + 1 != n {
            return false;
        }
        let mut degree: BTreeMap<&str, usize> = BTreeMap::new();
        for Node(a, b) in &self.nodes {
            if a.0 == b.0 {
                return false;
            }
            *degree.entry(&a.0).or_default() += 1;
            *degree.entry(&b.0).or_default() += 1;
        }
        degree.values().all(|&k| k <= 2)
    }
}

/// A subbundle `F` of the pullback of `E` to the normalization: its degree
/// on each component and, per node, the codimension of the overlap of the
/// two fibers of `F` glued there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubbundleDatum {
    pub rank: u32,
    pub degrees: BTreeMap<String, i64>,
    pub codims: Vec<u32>,
}

impl SubbundleDatum {
    /// Rank-1 datum from per-node agreement flags.
    pub fn line(degrees: BTreeMap<String, i64>, agreement: &[bool]) -> Self {
        SubbundleDatum { rank: 1, degrees, codims: agreement.iter().map(|&a| u32::from(!a)).collect() }
    }

    pub fn check(&self, cfg: &NodalConfig) -> Result<()> {
        if self.rank == 0 || self.rank > cfg.rank() {
            return Err(Error::InconsistentDatum(format!("subbundle rank {} out of range", self.rank)));
        }
        if self.codims.len() != cfg.nodes.len() {
            return Err(Error::InconsistentDatum(format!(
                "{} node entries for {} nodes",
                self.codims.len(),
                cfg.nodes.len()
            )));
        }
        if let Some(c) = self.codims.iter().find(|&&c| c > self.rank) {
            return Err(Error::InconsistentDatum(format!("codimension {c} exceeds rank {}", self.rank)));
        }
        let ids: BTreeSet<&str> = cfg.components.iter().map(|c| c.id.as_str()).collect();
        let have: BTreeSet<&str> = self.degrees.keys().map(String::as_str).collect();
        if ids != have {
            return Err(Error::InconsistentDatum("degrees must list every component".into()));
        }
        Ok(())
    }

    pub fn slope(&self) -> Rational64 {
        Rational64::new(self.degrees.values().sum(), self.rank as i64)
    }

    /// `μ(F|_X)` on one component.
    pub fn slope_on(&self, id: &str) -> Option<Rational64> {
        self.degrees.get(id).map(|&d| Rational64::new(d, self.rank as i64))
    }

    pub fn is_pullback(&self) -> bool {
        self.codims.iter().all(|&c| c == 0)
    }
}

/// `μ^adj(F) = μ(F) - (1 / rk F) Σ codim`.
pub fn adjusted_slope(cfg: &NodalConfig, sub: &SubbundleDatum) -> Result<Rational64> {
    sub.check(cfg)?;
    let codim: i64 = sub.codims.iter().map(|&c| c as i64).sum();
    Ok(sub.slope() - Rational64::new(codim, sub.rank as i64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GluedVerdict {
    Stable,
    Semistable,
    Inconclusive,
}

/// Semistability of a bundle glued from components with known verdicts.
///
/// Every component semistable gives a semistable bundle; if moreover some
/// component is stable, the glued bundle is stable. Any unstable component
/// leaves the question open.
pub fn naive_semistable_check(cfg: &NodalConfig, verdicts: &BTreeMap<String, Verdict>) -> Result<GluedVerdict> {
    cfg.validate()?;
    if !cfg.is_chain() {
        return Err(Error::Precondition("naive check needs a chain of components".into()));
    }
    let mut any_stable = false;
    for comp in &cfg.components {
        match verdicts.get(&comp.id) {
            None => return Err(Error::InconsistentDatum(format!("no verdict for {}", comp.id))),
            Some(Verdict::Unstable) => return Ok(GluedVerdict::Inconclusive),
            Some(Verdict::Stable) => any_stable = true,
            Some(Verdict::StrictlySemistable) => {}
        }
    }
    Ok(if any_stable { GluedVerdict::Stable } else { GluedVerdict::Semistable })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cc(d: i64, g: i64, char: u64) -> Verdict {
        classify(CurveClass { d, g, char }).unwrap().verdict
    }

    fn two_components(nodes: usize) -> NodalConfig {
        let components = vec![
            NodalComponent { id: "X".into(), rank: 1, degree: 3 },
            NodalComponent { id: "Y".into(), rank: 1, degree: 2 },
        ];
        let nodes = (0..nodes).map(|i| Node(("X".into(), format!("p{i}")), ("Y".into(), format!("p{i}")))).collect();
        NodalConfig::new(components, nodes).unwrap()
    }

    #[test]
    fn formulas() {
        assert_eq!(rho(0, 3, 3), 0);
        assert_eq!(rho(4, 3, 6), 0);
        assert_eq!(rho(2, 3, 5), 2);
        assert_eq!(mu_normal(5, 2), Rational64::from_integer(11));
        assert_eq!(mu_normal(6, 4), Rational64::from_integer(15));
        assert_eq!(mu_normal(3, 0), Rational64::from_integer(5));
        assert_eq!(quadric_sub_slope(5, 2), Rational64::from_integer(12));
        assert_eq!(quadric_sub_slope(6, 4), Rational64::from_integer(18));
        assert_eq!(quadric_sub_slope(4, 1), Rational64::from_integer(8));
    }

    #[test]
    fn classifier_examples() {
        assert_eq!(cc(5, 2, 0), Verdict::Unstable);
        assert_eq!(cc(4, 0, 2), Verdict::Unstable);
        assert_eq!(cc(4, 1, 2), Verdict::StrictlySemistable);
        assert_eq!(cc(7, 5, 0), Verdict::Stable);
        assert_eq!(cc(3, 0, 2), Verdict::StrictlySemistable);
        assert!(matches!(classify(CurveClass { d: 3, g: 1, char: 0 }), Err(Error::NotBrillNoether(3, 1))));
    }

    #[test]
    fn char2_condition() {
        assert!(!char2_semistability_necessary(4, 3, 2).unwrap());
        assert!(char2_semistability_necessary(5, 3, 2).unwrap());
        assert!(char2_semistability_necessary(4, 3, 0).unwrap());
        assert!(char2_semistability_necessary(2, 3, 0).is_err());
    }

    #[test]
    fn coincidences() {
        assert_eq!(coincidence_count(2, 2).unwrap(), 2);
        assert_eq!(coincidence_count(2, 3).unwrap(), 3);
        assert_eq!(coincidence_count(1, 1).unwrap(), 0);
        assert!(coincidence_count(0, 1).is_err());
    }

    #[test]
    fn adjusted_slopes() {
        let cfg = two_components(2);
        let degs: BTreeMap<String, i64> = [("X".to_string(), 3), ("Y".to_string(), 2)].into();
        let agree = SubbundleDatum::line(degs.clone(), &[true, true]);
        assert_eq!(adjusted_slope(&cfg, &agree).unwrap(), Rational64::from_integer(5));
        let one_off = SubbundleDatum::line(degs.clone(), &[true, false]);
        assert_eq!(adjusted_slope(&cfg, &one_off).unwrap(), Rational64::from_integer(4));
        let wrong = SubbundleDatum::line(degs, &[true]);
        assert!(matches!(adjusted_slope(&cfg, &wrong), Err(Error::InconsistentDatum(_))));

        let rank2 = NodalConfig::new(
            vec![
                NodalComponent { id: "X".into(), rank: 3, degree: 7 },
                NodalComponent { id: "Y".into(), rank: 3, degree: 5 },
            ],
            vec![Node(("X".into(), "p".into()), ("Y".into(), "q".into()))],
        )
        .unwrap();
        let sub =
            SubbundleDatum { rank: 2, degrees: [("X".to_string(), 4), ("Y".to_string(), 3)].into(), codims: vec![1] };
        assert_eq!(adjusted_slope(&rank2, &sub).unwrap(), Rational64::new(7, 2) - Rational64::new(1, 2));
    }

    #[test]
    fn config_validation() {
        let comps = vec![
            NodalComponent { id: "X".into(), rank: 2, degree: 3 },
            NodalComponent { id: "Y".into(), rank: 1, degree: 2 },
        ];
        let node = Node(("X".into(), "p".into()), ("Y".into(), "p".into()));
        assert!(NodalConfig::new(comps.clone(), vec![node]).is_err());
        assert!(NodalConfig::new(comps, vec![]).is_err());
        let cfg = two_components(1);
        assert!(cfg.is_chain());
        assert!(!two_components(2).is_chain());
    }

    #[test]
    fn naive_check() {
        let cfg = two_components(1);
        let v = |a, b| -> BTreeMap<String, Verdict> { [("X".to_string(), a), ("Y".to_string(), b)].into() };
        use Verdict::*;
        assert_eq!(
            naive_semistable_check(&cfg, &v(StrictlySemistable, StrictlySemistable)).unwrap(),
            GluedVerdict::Semistable
        );
        assert_eq!(naive_semistable_check(&cfg, &v(Stable, StrictlySemistable)).unwrap(), GluedVerdict::Stable);
        assert_eq!(naive_semistable_check(&cfg, &v(Unstable, Stable)).unwrap(), GluedVerdict::Inconclusive);
    }
}
