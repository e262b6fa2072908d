//! Elementary modifications of normal bundles of rational curves and their
//! splitting types.
//!
//! A [`ModifiedBundle`] is `N_C(n)` cut down by pointing conditions. Its
//! sections in a given twist are rows of forms modulo the image of the
//! extended Jacobian whose jets at the condition points lie in prescribed
//! spans; the splitting type is read off the Hilbert function of those
//! section spaces.

pub mod local;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curve::{self, CoeffText, CurveMap, NormalFiber, SplittingType};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{self, Vector};
use crate::poly::ProjPoint;
use crate::stability::Verdict;

pub use local::{jet2_condition, Jet2Condition, NormalizedLocalModel, ParametricRows};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionKind {
    /// `[p -> q]`: the value at `p` lies in the pointing line.
    Line,
    /// `[2p -> q]`: the section lies in the pointing subbundle to second order.
    Jet2,
}

#[derive(Clone, Debug)]
pub struct FiberCondition {
    pub point: ProjPoint,
    pub kind: ConditionKind,
    pub target: Vector,
}

impl FiberCondition {
    pub fn line(point: ProjPoint, target: Vector) -> Self {
        FiberCondition { point, kind: ConditionKind::Line, target }
    }

    pub fn jet2(point: ProjPoint, target: Vector) -> Self {
        FiberCondition { point, kind: ConditionKind::Jet2, target }
    }
}

/// The class of `q` in the fiber of `N_C` at `p`, spanning the pointing line.
pub fn pointing_line(c: &CurveMap, p: &ProjPoint, q: &[Scalar]) -> Result<Vector> {
    if q.len() != c.ambient_dim() + 1 {
        return Err(Error::Precondition(format!("target needs {} coordinates, got {}", c.ambient_dim() + 1, q.len())));
    }
    let fiber = NormalFiber::at(c, p)?;
    let class = fiber.reduce(q);
    if class.iter().all(|x| c.field().is_zero(x)) {
        return Err(Error::TangentTarget);
    }
    Ok(class)
}

/// `N_C(n)[p_1 -> q_1]...[p_k -> q_k]` on a rational curve `C`.
#[derive(Clone, Debug)]
pub struct ModifiedBundle {
    curve: CurveMap,
    twist: i64,
    conditions: Vec<FiberCondition>,
}

impl ModifiedBundle {
    pub fn new(curve: CurveMap, twist: i64, conditions: Vec<FiberCondition>) -> Result<Self> {
        curve::require_valid(&curve)?;
        let fld = curve.field();
        for (i, cond) in conditions.iter().enumerate() {
            if cond.point.field() != fld {
                return Err(Error::FieldMismatch(cond.point.field().to_string(), fld.to_string()));
            }
            if !cond.target.iter().all(|x| fld.contains(x)) {
                return Err(Error::FieldMismatch("target".into(), fld.to_string()));
            }
            if cond.kind == ConditionKind::Jet2 && curve.ambient_dim() != 3 {
                return Err(Error::UnsupportedRank(curve.ambient_dim()));
            }
            if conditions[..i].iter().any(|o| o.point.same_as(&cond.point)) {
                return Err(Error::DuplicateNode);
            }
            pointing_line(&curve, &cond.point, &cond.target)?;
        }
        Ok(ModifiedBundle { curve, twist, conditions })
    }

    pub fn unmodified(curve: CurveMap) -> Result<Self> {
        Self::new(curve, 0, Vec::new())
    }

    pub fn curve(&self) -> &CurveMap {
        &self.curve
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn conditions(&self) -> &[FiberCondition] {
        &self.conditions
    }

    pub fn rank(&self) -> usize {
        self.curve.ambient_dim() - 1
    }

    pub fn with_condition(&self, cond: FiberCondition) -> Result<Self> {
        let mut conditions = self.conditions.clone();
        conditions.push(cond);
        Self::new(self.curve.clone(), self.twist, conditions)
    }

    pub fn with_twist(&self, twist: i64) -> Self {
        ModifiedBundle { twist, ..self.clone() }
    }

    fn count(&self, kind: ConditionKind) -> i64 {
        self.conditions.iter().filter(|c| c.kind == kind).count() as i64
    }

    /// `(r+1)d - 2 + (r-1)n - (r-2)(#Line + 2 #Jet2)`.
    pub fn expected_degree(&self) -> i64 {
        let r = self.curve.ambient_dim() as i64;
        let d = self.curve.degree() as i64;
        let drops = self.count(ConditionKind::Line) + 2 * self.count(ConditionKind::Jet2);
        (r + 1) * d - 2 + (r - 1) * self.twist - (r - 2) * drops
    }

    fn local_conditions(&self, route: JetRoute) -> Vec<LocalCondition> {
        self.conditions
            .iter()
            .map(|c| match (c.kind, route) {
                (ConditionKind::Line, _) => {
                    LocalCondition::Span { point: c.point.clone(), order: 1, target: Some(c.target.clone()) }
                }
                (ConditionKind::Jet2, JetRoute::Span) => {
                    LocalCondition::Span { point: c.point.clone(), order: 2, target: Some(c.target.clone()) }
                }
                (ConditionKind::Jet2, JetRoute::Frame) => {
                    LocalCondition::Frame { point: c.point.clone(), target: c.target.clone() }
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum JetRoute {
    /// `[2p -> q]` as membership in `span{cols, q}` modulo `u^2`.
    Span,
    /// `[p -> q][p -> q]`: modify once, then point again in the modified
    /// bundle's local frame.
    Frame,
}

#[derive(Clone, Debug)]
enum LocalCondition {
    /// Jet of order `order` lies in the span of the Jacobian columns (and
    /// the target, if any) with polynomial coefficients.
    Span { point: ProjPoint, order: usize, target: Option<Vector> },
    /// Iterated pointing through the frame `[g_1, g_2, q, e...]`.
    Frame { point: ProjPoint, target: Vector },
}

impl LocalCondition {
    fn point(&self) -> &ProjPoint {
        match self {
            LocalCondition::Span { point, .. } | LocalCondition::Frame { point, .. } => point,
        }
    }

    /// Functionals on slice coordinates of degree-`e` rows.
    fn slice_functionals(&self, c: &CurveMap, e: usize) -> Result<Vec<Vector>> {
        let f = c.field();
        let n = c.ambient_dim() + 1;
        match self {
            LocalCondition::Span { point, order, target } => {
                let k = *order;
                let mut gens = local::jacobian_columns(c, point, k);
                if let Some(q) = target {
                    gens.push(q.iter().map(|x| local::truncated(&f, std::slice::from_ref(x), k)).collect());
                }
                let phis = local::span_membership_functionals(&f, &gens, n, k);
                Ok(local::pull_back_to_slice(&f, &phis, point, n, k, e))
            }
            LocalCondition::Frame { point, target } => {
                // First modification: the frame coefficients on the
                // completing vectors vanish at p. In the modified bundle
                // the pointing line toward q is again spanned by q, so the
                // second modification kills the next order of the same
                // coefficients.
                let frame = local::LocalFrame::new(c, point, std::slice::from_ref(target), 2)?;
                let mut phis = Vec::new();
                for row in 3..n {
                    phis.extend(frame.coordinate_functionals(&f, row));
                }
                Ok(local::pull_back_to_slice(&f, &phis, point, n, 2, e))
            }
        }
    }
}

/// First point of `P^1(k)` in enumeration order that avoids `taken`.
fn free_point(field: FieldSpec, taken: &[&ProjPoint]) -> Result<ProjPoint> {
    ProjPoint::enumerate(field)
        .find(|p| taken.iter().all(|t| !t.same_as(p)))
        .ok_or_else(|| Error::Precondition("no rational point free of conditions".into()))
}

fn h0_local(c: &CurveMap, twist: i64, conds: &[LocalCondition], e: i64) -> Result<usize> {
    let d = c.degree() as i64;
    let e0 = e + twist;
    // Sections of N(e0 - d) are degree-e0 rows modulo the image only for
    // e0 >= d - 1; below that, write N(e0 - d) = N(d - 1 - d)(-j p0).
    let (big_e, j) = if e0 >= d - 1 { (e0, 0) } else { (d - 1, (d - 1 - e0) as usize) };
    let big_e = big_e as usize;
    let mut all: Vec<LocalCondition> = conds.to_vec();
    if j > 0 {
        let taken: Vec<&ProjPoint> = conds.iter().map(LocalCondition::point).collect();
        let p0 = free_point(c.field(), &taken)?;
        all.push(LocalCondition::Span { point: p0, order: j, target: None });
    }
    let fld = c.field();
    let mut rows = Vec::new();
    for cond in &all {
        rows.extend(cond.slice_functionals(c, big_e)?);
    }
    let dim_v = (c.ambient_dim() + 1) * (big_e + 1);
    let cond_rank = linalg::rank(&fld, &rows);
    let image_rank = linalg::rank(&fld, &curve::image_spanning_set(c, big_e));
    (dim_v - cond_rank)
        .checked_sub(image_rank)
        .ok_or_else(|| Error::Invariant(format!("negative section count in degree {e}")))
}

/// `h^0(M ⊗ O(e - d))` for the modified bundle `M`, `d` the curve degree.
///
/// With this normalization `h0(unmodified, e) = dim W(e)`.
pub fn h0(mb: &ModifiedBundle, e: i64) -> Result<usize> {
    h0_local(&mb.curve, mb.twist, &mb.local_conditions(JetRoute::Span), e)
}

fn scan_splitting(mb: &ModifiedBundle, route: JetRoute) -> Result<SplittingType> {
    let c = &mb.curve;
    let conds = mb.local_conditions(route);
    let r = c.ambient_dim() as i64;
    let d = c.degree() as i64;
    let rank = mb.rank();
    let half = (r + 1) * d + mb.twist.abs() + 4;
    let (lo, hi) = (-half, half);
    let mut memo: BTreeMap<i64, usize> = BTreeMap::new();
    let mut h = |e: i64| -> Result<usize> {
        if let Some(v) = memo.get(&e) {
            return Ok(*v);
        }
        let v = h0_local(c, mb.twist, &conds, e)?;
        memo.insert(e, v);
        Ok(v)
    };
    if h(lo)? != 0 || h(hi)? == 0 {
        return Err(Error::BoundExceeded(half as usize));
    }
    // first e with h(e) > 0
    let (mut a, mut b) = (lo, hi);
    while b - a > 1 {
        let mid = a + (b - a) / 2;
        if h(mid)? > 0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    // h(e) - h(e-1) = #{c_i : c_i >= d - e}
    let mut parts = Vec::with_capacity(rank);
    let mut prev = 0usize;
    let mut e = b;
    loop {
        let delta = h(e)?.checked_sub(h(e - 1)?).ok_or_else(|| Error::Invariant("h0 decreased".into()))?;
        if delta < prev || delta > rank {
            return Err(Error::Invariant(format!("first differences not monotone at {e}")));
        }
        parts.extend(std::iter::repeat_n(d - e, delta - prev));
        prev = delta;
        if delta == rank {
            break;
        }
        e += 1;
        if e > hi {
            return Err(Error::BoundExceeded(half as usize));
        }
    }
    let st = SplittingType::new(parts);
    let predicted: i64 = st.parts().iter().map(|a| (a + hi - d + 1).max(0)).sum();
    if predicted != h(hi)? as i64 {
        return Err(Error::Invariant(format!("h0 at {hi} disagrees with {st}")));
    }
    let expected = mb.expected_degree();
    if st.degree() != expected {
        return Err(Error::DegreeSumMismatch { computed: st.degree(), expected });
    }
    Ok(st)
}

/// Splitting type of the modified bundle from its Hilbert function.
pub fn splitting_type(mb: &ModifiedBundle) -> Result<SplittingType> {
    scan_splitting(mb, JetRoute::Span)
}

/// Splitting type with every `[2p -> q]` replaced by the iterated
/// modification `[p -> q][p -> q]`, computed through a separate local frame.
pub fn iterated_pointing_splitting(mb: &ModifiedBundle) -> Result<SplittingType> {
    scan_splitting(mb, JetRoute::Frame)
}

/// A node of `X ∪ Y` seen from the host `X`: the node's parameter on `X`
/// and a point `q` on the tangent line of `Y` there.
#[derive(Clone, Debug)]
pub struct NodeSpec {
    pub point: ProjPoint,
    pub target: Vector,
}

/// `N_{X ∪ Y}|_X = N_X(p_1 + ... + p_n)[p_1 -> q_1]...[p_n -> q_n]`.
pub fn hh_restrict(host: &CurveMap, nodes: &[NodeSpec]) -> Result<ModifiedBundle> {
    for (i, n) in nodes.iter().enumerate() {
        if nodes[..i].iter().any(|m| m.point.same_as(&n.point)) {
            return Err(Error::DuplicateNode);
        }
    }
    let conditions = nodes.iter().map(|n| FiberCondition::line(n.point.clone(), n.target.clone())).collect();
    ModifiedBundle::new(host.clone(), nodes.len() as i64, conditions)
}

/// Bundles on `P^1` are never stable: equal parts give strict
/// semistability, anything else is unstable.
pub fn is_semistable(st: &SplittingType) -> Verdict {
    match (st.parts().first(), st.parts().last()) {
        (Some(lo), Some(hi)) if lo != hi => Verdict::Unstable,
        _ => Verdict::StrictlySemistable,
    }
}

/// One entry of a modification file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConditionSpec {
    pub point: [CoeffText; 2],
    pub kind: ConditionKind,
    pub target: Vec<CoeffText>,
}

/// Modification file: `{"twist": n, "conditions": [...]}` or a bare list.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ModSpec {
    pub twist: i64,
    pub conditions: Vec<ConditionSpec>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ModSpecText {
    Full {
        #[serde(default)]
        twist: i64,
        #[serde(default)]
        conditions: Vec<ConditionSpec>,
    },
    Bare(Vec<ConditionSpec>),
}

impl ModSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: ModSpecText = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(match raw {
            ModSpecText::Full { twist, conditions } => ModSpec { twist, conditions },
            ModSpecText::Bare(conditions) => ModSpec { twist: 0, conditions },
        })
    }

    pub fn apply(&self, curve: &CurveMap) -> Result<ModifiedBundle> {
        let f = curve.field();
        let conditions = self
            .conditions
            .iter()
            .map(|c| {
                let point = ProjPoint::new(f, c.point[0].to_scalar(f)?, c.point[1].to_scalar(f)?)?;
                let target = c.target.iter().map(|x| x.to_scalar(f)).collect::<Result<Vector>>()?;
                Ok(FiberCondition { point, kind: c.kind, target })
            })
            .collect::<Result<Vec<_>>>()?;
        ModifiedBundle::new(curve.clone(), self.twist, conditions)
    }
}
