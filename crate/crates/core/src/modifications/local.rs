//! Local computations at a point of the source line: jets of sections,
//! series frames of the normal bundle, and second-order pointing conditions.
//!
//! Jets of a row of forms at `p` are taken in the affine chart containing
//! `p` (`t = 1`, or `s = 1` at `[1:0]`) with local parameter `u`. A jet of
//! order `k` of an `(r+1)`-vector is flattened as `index = i * k + a` for the
//! coefficient of `u^a` in coordinate `i`.

use crate::curve::{CurveMap, ExtendedJacobian};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{self, Vector};
use crate::poly::{uni, HomogPoly, ProjPoint};

/// A power series in `u`, truncated.
pub type Series = Vec<Scalar>;

pub(crate) fn truncated(field: &FieldSpec, s: &[Scalar], k: usize) -> Series {
    let mut out: Series = s.iter().take(k).cloned().collect();
    out.resize(k, field.zero());
    out
}

/// Coefficient matrices `M_0, M_1, ...` of a matrix-valued series.
pub type SeriesMatrix = Vec<Vec<Vector>>;

/// Inverse of `B(u)` modulo `u^k`; `None` if `B(0)` is singular.
pub fn series_matrix_inverse(field: &FieldSpec, b: &SeriesMatrix, k: usize) -> Option<SeriesMatrix> {
    let x0 = linalg::inverse(field, &b[0])?;
    let n = x0.len();
    let mut xs = vec![x0.clone()];
    for m in 1..k {
        let mut acc = vec![vec![field.zero(); n]; n];
        for j in 1..=m.min(b.len() - 1) {
            let prod = linalg::mat_mul(field, &b[j], &xs[m - j]);
            for (ar, pr) in acc.iter_mut().zip(&prod) {
                for (a, p) in ar.iter_mut().zip(pr) {
                    *a = field.add(a, p);
                }
            }
        }
        let xm = linalg::mat_mul(field, &x0, &acc)
            .into_iter()
            .map(|row| row.iter().map(|v| field.neg(v)).collect())
            .collect();
        xs.push(xm);
    }
    Some(xs)
}

/// Columns of the extended Jacobian near `p`, each as `r+1` series of length `k`.
pub(crate) fn jacobian_columns(c: &CurveMap, p: &ProjPoint, k: usize) -> Vec<Vec<Series>> {
    let f = c.field();
    ExtendedJacobian::new(c)
        .column_series(p)
        .into_iter()
        .map(|col| col.iter().map(|s| truncated(&f, s, k)).collect())
        .collect()
}

/// Flattened jet of `u^shift * g(u)` truncated at order `k`.
pub(crate) fn shifted_jet(field: &FieldSpec, g: &[Series], shift: usize, k: usize) -> Vector {
    let mut v = vec![field.zero(); g.len() * k];
    for (i, gi) in g.iter().enumerate() {
        for (b, x) in gi.iter().enumerate() {
            if shift + b < k {
                v[i * k + shift + b] = x.clone();
            }
        }
    }
    v
}

/// Functionals on order-`k` jets cutting out
/// `w ∈ span{u^a g(u) : a < k, g ∈ generators}` modulo `u^k`.
pub(crate) fn span_membership_functionals(
    field: &FieldSpec,
    generators: &[Vec<Series>],
    nrows: usize,
    k: usize,
) -> Vec<Vector> {
    let mut span = Vec::new();
    for g in generators {
        for a in 0..k {
            span.push(shifted_jet(field, g, a, k));
        }
    }
    linalg::annihilator(field, &span, nrows * k)
}

/// Composes jet functionals with the jet map on degree-`e` forms, giving
/// functionals on the slice coordinates of `S_e^(r+1)`.
pub(crate) fn pull_back_to_slice(
    field: &FieldSpec,
    functionals: &[Vector],
    p: &ProjPoint,
    nrows: usize,
    k: usize,
    e: usize,
) -> Vec<Vector> {
    // slice coordinate i*(e+1)+m is the monomial s^(e-m) t^m in row i
    let mono_jets: Vec<Series> = (0..=e)
        .map(|m| {
            let mono = HomogPoly::monomial(*field, e - m, m, field.one());
            truncated(field, &mono.local_expansion(p), k)
        })
        .collect();
    functionals
        .iter()
        .map(|phi| {
            let mut row = vec![field.zero(); nrows * (e + 1)];
            for i in 0..nrows {
                for (m, jet) in mono_jets.iter().enumerate() {
                    let mut acc = field.zero();
                    for (a, x) in jet.iter().enumerate() {
                        let w = &phi[i * k + a];
                        if !field.is_zero(w) && !field.is_zero(x) {
                            acc = field.add(&acc, &field.mul(w, x));
                        }
                    }
                    row[i * (e + 1) + m] = acc;
                }
            }
            row
        })
        .collect()
}

/// A local frame `B(u) = [g_1, g_2, extras..., e_j...]` of `k^(r+1)` near `p`,
/// where `g_1, g_2` are columns of the extended Jacobian spanning the
/// tangent directions and the `e_j` are standard basis vectors.
#[derive(Clone, Debug)]
pub struct LocalFrame {
    pub matrix: SeriesMatrix,
    pub inverse: SeriesMatrix,
    /// Standard basis indices appended after the extras.
    pub completion: Vec<usize>,
    pub extras: usize,
}

impl LocalFrame {
    pub fn new(c: &CurveMap, p: &ProjPoint, extras: &[Vector], k: usize) -> Result<Self> {
        let f = c.field();
        let n = c.ambient_dim() + 1;
        let cols = jacobian_columns(c, p, k);
        let mut span = linalg::EchelonBasis::new(f);
        let mut chosen: Vec<Vec<Series>> = Vec::new();
        for col in &cols {
            let at_p: Vector = col.iter().map(|s| s[0].clone()).collect();
            if span.insert(&at_p) {
                chosen.push(col.clone());
            }
            if chosen.len() == 2 {
                break;
            }
        }
        if chosen.len() < 2 {
            return Err(Error::InvalidCurve(format!("ramified at {p}")));
        }
        for q in extras {
            if !span.insert(q) {
                return Err(Error::TangentTarget);
            }
            chosen.push(q.iter().map(|x| truncated(&f, std::slice::from_ref(x), k)).collect());
        }
        let mut completion = Vec::new();
        for j in 0..n {
            if chosen.len() == n {
                break;
            }
            let mut ej = vec![f.zero(); n];
            ej[j] = f.one();
            if span.insert(&ej) {
                completion.push(j);
                chosen.push(ej.iter().map(|x| truncated(&f, std::slice::from_ref(x), k)).collect());
            }
        }
        // matrix[a][i][col] = coefficient of u^a in entry (i, col)
        let matrix: SeriesMatrix =
            (0..k).map(|a| (0..n).map(|i| chosen.iter().map(|col| col[i][a].clone()).collect()).collect()).collect();
        let inverse =
            series_matrix_inverse(&f, &matrix, k).ok_or_else(|| Error::Invariant("local frame is singular".into()))?;
        Ok(LocalFrame { matrix, inverse, completion, extras: extras.len() })
    }

    /// Coordinate `row` of `B(u)^{-1} w(u)` as a functional on order-`k` jets of `w`.
    ///
    /// Returns one functional per power `u^a`, `a < k`.
    pub fn coordinate_functionals(&self, field: &FieldSpec, row: usize) -> Vec<Vector> {
        let k = self.inverse.len();
        let n = self.inverse[0].len();
        (0..k)
            .map(|a| {
                // (X w)_row[a] = Σ_{b <= a} X_b[row] · w_{a-b}
                let mut phi = vec![field.zero(); n * k];
                for b in 0..=a {
                    for i in 0..n {
                        phi[i * k + (a - b)] = field.add(&phi[i * k + (a - b)], &self.inverse[b][row][i]);
                    }
                }
                phi
            })
            .collect()
    }

    /// Series of coordinate `row` of `B(u)^{-1} q` for a constant vector `q`.
    pub fn coordinate_of_constant(&self, field: &FieldSpec, row: usize, q: &[Scalar]) -> Series {
        self.inverse.iter().map(|x| linalg::dot(field, &x[row], q)).collect()
    }
}

/// Functionals on `(m_0, m_1, n_0, n_1)` expressing that the section
/// `(m, n)` and the pointing section `(v_a, v_b)` have a determinant
/// vanishing to second order: coefficients of `t^0` and `t^1` of
/// `v_a n - v_b m`.
pub fn determinant_functionals(field: &FieldSpec, va: &[Scalar], vb: &[Scalar]) -> Vec<Vector> {
    let z = field.zero();
    let (a0, a1) = (va[0].clone(), va.get(1).cloned().unwrap_or(z.clone()));
    let (b0, b1) = (vb[0].clone(), vb.get(1).cloned().unwrap_or(z.clone()));
    vec![vec![field.neg(&b0), z.clone(), a0.clone(), z], vec![field.neg(&b1), field.neg(&b0), a1, a0]]
}

/// Second-order pointing conditions at `p` toward `q` for a curve in `P^3`.
#[derive(Clone, Debug)]
pub struct Jet2Condition {
    /// Standard basis vectors whose classes frame `N` near `p`.
    pub normal_frame: [usize; 2],
    /// Pointing section `(v_a, v_b)` mod `u^2` in that frame.
    pub pointing: [Series; 2],
    /// Two functionals on `(m_0, m_1, n_0, n_1)`.
    pub functionals: Vec<Vector>,
    frame: LocalFrame,
}

impl Jet2Condition {
    /// The same conditions as functionals on order-2 jets of `w ∈ k^4`.
    pub fn jet_functionals(&self, field: &FieldSpec) -> Vec<Vector> {
        let m = self.frame.coordinate_functionals(field, 2);
        let n = self.frame.coordinate_functionals(field, 3);
        let coords = [&m[0], &m[1], &n[0], &n[1]];
        self.functionals
            .iter()
            .map(|row| {
                let mut phi = vec![field.zero(); coords[0].len()];
                for (c, basis) in row.iter().zip(coords) {
                    for (x, y) in phi.iter_mut().zip(basis) {
                        *x = field.add(x, &field.mul(c, y));
                    }
                }
                phi
            })
            .collect()
    }
}

/// Second-order pointing conditions on 1-jets of normal sections at `p`.
pub fn jet2_condition(c: &CurveMap, p: &ProjPoint, q: &[Scalar]) -> Result<Jet2Condition> {
    if c.ambient_dim() != 3 {
        return Err(Error::UnsupportedRank(c.ambient_dim()));
    }
    let f = c.field();
    if q.len() != 4 {
        return Err(Error::Precondition(format!("target needs 4 coordinates, got {}", q.len())));
    }
    let frame = LocalFrame::new(c, p, &[], 2)?;
    let va = frame.coordinate_of_constant(&f, 2, q);
    let vb = frame.coordinate_of_constant(&f, 3, q);
    if f.is_zero(&va[0]) && f.is_zero(&vb[0]) {
        return Err(Error::TangentTarget);
    }
    let functionals = determinant_functionals(&f, &va, &vb);
    Ok(Jet2Condition {
        normal_frame: [frame.completion[0], frame.completion[1]],
        pointing: [va, vb],
        functionals,
        frame,
    })
}

/// The normalized affine model of a space curve germ,
/// `D(t) = (t, t^2 + a_3 t^3 + ..., b_3 t^3 + ...)`, pointed toward the
/// family of targets `q(s) = (1, 0, s)`.
#[derive(Clone, Debug)]
pub struct NormalizedLocalModel {
    field: FieldSpec,
    /// `[a_3, a_4, ...]`
    pub a: Vec<Scalar>,
    /// `[b_3, b_4, ...]`
    pub b: Vec<Scalar>,
}

/// Rows of functionals whose entries are polynomials in a parameter `s`.
#[derive(Clone, Debug)]
pub struct ParametricRows {
    field: FieldSpec,
    pub rows: Vec<Vec<Vec<Scalar>>>,
}

impl NormalizedLocalModel {
    pub fn new(field: FieldSpec, a: Vec<Scalar>, b: Vec<Scalar>) -> Self {
        NormalizedLocalModel { field, a, b }
    }

    fn y(&self) -> Series {
        let f = &self.field;
        let mut y = vec![f.zero(), f.zero(), f.one()];
        y.extend(self.a.iter().cloned());
        y
    }

    fn z(&self) -> Series {
        let f = &self.field;
        let mut z = vec![f.zero(); 3];
        z.extend(self.b.iter().cloned());
        z
    }

    /// Normal components of `D(t) - q(s) - ((x(t) - x_q) / x'(t)) D'(t)`
    /// modulo `t^2`, as polynomials in `s`. With `x = t`, `x_q = 1` the
    /// coefficient of `t^k` in a component `w` is `(1 - k) w_k + (k + 1) w_{k+1}`
    /// minus the target's component at `k = 0`.
    pub fn pointing(&self) -> [Vec<Vec<Scalar>>; 2] {
        let f = self.field;
        let comp = |w: &Series, target: Vec<Scalar>| -> Vec<Vec<Scalar>> {
            (0..2usize)
                .map(|k| {
                    let wk = w.get(k).cloned().unwrap_or(f.zero());
                    let wk1 = w.get(k + 1).cloned().unwrap_or(f.zero());
                    let c = f.add(&f.mul(&f.from_i64(1 - k as i64), &wk), &f.mul(&f.from_i64(k as i64 + 1), &wk1));
                    let mut poly = vec![c];
                    if k == 0 {
                        poly = uni::add(&f, &poly, &target.iter().map(|x| f.neg(x)).collect::<Vec<_>>());
                    }
                    uni::trim(&f, &mut poly);
                    poly
                })
                .collect()
        };
        // q(s) has y-component 0 and z-component s
        [comp(&self.y(), vec![f.zero()]), comp(&self.z(), vec![f.zero(), f.one()])]
    }

    /// The jet-2 functionals on `(m_0, m_1, n_0, n_1)` as polynomials in `s`.
    pub fn jet2_rows(&self) -> ParametricRows {
        let f = self.field;
        let [va, vb] = self.pointing();
        let neg = |p: &Vec<Scalar>| p.iter().map(|x| f.neg(x)).collect::<Vec<_>>();
        let zero = Vec::new();
        ParametricRows {
            field: f,
            rows: vec![
                vec![neg(&vb[0]), zero.clone(), va[0].clone(), zero.clone()],
                vec![neg(&vb[1]), neg(&vb[0]), va[1].clone(), va[0].clone()],
            ],
        }
    }
}

impl ParametricRows {
    pub fn at(&self, s: &Scalar) -> Vec<Vector> {
        let f = &self.field;
        self.rows.iter().map(|row| row.iter().map(|p| uni::eval(f, p, s)).collect()).collect()
    }

    /// Reduced row echelon basis of the span at `s`.
    pub fn subspace_at(&self, s: &Scalar) -> Vec<Vector> {
        let mut rows = self.at(s);
        linalg::rref(&self.field, &mut rows);
        rows
    }

    /// Limit of the row span as `s -> 0` in the Grassmannian.
    ///
    /// While the rows are dependent at `s = 0`, a left null combination
    /// `Σ c_j R_j` vanishes at `0`; dividing it by `s` replaces the row with
    /// the largest index in its support. The loop terminates because each
    /// step lowers the total `s`-degree of the Plücker coordinates' vanishing
    /// order; a row combination that is identically zero means the rows do
    /// not span a family of constant rank.
    pub fn limit_at_zero(&self) -> Result<Vec<Vector>> {
        let f = self.field;
        let mut rows = self.rows.clone();
        let zero = f.zero();
        for _ in 0..256 {
            let at0 = self.with_rows(&rows).at(&zero);
            let ncols = at0.first().map_or(0, |r| r.len());
            let transposed: Vec<Vector> = (0..ncols).map(|j| at0.iter().map(|r| r[j].clone()).collect()).collect();
            let left_null = linalg::nullspace(&f, &transposed, rows.len());
            let Some(c) = left_null.first() else {
                let mut out = at0;
                linalg::rref(&f, &mut out);
                return Ok(out);
            };
            let last = c.iter().rposition(|x| !f.is_zero(x)).expect("nonzero null vector");
            let width = rows[0].len();
            let mut combo: Vec<Vec<Scalar>> = vec![Vec::new(); width];
            for (cj, row) in c.iter().zip(&rows) {
                for (acc, p) in combo.iter_mut().zip(row) {
                    *acc = uni::add(&f, acc, &uni::scale(&f, p, cj));
                }
            }
            if combo.iter().all(|p| uni::is_zero(&f, p)) {
                return Err(Error::Invariant("parametric rows are dependent for all s".into()));
            }
            rows[last] = combo
                .into_iter()
                .map(|mut p| {
                    uni::trim(&f, &mut p);
                    debug_assert!(p.first().is_none_or(|x| f.is_zero(x)));
                    if p.is_empty() {
                        p
                    } else {
                        p[1..].to_vec()
                    }
                })
                .collect();
        }
        Err(Error::BoundExceeded(256))
    }

    fn with_rows(&self, rows: &[Vec<Vec<Scalar>>]) -> ParametricRows {
        ParametricRows { field: self.field, rows: rows.to_vec() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(f: &FieldSpec, rows: &[&[i64]]) -> Vec<Vector> {
        rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect()
    }

    fn model(f: FieldSpec) -> NormalizedLocalModel {
        NormalizedLocalModel::new(f, vec![f.from_i64(3), f.from_i64(-1)], vec![f.from_i64(5)])
    }

    #[test]
    fn model_conditions_away_from_zero() {
        let q = FieldSpec::Rationals;
        let rows = model(q).jet2_rows();
        for s in [1, -2, 7] {
            let mut expected = ints(&q, &[&[1, 0, 0, 0], &[0, s, 2, 0]]);
            linalg::rref(&q, &mut expected);
            assert_eq!(rows.subspace_at(&q.from_i64(s)), expected);
        }
    }

    #[test]
    fn grassmannian_limits() {
        let q = FieldSpec::Rationals;
        assert_eq!(model(q).jet2_rows().limit_at_zero().unwrap(), ints(&q, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]));
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(model(f2).jet2_rows().limit_at_zero().unwrap(), ints(&f2, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]));
    }

    #[test]
    fn series_inverse_identity() {
        let f = FieldSpec::prime(7).unwrap();
        let b: SeriesMatrix =
            vec![ints(&f, &[&[1, 2], &[0, 1]]), ints(&f, &[&[3, 0], &[1, 1]]), ints(&f, &[&[0, 5], &[2, 0]])];
        let x = series_matrix_inverse(&f, &b, 3).unwrap();
        for m in 0..3 {
            let mut acc = vec![vec![f.zero(); 2]; 2];
            for j in 0..=m {
                let prod = linalg::mat_mul(&f, &b[j], &x[m - j]);
                for (ar, pr) in acc.iter_mut().zip(&prod) {
                    for (a, p) in ar.iter_mut().zip(pr) {
                        *a = f.add(a, p);
                    }
                }
            }
            let expected = if m == 0 { ints(&f, &[&[1, 0], &[0, 1]]) } else { ints(&f, &[&[0, 0], &[0, 0]]) };
            assert_eq!(acc, expected);
        }
    }

    #[test]
    fn determinant_route_matches_span_route() {
        let q = FieldSpec::Rationals;
        let c = CurveMap::from_ints(q, &[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]]).unwrap();
        let p = ProjPoint::from_ints(q, 2, 1).unwrap();
        let target: Vector = [1, -1, 3, 2].iter().map(|&x| q.from_i64(x)).collect();
        let cond = jet2_condition(&c, &p, &target).unwrap();
        let det = cond.jet_functionals(&q);
        assert_eq!(linalg::rank(&q, &det), 2);
        let mut gens = jacobian_columns(&c, &p, 2);
        gens.push(target.iter().map(|x| truncated(&q, std::slice::from_ref(x), 2)).collect());
        let span = span_membership_functionals(&q, &gens, 4, 2);
        assert_eq!(span.len(), 2);
        let mut both = det.clone();
        both.extend(span);
        assert_eq!(linalg::rank(&q, &both), 2);
    }

    #[test]
    fn jet2_needs_space_curves() {
        let q = FieldSpec::Rationals;
        let conic = CurveMap::from_ints(q, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]).unwrap();
        let p = ProjPoint::from_ints(q, 0, 1).unwrap();
        let e = ints(&q, &[&[0, 0, 1]]).remove(0);
        assert!(matches!(jet2_condition(&conic, &p, &e), Err(Error::UnsupportedRank(2))));
    }
}
