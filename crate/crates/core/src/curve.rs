//! Parametrized rational curves `P^1 -> P^r` and the splitting types of their
//! normal and restricted tangent bundles.
//!
//! The normal bundle is read off the extended Jacobian `[f | ∂_s f | ∂_t f]`:
//! its left kernel is `N^∨(d)` in every characteristic, so a minimal
//! generator of degree `m` contributes a summand `O(d + m)` to `N`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldJson, FieldSpec, Scalar};
use crate::graded::{self, GradedMatrix, KernelGenerators};
use crate::linalg::{self, Vector};
use crate::poly::{HomogPoly, ProjPoint};

/// Coefficients of random curves over Q are drawn from `[-QBOX, QBOX]`.
pub const QBOX: i64 = 10;
/// Draw budget for [`random_curve`].
pub const RANDOM_CURVE_RETRIES: usize = 10_000;

/// Multiset `{a_i}` with `E = ⊕ O(a_i)`, stored ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SplittingType {
    parts: Vec<i64>,
}

impl SplittingType {
    pub fn new(mut parts: Vec<i64>) -> Self {
        parts.sort_unstable();
        SplittingType { parts }
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn degree(&self) -> i64 {
        self.parts.iter().sum()
    }

    /// `max - min <= 1`.
    pub fn is_balanced(&self) -> bool {
        match (self.parts.first(), self.parts.last()) {
            (Some(lo), Some(hi)) => hi - lo <= 1,
            _ => true,
        }
    }

    pub fn twisted(&self, k: i64) -> Self {
        SplittingType::new(self.parts.iter().map(|a| a + k).collect())
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A degree-`d` map `[f_0 : ... : f_r]` from `P^1` to `P^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveMap {
    field: FieldSpec,
    d: usize,
    f: Vec<HomogPoly>,
}

impl CurveMap {
    /// Zero forms may have any degree; nonzero forms must share a degree `d >= 1`.
    pub fn new(field: FieldSpec, f: Vec<HomogPoly>) -> Result<Self> {
        if f.len() < 2 {
            return Err(Error::InvalidCurve("need r >= 1 (at least two forms)".into()));
        }
        if let Some(bad) = f.iter().find(|p| p.field() != field) {
            return Err(Error::FieldMismatch(bad.field().to_string(), field.to_string()));
        }
        let d = f
            .iter()
            .filter(|p| !p.is_zero())
            .map(HomogPoly::degree)
            .next()
            .ok_or_else(|| Error::InvalidCurve("all forms vanish".into()))?;
        if d == 0 {
            return Err(Error::InvalidCurve("degree must be at least 1".into()));
        }
        if let Some(p) = f.iter().find(|p| !p.is_zero() && p.degree() != d) {
            return Err(Error::DegreeMismatch(p.degree(), d));
        }
        let f = f.into_iter().map(|p| if p.is_zero() { HomogPoly::zero(field, d) } else { p }).collect();
        Ok(CurveMap { field, d, f })
    }

    /// Each row lists `[c_0, ..., c_d]` with `c_i` the coefficient of `s^i t^(d-i)`.
    pub fn from_ints(field: FieldSpec, rows: &[&[i64]]) -> Result<Self> {
        let f = rows.iter().map(|c| HomogPoly::from_ints(field, c)).collect();
        Self::new(field, f)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Target dimension `r`.
    pub fn ambient_dim(&self) -> usize {
        self.f.len() - 1
    }

    pub fn forms(&self) -> &[HomogPoly] {
        &self.f
    }

    /// Image point `f(p)` as a coordinate vector.
    pub fn point(&self, p: &ProjPoint) -> Vector {
        self.f.iter().map(|fi| fi.eval_at(p)).collect()
    }

    /// Applies `x -> G x` on `P^r` and the Möbius map `(s, t) -> (a s + b t, c s + d t)`.
    pub fn transform(&self, g: &[Vector], mobius: [[Scalar; 2]; 2]) -> Result<Self> {
        let fld = self.field;
        let moved: Vec<HomogPoly> = self.f.iter().map(|p| p.substitute_linear(mobius.clone())).collect();
        let mut out = Vec::with_capacity(moved.len());
        for row in g {
            let mut acc = HomogPoly::zero(fld, self.d);
            for (c, p) in row.iter().zip(&moved) {
                acc = acc.add(&p.scale(c))?;
            }
            out.push(acc);
        }
        Self::new(fld, out)
    }
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub basepoint_free: bool,
    /// Dimension of the linear span of the image (rank of the coefficient matrix minus 1).
    pub span_dimension: usize,
    pub nondegenerate: bool,
    pub unramified: bool,
}

impl ValidationReport {
    /// Basepoint-free, not constant, and unramified.
    pub fn is_valid(&self) -> bool {
        self.basepoint_free && self.span_dimension >= 1 && self.unramified
    }

    pub fn failure(&self) -> Option<String> {
        if !self.basepoint_free {
            Some("basepoint".into())
        } else if self.span_dimension < 1 {
            Some("image is a point".into())
        } else if !self.unramified {
            Some("ramified".into())
        } else {
            None
        }
    }
}

fn gcd_all<'a>(field: FieldSpec, polys: impl IntoIterator<Item = &'a HomogPoly>) -> HomogPoly {
    polys.into_iter().fold(HomogPoly::zero(field, 0), |acc, p| acc.gcd(p).expect("same field"))
}

/// Basepoint-freeness, span dimension and unramifiedness of `c`.
pub fn validate(c: &CurveMap) -> ValidationReport {
    let fld = c.field;
    let g = gcd_all(fld, &c.f);
    let basepoint_free = !g.is_zero() && g.degree() == 0;
    let coeff_rows: Vec<Vector> = c.f.iter().map(|p| p.coeffs().to_vec()).collect();
    let span_dimension = linalg::rank(&fld, &coeff_rows).saturating_sub(1);
    let jac = ExtendedJacobian::new(c);
    let minors = jac.minors();
    let mg = gcd_all(fld, &minors);
    let unramified = !mg.is_zero() && mg.degree() == 0;
    ValidationReport { basepoint_free, span_dimension, nondegenerate: span_dimension == c.ambient_dim(), unramified }
}

pub(crate) fn require_valid(c: &CurveMap) -> Result<()> {
    match validate(c).failure() {
        None => Ok(()),
        Some(why) => Err(Error::InvalidCurve(why)),
    }
}

/// The `(r+1) × 3` matrix `[f | ∂_s f | ∂_t f]` with column degrees `(d, d-1, d-1)`.
#[derive(Clone, Debug)]
pub struct ExtendedJacobian {
    matrix: GradedMatrix,
}

impl ExtendedJacobian {
    pub fn new(c: &CurveMap) -> Self {
        let d = c.d as i64;
        let entries = c.f.iter().map(|p| vec![p.clone(), p.partial_s(), p.partial_t()]).collect();
        let matrix =
            GradedMatrix::new(c.field, entries, vec![d, d - 1, d - 1]).expect("jacobian columns are homogeneous");
        ExtendedJacobian { matrix }
    }

    pub fn matrix(&self) -> &GradedMatrix {
        &self.matrix
    }

    /// All 2 × 2 minors.
    pub fn minors(&self) -> Vec<HomogPoly> {
        let m = &self.matrix;
        let mut out = Vec::new();
        for i in 0..m.rows() {
            for j in i + 1..m.rows() {
                for a in 0..3 {
                    for b in a + 1..3 {
                        let x = m.entry(i, a).mul(m.entry(j, b)).unwrap();
                        let y = m.entry(j, a).mul(m.entry(i, b)).unwrap();
                        out.push(x.sub(&y).unwrap());
                    }
                }
            }
        }
        out
    }

    /// `s ∂_s f + t ∂_t f = d f`, row by row.
    pub fn euler_relation_holds(&self) -> bool {
        let m = &self.matrix;
        let fld = m.field();
        let d = m.col_degrees()[0];
        (0..m.rows()).all(|i| {
            let lhs = HomogPoly::s(fld)
                .mul(m.entry(i, 1))
                .unwrap()
                .add(&HomogPoly::t(fld).mul(m.entry(i, 2)).unwrap())
                .unwrap();
            let rhs = m.entry(i, 0).scale(&fld.from_i64(d));
            lhs.sub(&rhs).unwrap().is_zero()
        })
    }

    /// Columns evaluated at `p`, as vectors in `k^(r+1)`.
    pub fn columns_at(&self, p: &ProjPoint) -> Vec<Vector> {
        let m = &self.matrix;
        (0..3).map(|j| (0..m.rows()).map(|i| m.entry(i, j).eval_at(p)).collect()).collect()
    }

    /// Local expansions of the three columns in the chart at `p`:
    /// `result[j][i]` is the `u`-series of entry `(i, j)`.
    pub fn column_series(&self, p: &ProjPoint) -> Vec<Vec<Vec<Scalar>>> {
        let m = &self.matrix;
        (0..3).map(|j| (0..m.rows()).map(|i| m.entry(i, j).local_expansion(p)).collect()).collect()
    }
}

/// Default degree bound `3d + 4` for kernel scans of curve matrices.
pub fn default_degree_bound(d: usize) -> usize {
    3 * d + 4
}

/// Minimal generators of the left kernel of the extended Jacobian (`N^∨(d)`).
pub fn normal_kernel(c: &CurveMap) -> Result<KernelGenerators> {
    normal_kernel_bounded(c, default_degree_bound(c.d))
}

pub fn normal_kernel_bounded(c: &CurveMap, degree_bound: usize) -> Result<KernelGenerators> {
    require_valid(c)?;
    let jac = ExtendedJacobian::new(c);
    graded::kernel_generators(jac.matrix(), c.ambient_dim() - 1, degree_bound)
}

/// Splitting type of `N_C`: parts `d + m_i` over the kernel generator degrees.
pub fn normal_splitting(c: &CurveMap) -> Result<SplittingType> {
    normal_splitting_bounded(c, default_degree_bound(c.d))
}

/// [`normal_splitting`] with an explicit kernel scan bound.
pub fn normal_splitting_bounded(c: &CurveMap, degree_bound: usize) -> Result<SplittingType> {
    let kernel = normal_kernel_bounded(c, degree_bound)?;
    let d = c.d as i64;
    let r = c.ambient_dim() as i64;
    let st = SplittingType::new(kernel.profile.degrees().iter().map(|m| d + m).collect());
    let expected = (r + 1) * d - 2;
    if st.rank() as i64 != r - 1 || st.degree() != expected {
        return Err(Error::DegenerateCurve(format!(
            "normal splitting {st} has rank {} and degree {}, expected rank {} and degree {expected}",
            st.rank(),
            st.degree(),
            r - 1
        )));
    }
    Ok(st)
}

/// Splitting type of `T_{P^r}|_C` from the syzygies of `(f_0, ..., f_r)`.
pub fn restricted_tangent_splitting(c: &CurveMap) -> Result<SplittingType> {
    restricted_tangent_splitting_bounded(c, default_degree_bound(c.d))
}

/// [`restricted_tangent_splitting`] with an explicit kernel scan bound.
pub fn restricted_tangent_splitting_bounded(c: &CurveMap, degree_bound: usize) -> Result<SplittingType> {
    let report = validate(c);
    if !report.basepoint_free || report.span_dimension < 1 {
        return Err(Error::InvalidCurve(report.failure().unwrap_or_default()));
    }
    let d = c.d as i64;
    let r = c.ambient_dim();
    let col = GradedMatrix::column(c.field, &c.f, d)?;
    let prof = graded::minimal_generators(&col, r, degree_bound)?;
    let st = SplittingType::new(prof.degrees().iter().map(|n| d + n).collect());
    let expected = (r as i64 + 1) * d;
    if st.rank() != r || st.degree() != expected {
        return Err(Error::DegenerateCurve(format!(
            "tangent splitting {st} has degree {}, expected {expected}",
            st.degree()
        )));
    }
    Ok(st)
}

/// A seeded random curve and how it was drawn.
#[derive(Clone, Debug)]
pub struct RandomCurve {
    pub curve: CurveMap,
    pub seed: u64,
    /// Number of invalid draws discarded before `curve`.
    pub rerolls: usize,
}

/// Draws a valid curve of degree `d` in `P^r` from a seeded ChaCha stream.
///
/// Coefficients are uniform on `[-QBOX, QBOX]` over Q and uniform on F_p.
/// Invalid draws are discarded; the result depends only on the inputs.
pub fn random_curve(d: usize, r: usize, field: FieldSpec, seed: u64) -> Result<RandomCurve> {
    if d < 1 || r < 2 {
        return Err(Error::Precondition(format!("random_curve needs d >= 1, r >= 2 (got d={d}, r={r})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for rerolls in 0..RANDOM_CURVE_RETRIES {
        let f: Vec<HomogPoly> = (0..=r)
            .map(|_| {
                let coeffs = (0..=d).map(|_| random_scalar(&mut rng, field)).collect();
                HomogPoly::new(field, coeffs).expect("field elements")
            })
            .collect();
        let Ok(curve) = CurveMap::new(field, f) else {
            continue;
        };
        if validate(&curve).is_valid() {
            return Ok(RandomCurve { curve, seed, rerolls });
        }
    }
    Err(Error::RetriesExhausted(RANDOM_CURVE_RETRIES))
}

pub(crate) fn random_scalar(rng: &mut impl Rng, field: FieldSpec) -> Scalar {
    match field {
        FieldSpec::Rationals => field.from_i64(rng.gen_range(-QBOX..=QBOX)),
        FieldSpec::PrimeField(p) => Scalar::Modular(rng.gen_range(0..p.get())),
    }
}

/// The fiber `k^(r+1) / colspan A(p)` of `N_C` at `p`, with a canonical
/// normal form for classes.
#[derive(Clone, Debug)]
pub struct NormalFiber {
    field: FieldSpec,
    span_rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl NormalFiber {
    pub fn at(c: &CurveMap, p: &ProjPoint) -> Result<Self> {
        if p.field() != c.field {
            return Err(Error::FieldMismatch(p.field().to_string(), c.field.to_string()));
        }
        let jac = ExtendedJacobian::new(c);
        let mut span_rows = jac.columns_at(p);
        let pivots = linalg::rref(&c.field, &mut span_rows);
        if pivots.len() != 2 {
            return Err(Error::InvalidCurve(format!("ramified at {p}")));
        }
        Ok(NormalFiber { field: c.field, span_rows, pivots })
    }

    /// Canonical representative: `v` with the pivot coordinates of the
    /// tangent span cleared.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.span_rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let factor = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = f.sub(x, &f.mul(&factor, r));
            }
        }
        v
    }

    pub fn is_zero_class(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Basis of the projective tangent line at the point (two vectors).
    pub fn tangent_span(&self) -> &[Vector] {
        &self.span_rows
    }
}

/// `W(e)`: degree-`e` forms in `r+1` coordinates modulo the column space of
/// the extended Jacobian in degree `e`. For `e >= d - 1` this is
/// `H^0(N_C ⊗ O(e - d))`.
#[derive(Clone, Debug)]
pub struct SectionSlice {
    curve: CurveMap,
    degree: usize,
    image: linalg::EchelonBasis,
    quotient_coords: Vec<usize>,
}

/// Slice coordinates of every element of a spanning set of the column
/// space of the extended Jacobian in degree `e`.
pub(crate) fn image_spanning_set(c: &CurveMap, e: usize) -> Vec<Vector> {
    let fld = c.field;
    let jac = ExtendedJacobian::new(c);
    let m = jac.matrix();
    let mut out = Vec::new();
    for j in 0..3 {
        let mult_deg = e as i64 - m.col_degrees()[j];
        if mult_deg < 0 {
            continue;
        }
        let mult_deg = mult_deg as usize;
        for a in 0..=mult_deg {
            let mono = HomogPoly::monomial(fld, a, mult_deg - a, fld.one());
            let v: Vec<HomogPoly> =
                (0..m.rows())
                    .map(|i| {
                        if m.entry(i, j).is_zero() {
                            HomogPoly::zero(fld, e)
                        } else {
                            mono.mul(m.entry(i, j)).unwrap()
                        }
                    })
                    .collect();
            out.push(graded::slice_coordinates(&v, e));
        }
    }
    out
}

/// Builds `W(e)`; requires `e >= d - 1`.
pub fn section_slice(c: &CurveMap, e: usize) -> Result<SectionSlice> {
    if e + 1 < c.d {
        return Err(Error::Precondition(format!("section slice needs e >= d - 1 = {}", c.d - 1)));
    }
    require_valid(c)?;
    let mut image = linalg::EchelonBasis::new(c.field);
    for v in image_spanning_set(c, e) {
        image.insert(&v);
    }
    let dim = c.f.len() * (e + 1);
    let mut rows: Vec<Vector> = image_spanning_set(c, e);
    let pivots = linalg::rref(&c.field, &mut rows);
    let quotient_coords = (0..dim).filter(|i| !pivots.contains(i)).collect();
    Ok(SectionSlice { curve: c.clone(), degree: e, image, quotient_coords })
}

impl SectionSlice {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.quotient_coords.len()
    }

    pub fn image_dim(&self) -> usize {
        self.image.dim()
    }

    /// Monomial-vector representatives of a basis of `W(e)`.
    pub fn basis(&self) -> Vec<Vec<HomogPoly>> {
        let fld = self.curve.field;
        let n = self.curve.f.len() * (self.degree + 1);
        self.quotient_coords
            .iter()
            .map(|&i| {
                let mut x = vec![fld.zero(); n];
                x[i] = fld.one();
                graded::slice_forms(fld, &x, self.curve.f.len(), self.degree)
            })
            .collect()
    }

    /// True when a row of degree-`e` forms is zero in `W(e)`.
    pub fn is_zero_section(&self, w: &[HomogPoly]) -> bool {
        self.image.contains(&graded::slice_coordinates(w, self.degree))
    }

    /// Value of the section `w` in the fiber of `N_C` at `p`, in normal form.
    pub fn eval_at(&self, w: &[HomogPoly], p: &ProjPoint) -> Result<Vector> {
        let fiber = NormalFiber::at(&self.curve, p)?;
        let v: Vector = w.iter().map(|x| x.eval_at(p)).collect();
        Ok(fiber.reduce(&v))
    }

    /// Local `u`-expansion of `w` in the chart at `p`, truncated to `order` terms.
    pub fn jet_at(&self, w: &[HomogPoly], p: &ProjPoint, order: usize) -> Vec<Vector> {
        let fld = self.curve.field;
        w.iter()
            .map(|x| {
                let mut s = x.local_expansion(p);
                s.resize(order.max(s.len()), fld.zero());
                s.truncate(order);
                s
            })
            .collect()
    }

    /// Dimension predicted by a splitting `{a_i}` of `N_C`: `Σ max(0, a_i + e - d + 1)`.
    pub fn predicted_dim(splitting: &SplittingType, e: usize, d: usize) -> usize {
        splitting.parts().iter().map(|a| (a + e as i64 - d as i64 + 1).max(0) as usize).sum()
    }
}

/// Coefficient in a curve file: an integer or a `"num/den"` string.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum CoeffText {
    Int(i64),
    Text(String),
}

impl CoeffText {
    pub fn to_scalar(&self, field: FieldSpec) -> Result<Scalar> {
        match self {
            CoeffText::Int(v) => Ok(field.from_i64(*v)),
            CoeffText::Text(s) => field.parse_scalar(s),
        }
    }

    pub fn from_scalar(field: FieldSpec, x: &Scalar) -> Self {
        CoeffText::Text(field.format(x))
    }
}

/// On-disk curve format.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CurveFile {
    pub field: FieldJson,
    pub r: usize,
    pub d: usize,
    pub coeffs: Vec<Vec<CoeffText>>,
}

impl CurveFile {
    pub fn to_curve(&self) -> Result<CurveMap> {
        let field = FieldSpec::try_from(&self.field)?;
        if self.coeffs.len() != self.r + 1 {
            return Err(Error::Parse(format!("expected {} coordinate lists, found {}", self.r + 1, self.coeffs.len())));
        }
        let mut forms = Vec::new();
        for row in &self.coeffs {
            if row.len() != self.d + 1 {
                return Err(Error::Parse(format!(
                    "expected {} coefficients per form, found {}",
                    self.d + 1,
                    row.len()
                )));
            }
            let coeffs = row.iter().map(|c| c.to_scalar(field)).collect::<Result<Vec<_>>>()?;
            forms.push(HomogPoly::new(field, coeffs)?);
        }
        let curve = CurveMap::new(field, forms)?;
        if curve.degree() != self.d {
            return Err(Error::Parse(format!("declared d = {} but forms have degree {}", self.d, curve.degree())));
        }
        Ok(curve)
    }

    pub fn from_curve(c: &CurveMap) -> Self {
        let fld = c.field;
        CurveFile {
            field: fld.into(),
            r: c.ambient_dim(),
            d: c.d,
            coeffs: c.f.iter().map(|p| p.coeffs().iter().map(|x| CoeffText::from_scalar(fld, x)).collect()).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<CurveMap> {
        let file: CurveFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.to_curve()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn line(field: FieldSpec) -> CurveMap {
        CurveMap::from_ints(field, &[&[0, 1], &[1, 0], &[0, 0], &[0, 0]]).unwrap()
    }

    fn twisted_cubic(field: FieldSpec) -> CurveMap {
        CurveMap::from_ints(field, &[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]]).unwrap()
    }

    fn plane_conic() -> CurveMap {
        CurveMap::from_ints(q(), &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]).unwrap()
    }

    #[test]
    fn validation_examples() {
        let rep = validate(&line(q()));
        assert!(rep.is_valid());
        assert_eq!(rep.span_dimension, 1);
        assert!(!rep.nondegenerate);
        let conic = validate(&plane_conic());
        assert!(conic.is_valid());
        assert_eq!(conic.span_dimension, 2);
        // (s^2 t, s^3, s t^2, t^3) * s
        let based = CurveMap::from_ints(q(), &[&[0, 0, 1, 0, 0], &[0, 0, 0, 0, 1], &[0, 0, 1, 0, 0], &[0, 1, 0, 0, 0]])
            .unwrap();
        let rep = validate(&based);
        assert!(!rep.basepoint_free);
        assert_eq!(rep.failure().as_deref(), Some("basepoint"));
    }

    #[test]
    fn cuspidal_curve_is_ramified() {
        // (s^3, s t^2, t^3, 0): cusp at [1:0]... image of [1:0] is (1,0,0,0)
        // and the derivative there is parallel to it.
        let cusp = CurveMap::from_ints(q(), &[&[0, 0, 0, 1], &[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 0]]).unwrap();
        let rep = validate(&cusp);
        assert!(rep.basepoint_free);
        assert!(!rep.unramified);
        assert!(matches!(normal_splitting(&cusp), Err(Error::InvalidCurve(_))));
    }

    #[test]
    fn normal_splitting_examples() {
        assert_eq!(normal_splitting(&line(q())).unwrap().parts(), &[1, 1]);
        assert_eq!(normal_splitting(&twisted_cubic(q())).unwrap().parts(), &[5, 5]);
        assert_eq!(normal_splitting(&plane_conic()).unwrap().parts(), &[2, 4]);
    }

    #[test]
    fn kernel_profiles() {
        let k = normal_kernel(&line(q())).unwrap();
        assert_eq!(k.profile.degrees(), &[0, 0]);
        let k = normal_kernel(&twisted_cubic(q())).unwrap();
        assert_eq!(k.profile.degrees(), &[2, 2]);
        assert_eq!(graded::slice_dimension(ExtendedJacobian::new(&twisted_cubic(q())).matrix(), 1), 0);
    }

    #[test]
    fn restricted_tangent_examples() {
        assert_eq!(restricted_tangent_splitting(&line(q())).unwrap().parts(), &[1, 1, 2]);
        assert_eq!(restricted_tangent_splitting(&twisted_cubic(q())).unwrap().parts(), &[4, 4, 4]);
    }

    #[test]
    fn euler_relation_in_all_characteristics() {
        for field in [q(), FieldSpec::prime(2).unwrap(), FieldSpec::prime(3).unwrap()] {
            assert!(ExtendedJacobian::new(&twisted_cubic(field)).euler_relation_holds());
        }
    }

    #[test]
    fn section_slice_dimensions() {
        // W(e) = H^0(N(e - d)); for {5,5} and d = 3 this is 2 (e + 3).
        let tc = twisted_cubic(q());
        assert_eq!(section_slice(&tc, 3).unwrap().dim(), 12);
        assert_eq!(section_slice(&tc, 2).unwrap().dim(), 10);
        assert_eq!(section_slice(&line(q()), 1).unwrap().dim(), 4);
        assert!(matches!(section_slice(&tc, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn fiber_evaluation() {
        let tc = twisted_cubic(q());
        let p = ProjPoint::from_ints(q(), 0, 1).unwrap();
        let fiber = NormalFiber::at(&tc, &p).unwrap();
        let e1: Vector = [1, 0, 0, 0].iter().map(|&x| q().from_i64(x)).collect();
        assert_eq!(fiber.reduce(&e1), e1);
        let on_tangent: Vector = [0, 0, 1, 1].iter().map(|&x| q().from_i64(x)).collect();
        assert!(fiber.is_zero_class(&on_tangent));
    }

    #[test]
    fn random_curves_are_deterministic() {
        let f = FieldSpec::prime(32003).unwrap();
        let a = random_curve(3, 3, f, 1).unwrap();
        let b = random_curve(3, 3, f, 1).unwrap();
        assert_eq!(a.curve, b.curve);
        assert_eq!(normal_splitting(&a.curve).unwrap().parts(), &[5, 5]);
        let l = random_curve(1, 3, q(), 9).unwrap();
        assert_eq!(l.curve.degree(), 1);
        assert_eq!(normal_splitting(&l.curve).unwrap().parts(), &[1, 1]);
        assert!(random_curve(3, 1, q(), 0).is_err());
    }

    #[test]
    fn curve_file_round_trip() {
        let text = r#"{"field": {"kind": "Q"}, "r": 3, "d": 1,
                       "coeffs": [["0", "1"], [1, 0], ["0", "0"], ["0/5", 0]]}"#;
        let c = CurveFile::parse(text).unwrap();
        assert_eq!(c, line(q()));
        let back = serde_json::to_string(&CurveFile::from_curve(&c)).unwrap();
        assert_eq!(CurveFile::parse(&back).unwrap(), c);
        assert!(
            CurveFile::parse(r#"{"field": {"kind": "Fp", "p": 6}, "r": 1, "d": 1, "coeffs": [[0,1],[1,0]]}"#).is_err()
        );
    }
}
