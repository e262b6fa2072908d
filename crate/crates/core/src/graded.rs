//! Graded matrices over `k[s, t]` and their left kernels.
//!
//! A left-kernel vector of degree `m` is a row `v` of degree-`m` forms with
//! `v · M = 0`. Over a polynomial ring in two variables the left kernel of a
//! graded matrix is a free graded module; its minimal generator degrees are
//! what the splitting-type computations read off.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{self, EchelonBasis, Vector};
use crate::poly::HomogPoly;

/// Matrix of forms; every nonzero entry of column `j` has degree `col_degrees[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    field: FieldSpec,
    entries: Vec<Vec<HomogPoly>>,
    col_degrees: Vec<i64>,
}

impl GradedMatrix {
    pub fn new(field: FieldSpec, entries: Vec<Vec<HomogPoly>>, col_degrees: Vec<i64>) -> Result<Self> {
        if entries.is_empty() || col_degrees.is_empty() {
            return Err(Error::Precondition("graded matrix needs rows and columns".into()));
        }
        for row in &entries {
            if row.len() != col_degrees.len() {
                return Err(Error::Precondition("ragged graded matrix".into()));
            }
            for (entry, &deg) in row.iter().zip(&col_degrees) {
                if entry.field() != field {
                    return Err(Error::FieldMismatch(entry.field().to_string(), field.to_string()));
                }
                if !entry.is_zero() && entry.degree() as i64 != deg {
                    return Err(Error::DegreeMismatch(entry.degree(), deg.max(0) as usize));
                }
            }
        }
        Ok(GradedMatrix { field, entries, col_degrees })
    }

    /// A single column of forms of one degree.
    pub fn column(field: FieldSpec, forms: &[HomogPoly], degree: i64) -> Result<Self> {
        Self::new(field, forms.iter().map(|f| vec![f.clone()]).collect(), vec![degree])
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.col_degrees.len()
    }

    pub fn col_degrees(&self) -> &[i64] {
        &self.col_degrees
    }

    pub fn entry(&self, i: usize, j: usize) -> &HomogPoly {
        &self.entries[i][j]
    }

    /// `v · M` for a row of forms of a common degree; `None` entries mark
    /// columns whose product degree would be negative.
    pub fn left_multiply(&self, v: &[HomogPoly]) -> Result<Vec<HomogPoly>> {
        let f = self.field;
        let m = v.first().map_or(0, |x| x.degree());
        (0..self.cols())
            .map(|j| {
                let deg = m as i64 + self.col_degrees[j];
                let mut acc = HomogPoly::zero(f, deg.max(0) as usize);
                for (vi, row) in v.iter().zip(&self.entries) {
                    if vi.is_zero() || row[j].is_zero() {
                        continue;
                    }
                    acc = acc.add(&vi.mul(&row[j])?)?;
                }
                Ok(acc)
            })
            .collect()
    }
}

/// Minimal generator degrees of a graded free module, ascending, with repeats.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct GeneratorProfile {
    degrees: Vec<i64>,
}

impl GeneratorProfile {
    pub fn new(mut degrees: Vec<i64>) -> Self {
        degrees.sort_unstable();
        GeneratorProfile { degrees }
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// Dimension in degree `m` of the free module with these generators.
    pub fn hilbert(&self, m: i64) -> usize {
        self.degrees.iter().map(|&g| (m - g + 1).max(0) as usize).sum()
    }
}

/// Index of the unknown for row `i`, monomial `s^(m-k) t^k` in a degree-`m`
/// slice. Monomials run with the `s`-exponent descending.
fn unknown(m: usize, i: usize, k: usize) -> usize {
    i * (m + 1) + k
}

/// Coefficient vector (in the slice layout) of a row of degree-`m` forms.
pub fn slice_coordinates(v: &[HomogPoly], m: usize) -> Vector {
    let f = v[0].field();
    let mut out = vec![f.zero(); v.len() * (m + 1)];
    for (i, form) in v.iter().enumerate() {
        if form.is_zero() {
            continue;
        }
        for k in 0..=m {
            out[unknown(m, i, k)] = form.coeff(m - k).clone();
        }
    }
    out
}

/// Row of degree-`m` forms from slice coordinates.
pub fn slice_forms(field: FieldSpec, x: &[Scalar], rows: usize, m: usize) -> Vec<HomogPoly> {
    (0..rows)
        .map(|i| {
            let coeffs = (0..=m).map(|e| x[unknown(m, i, m - e)].clone()).collect();
            HomogPoly::new(field, coeffs).expect("coefficients from the same field")
        })
        .collect()
}

/// Linear system whose solutions are the degree-`m` left-kernel vectors.
pub fn slice_equations(mat: &GradedMatrix, m: usize) -> Vec<Vector> {
    let f = mat.field;
    let nunk = mat.rows() * (m + 1);
    let mut eqs = Vec::new();
    for j in 0..mat.cols() {
        let out_deg = m as i64 + mat.col_degrees[j];
        if out_deg < 0 {
            continue;
        }
        let out_deg = out_deg as usize;
        let cdeg = mat.col_degrees[j] as usize;
        let mut block = vec![vec![f.zero(); nunk]; out_deg + 1];
        for i in 0..mat.rows() {
            let entry = &mat.entries[i][j];
            if entry.is_zero() {
                continue;
            }
            for l in 0..=cdeg {
                let c = entry.coeff(l);
                if f.is_zero(c) {
                    continue;
                }
                for k in 0..=m {
                    // s^(m-k) * s^l lands on s-exponent m - k + l
                    block[m - k + l][unknown(m, i, k)] = c.clone();
                }
            }
        }
        eqs.extend(block);
    }
    eqs
}

/// Basis of the degree-`m` slice of the left kernel of `mat`.
///
/// Over a prime field each basis vector has first nonzero coordinate 1;
/// over Q it is a primitive integer vector with positive first nonzero
/// coordinate.
pub fn degree_slice_kernel(mat: &GradedMatrix, m: usize) -> Vec<Vec<HomogPoly>> {
    let f = mat.field;
    let nunk = mat.rows() * (m + 1);
    let eqs = slice_equations(mat, m);
    linalg::nullspace(&f, &eqs, nunk)
        .into_iter()
        .map(|x| slice_forms(f, &linalg::normalize(&f, x), mat.rows(), m))
        .collect()
}

/// Dimension of the degree-`m` kernel slice.
pub fn slice_dimension(mat: &GradedMatrix, m: usize) -> usize {
    let f = mat.field;
    let nunk = mat.rows() * (m + 1);
    nunk - linalg::rank(&f, &slice_equations(mat, m))
}

/// A minimal generating set of the left kernel.
#[derive(Clone, Debug)]
pub struct KernelGenerators {
    pub profile: GeneratorProfile,
    /// Generators with their degrees, in the order they were found.
    pub generators: Vec<(usize, Vec<HomogPoly>)>,
    /// Last degree scanned before stopping.
    pub stop_degree: usize,
}

/// Multiplies a row of forms by the monomial `s^a t^b`.
fn shift_row(v: &[HomogPoly], a: usize, b: usize) -> Vec<HomogPoly> {
    let f = v[0].field();
    let mono = HomogPoly::monomial(f, a, b, f.one());
    v.iter().map(|x| x.mul(&mono).expect("same field")).collect()
}

/// Scans degrees `0..=degree_bound` and extracts minimal generators of the
/// left kernel of `mat`.
///
/// Stops once `expected_rank` generators are known and the free module they
/// generate has the kernel's Hilbert function in two consecutive degrees.
pub fn kernel_generators(mat: &GradedMatrix, expected_rank: usize, degree_bound: usize) -> Result<KernelGenerators> {
    let f = mat.field;
    let mut gens: Vec<(usize, Vec<HomogPoly>)> = Vec::new();
    let mut consecutive = 0;
    for m in 0..=degree_bound {
        let slice = degree_slice_kernel(mat, m);
        let mut span = EchelonBasis::new(f);
        let mut multiples = 0usize;
        for (g_deg, g) in &gens {
            let shift = m - g_deg;
            for a in (0..=shift).rev() {
                multiples += 1;
                if !span.insert(&slice_coordinates(&shift_row(g, a, shift - a), m)) {
                    return Err(Error::Invariant(format!("generator multiples dependent in degree {m}")));
                }
            }
        }
        debug_assert_eq!(multiples, span.dim());
        for v in slice.iter() {
            if span.insert(&slice_coordinates(v, m)) {
                gens.push((m, v.clone()));
            }
        }
        if span.dim() != slice.len() {
            return Err(Error::Invariant(format!("kernel slice not spanned in degree {m}")));
        }
        let profile = GeneratorProfile::new(gens.iter().map(|(d, _)| *d as i64).collect());
        if gens.len() == expected_rank && profile.hilbert(m as i64) == slice.len() {
            consecutive += 1;
        } else {
            consecutive = 0;
        }
        if consecutive >= 2 {
            for (_, g) in &gens {
                if !mat.left_multiply(g)?.iter().all(HomogPoly::is_zero) {
                    return Err(Error::Invariant("generator is not a syzygy".into()));
                }
            }
            return Ok(KernelGenerators { profile, generators: gens, stop_degree: m });
        }
    }
    Err(Error::BoundExceeded(degree_bound))
}

/// Minimal generator degrees of the left kernel of `mat`.
pub fn minimal_generators(mat: &GradedMatrix, expected_rank: usize, degree_bound: usize) -> Result<GeneratorProfile> {
    kernel_generators(mat, expected_rank, degree_bound).map(|k| k.profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn forms(field: FieldSpec, rows: &[&[i64]]) -> Vec<HomogPoly> {
        rows.iter().map(|c| HomogPoly::from_ints(field, c)).collect()
    }

    /// Column (s, t)^T.
    fn koszul_column() -> GradedMatrix {
        GradedMatrix::column(q(), &forms(q(), &[&[0, 1], &[1, 0]]), 1).unwrap()
    }

    #[test]
    fn koszul_syzygy_in_degree_one() {
        let ker = degree_slice_kernel(&koszul_column(), 1);
        assert_eq!(ker.len(), 1);
        // (t, -s)
        assert_eq!(ker[0], forms(q(), &[&[1, 0], &[0, -1]]));
        assert!(degree_slice_kernel(&koszul_column(), 0).is_empty());
    }

    #[test]
    fn twisted_cubic_column_slice() {
        // (s^3, s^2 t, s t^2, t^3)^T
        let col = forms(q(), &[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]]);
        let mat = GradedMatrix::column(q(), &col, 3).unwrap();
        let ker = degree_slice_kernel(&mat, 1);
        assert_eq!(ker.len(), 3);
        // Oracle: the three listed Koszul-type syzygies span the same space.
        let t = [1, 0];
        let ms = [0, -1];
        let z = [0, 0];
        let expected = [forms(q(), &[&t, &ms, &z, &z]), forms(q(), &[&z, &t, &ms, &z]), forms(q(), &[&z, &z, &t, &ms])];
        let mut span = EchelonBasis::new(q());
        for v in &ker {
            span.insert(&slice_coordinates(v, 1));
        }
        for v in &expected {
            assert!(span.contains(&slice_coordinates(v, 1)));
        }
    }

    #[test]
    fn generators_of_line_column() {
        // (s, t, 0, 0)^T: e3, e4 in degree 0 and the Koszul syzygy in degree 1
        let col = forms(q(), &[&[0, 1], &[1, 0], &[0, 0], &[0, 0]]);
        let mat = GradedMatrix::column(q(), &col, 1).unwrap();
        let prof = minimal_generators(&mat, 3, 10).unwrap();
        assert_eq!(prof.degrees(), &[0, 0, 1]);
    }

    #[test]
    fn wrong_rank_exceeds_bound() {
        let mat = koszul_column();
        assert!(matches!(minimal_generators(&mat, 2, 6), Err(Error::BoundExceeded(6))));
    }

    #[test]
    fn column_degree_is_enforced() {
        let bad = GradedMatrix::column(q(), &forms(q(), &[&[0, 1], &[1, 0, 0]]), 1);
        assert!(bad.is_err());
    }

    #[test]
    fn hilbert_of_profile() {
        let p = GeneratorProfile::new(vec![2, 0]);
        assert_eq!(p.degrees(), &[0, 2]);
        assert_eq!(p.hilbert(0), 1);
        assert_eq!(p.hilbert(3), 4 + 2);
    }
}
