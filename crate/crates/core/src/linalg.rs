//! Dense Gaussian elimination over a [`FieldSpec`].
//!
//! Pivoting is deterministic: the pivot of each column is the first
//! nonzero entry at or below the current row. Identical inputs always
//! produce identical bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::{FieldSpec, Scalar};

pub type Vector = Vec<Scalar>;

/// Row-reduces `rows` in place to reduced row echelon form, drops zero
/// rows, and returns the pivot column of each remaining row.
pub fn rref(field: &FieldSpec, rows: &mut Vec<Vector>) -> Vec<usize> {
    if *field == FieldSpec::Rationals {
        return rref_rational(rows);
    }
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&i| !field.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(next, found);
        let inv = field.inv(&rows[next][col]).expect("pivot is nonzero");
        for x in rows[next].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[next].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == next || field.is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !field.is_zero(p) {
                    *x = field.sub(x, &field.mul(&factor, p));
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    pivots
}

pub fn rank(field: &FieldSpec, rows: &[Vector]) -> usize {
    if *field == FieldSpec::Rationals {
        let mut work = integer_rows(rows);
        return bareiss(&mut work, false).len();
    }
    let mut work = rows.to_vec();
    rref(field, &mut work).len()
}

/// Rows scaled by the lcm of their denominators.
fn integer_rows(rows: &[Vector]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let rats: Vec<&BigRational> = row
                .iter()
                .map(|x| match x {
                    Scalar::Rational(q) => q,
                    Scalar::Modular(_) => panic!("modular scalar in a rational matrix"),
                })
                .collect();
            let l = rats.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            rats.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect()
}

/// Fraction-free elimination. Every intermediate entry is a minor of the
/// input, so all divisions are exact. With `reduce` the rows above each
/// pivot are cleared too and every pivot ends up equal to the last one.
/// Zero rows are dropped; returns the pivot columns.
fn bareiss(a: &mut Vec<Vec<BigInt>>, reduce: bool) -> Vec<usize> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next == a.len() {
            break;
        }
        let Some(found) = (next..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(next, found);
        let piv_row = a[next].clone();
        let p = piv_row[col].clone();
        let start = if reduce { 0 } else { next + 1 };
        for (i, row) in a.iter_mut().enumerate().skip(start) {
            if i == next {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&piv_row) {
                let v = &p * &*x - &factor * y;
                *x = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = p;
        pivots.push(col);
        next += 1;
    }
    a.truncate(next);
    pivots
}

fn rref_rational(rows: &mut Vec<Vector>) -> Vec<usize> {
    let mut work = integer_rows(rows);
    let pivots = bareiss(&mut work, true);
    // After full reduction every pivot equals the last one; divide it out.
    *rows = work
        .into_iter()
        .zip(&pivots)
        .map(|(row, &pc)| {
            let d = row[pc].clone();
            row.into_iter()
                .map(|x| {
                    Scalar::Rational(if x.is_zero() { BigRational::zero() } else { BigRational::new(x, d.clone()) })
                })
                .collect()
        })
        .collect();
    pivots
}

/// Basis of `{x : M x = 0}` for the matrix with the given rows and `ncols` columns.
///
/// One basis vector per free column, in increasing column order; the
/// free coordinate is 1.
pub fn nullspace(field: &FieldSpec, rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut work = rows.to_vec();
    let pivots = rref(field, &mut work);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![field.zero(); ncols];
        x[free] = field.one();
        for (row, &p) in work.iter().zip(&pivots) {
            x[p] = field.neg(&row[free]);
        }
        basis.push(x);
    }
    basis
}

/// Canonical scalar multiple of a nonzero vector: first nonzero entry 1
/// over a prime field, primitive integer vector with positive first
/// nonzero entry over Q. Zero vectors are returned unchanged.
pub fn normalize(field: &FieldSpec, v: Vector) -> Vector {
    let Some(lead) = v.iter().find(|c| !field.is_zero(c)).cloned() else {
        return v;
    };
    if *field != FieldSpec::Rationals {
        let inv = field.inv(&lead).expect("nonzero");
        return v.iter().map(|c| field.mul(c, &inv)).collect();
    }
    let mut ints = integer_rows(std::slice::from_ref(&v)).remove(0);
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let lead_negative = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x < &BigInt::zero());
    for x in ints.iter_mut() {
        *x = &*x / &g;
        if lead_negative {
            *x = -&*x;
        }
    }
    ints.into_iter().map(|x| Scalar::Rational(BigRational::from_integer(x))).collect()
}

/// Basis of the functionals vanishing on the span of `vectors` inside `k^dim`.
pub fn annihilator(field: &FieldSpec, vectors: &[Vector], dim: usize) -> Vec<Vector> {
    nullspace(field, vectors, dim)
}

pub fn dot(field: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        if !field.is_zero(x) && !field.is_zero(y) {
            acc = field.add(&acc, &field.mul(x, y));
        }
    }
    acc
}

pub fn mat_vec(field: &FieldSpec, m: &[Vector], v: &[Scalar]) -> Vector {
    m.iter().map(|row| dot(field, row, v)).collect()
}

pub fn mat_mul(field: &FieldSpec, a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    let ncols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| {
                    let col: Vector = b.iter().map(|r| r[j].clone()).collect();
                    dot(field, row, &col)
                })
                .collect()
        })
        .collect()
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(field: &FieldSpec, m: &[Vector]) -> Option<Vec<Vector>> {
    let n = m.len();
    let mut aug: Vec<Vector> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let pivots = rref(field, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A subspace kept in echelon form, grown one vector at a time.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: FieldSpec,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(field: FieldSpec) -> Self {
        EchelonBasis { field, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let factor = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !f.is_zero(r) {
                    *x = f.sub(x, &f.mul(&factor, r));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let f = self.field;
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[p]).expect("nonzero");
        for x in r.iter_mut() {
            *x = f.mul(x, &inv);
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(field: &FieldSpec, rows: &[&[i64]]) -> Vec<Vector> {
        rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect()
    }

    #[test]
    fn nullspace_of_rank_one() {
        let q = FieldSpec::Rationals;
        let m = ints(&q, &[&[1, 2, 3], &[2, 4, 6]]);
        let ker = nullspace(&q, &m, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(mat_vec(&q, &m, v).iter().all(|x| q.is_zero(x)));
        }
        assert_eq!(ker[0], ints(&q, &[&[-2, 1, 0]])[0]);
    }

    #[test]
    fn rank_drops_mod_p() {
        let m = [&[1, 1][..], &[1, 3][..]];
        assert_eq!(rank(&FieldSpec::Rationals, &ints(&FieldSpec::Rationals, &m)), 2);
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(rank(&f2, &ints(&f2, &m)), 1);
    }

    #[test]
    fn inverse_round_trip() {
        let f = FieldSpec::prime(101).unwrap();
        let m = ints(&f, &[&[2, 1, 0], &[0, 1, 5], &[7, 0, 1]]);
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(mat_mul(&f, &m, &inv), ints(&f, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert!(inverse(&f, &ints(&f, &[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn fraction_free_matches_field_elimination() {
        // Same matrix as a generic-path reference, computed mod a large prime
        // and compared after reducing the rational answer.
        let q = FieldSpec::Rationals;
        let m = ints(&q, &[&[2, 4, -2, 6], &[1, 3, 5, 0], &[3, 7, 3, 6], &[0, 0, 0, 0], &[4, -1, 2, 9]]);
        let mut r = m.clone();
        let piv = rref(&q, &mut r);
        assert_eq!(piv, vec![0, 1, 2]);
        assert_eq!(rank(&q, &m), 3);
        for (i, row) in r.iter().enumerate() {
            for (j, &p) in piv.iter().enumerate() {
                assert_eq!(row[p], if i == j { q.one() } else { q.zero() });
            }
        }
        // every original row lies in the span of the reduced rows
        let mut b = EchelonBasis::new(q);
        for row in &r {
            assert!(b.insert(row));
        }
        assert!(m.iter().all(|row| b.contains(row)));
        let half = Scalar::Rational(BigRational::new(1.into(), 2.into()));
        let frac = vec![vec![half.clone(), q.one()], vec![q.one(), q.from_i64(2)]];
        assert_eq!(rank(&q, &frac), 1);
    }

    #[test]
    fn echelon_basis_tracks_span() {
        let q = FieldSpec::Rationals;
        let mut b = EchelonBasis::new(q);
        let vs = ints(&q, &[&[0, 1, 1], &[1, 1, 0], &[1, 2, 1], &[0, 0, 1]]);
        let grew: Vec<bool> = vs.iter().map(|v| b.insert(v)).collect();
        assert_eq!(grew, vec![true, true, false, true]);
        assert_eq!(b.dim(), 3);
    }
}
