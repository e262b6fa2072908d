//! Homogeneous forms in two variables `s`, `t` and points of the projective line.
//!
//! A form of degree `d` stores `d + 1` coefficients; index `i` holds the
//! coefficient of `s^i t^(d-i)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl HomogPoly {
    pub fn new(field: FieldSpec, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition("a form needs at least one coefficient".into()));
        }
        if let Some(bad) = coeffs.iter().find(|c| !field.contains(c)) {
            return Err(Error::FieldMismatch(format!("{bad:?}"), field.to_string()));
        }
        Ok(HomogPoly { field, coeffs })
    }

    pub fn from_ints(field: FieldSpec, coeffs: &[i64]) -> Self {
        assert!(!coeffs.is_empty(), "a form needs at least one coefficient");
        HomogPoly { field, coeffs: coeffs.iter().map(|&c| field.from_i64(c)).collect() }
    }

    pub fn zero(field: FieldSpec, degree: usize) -> Self {
        HomogPoly { field, coeffs: vec![field.zero(); degree + 1] }
    }

    /// `c * s^s_exp * t^t_exp`.
    pub fn monomial(field: FieldSpec, s_exp: usize, t_exp: usize, c: Scalar) -> Self {
        let mut coeffs = vec![field.zero(); s_exp + t_exp + 1];
        coeffs[s_exp] = c;
        HomogPoly { field, coeffs }
    }

    pub fn s(field: FieldSpec) -> Self {
        Self::monomial(field, 1, 0, field.one())
    }

    pub fn t(field: FieldSpec) -> Self {
        Self::monomial(field, 0, 1, field.one())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `s^i t^(d-i)`.
    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    /// Sum of two forms of equal degree; a zero operand adopts the other's degree.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.degree() != other.degree() {
            if other.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(other.clone());
            }
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        let f = self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.add(a, b)).collect();
        Ok(HomogPoly { field: f, coeffs })
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        HomogPoly { field: f, coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let f = self.field;
        HomogPoly { field: f, coeffs: self.coeffs.iter().map(|x| f.mul(x, c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let f = self.field;
        let mut coeffs = vec![f.zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !f.is_zero(b) {
                    coeffs[i + j] = f.add(&coeffs[i + j], &f.mul(a, b));
                }
            }
        }
        Ok(HomogPoly { field: f, coeffs })
    }

    /// Formal partial derivative in `s`; exponents are reduced in the field,
    /// so `d/ds s^2 = 0` in characteristic 2.
    pub fn partial_s(&self) -> Self {
        let f = self.field;
        if self.degree() == 0 {
            return Self::zero(f, 0);
        }
        let coeffs = (1..=self.degree()).map(|i| f.mul(&f.from_i64(i as i64), &self.coeffs[i])).collect();
        HomogPoly { field: f, coeffs }
    }

    /// Formal partial derivative in `t`.
    pub fn partial_t(&self) -> Self {
        let f = self.field;
        let d = self.degree();
        if d == 0 {
            return Self::zero(f, 0);
        }
        let coeffs = (0..d).map(|i| f.mul(&f.from_i64((d - i) as i64), &self.coeffs[i])).collect();
        HomogPoly { field: f, coeffs }
    }

    /// Monic greatest common divisor (leading `s`-coefficient 1).
    ///
    /// `gcd(0, 0)` is the zero form of degree 0.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let f = self.field;
        if self.is_zero() {
            return Ok(other.monic());
        }
        if other.is_zero() {
            return Ok(self.monic());
        }
        // Dehomogenize at t = 1; the power of t dividing each form is the
        // gap between its degree and the degree of the dehomogenization.
        let (a, a_tpow) = self.dehomogenize();
        let (b, b_tpow) = other.dehomogenize();
        let g = uni::gcd(&f, &a, &b);
        let tpow = a_tpow.min(b_tpow);
        let mut coeffs = g;
        let deg = coeffs.len() - 1 + tpow;
        coeffs.resize(deg + 1, f.zero());
        Ok(HomogPoly { field: f, coeffs })
    }

    fn dehomogenize(&self) -> (Vec<Scalar>, usize) {
        let mut u = self.coeffs.clone();
        uni::trim(&self.field, &mut u);
        let tpow = self.degree() + 1 - u.len();
        (u, tpow)
    }

    /// Scales so that the highest nonzero `s`-coefficient is 1.
    pub fn monic(&self) -> Self {
        let f = self.field;
        match self.coeffs.iter().rposition(|c| !f.is_zero(c)) {
            None => self.clone(),
            Some(i) => self.scale(&f.inv(&self.coeffs[i]).expect("nonzero")),
        }
    }

    pub fn eval(&self, s0: &Scalar, t0: &Scalar) -> Result<Scalar> {
        let f = self.field;
        if f.is_zero(s0) && f.is_zero(t0) {
            return Err(Error::EvaluationAtOrigin);
        }
        let mut acc = f.zero();
        let mut spow = f.one();
        let tpows: Vec<Scalar> = {
            let mut v = vec![f.one()];
            for _ in 0..self.degree() {
                v.push(f.mul(v.last().unwrap(), t0));
            }
            v
        };
        for (i, c) in self.coeffs.iter().enumerate() {
            if !f.is_zero(c) {
                acc = f.add(&acc, &f.mul(c, &f.mul(&spow, &tpows[self.degree() - i])));
            }
            spow = f.mul(&spow, s0);
        }
        Ok(acc)
    }

    pub fn eval_at(&self, p: &ProjPoint) -> Scalar {
        self.eval(&p.s, &p.t).expect("projective points are nonzero")
    }

    /// Expansion in the local coordinate `u` of the standard chart at `p`
    /// (see [`ProjPoint::chart`]), as a full univariate polynomial in `u`.
    pub fn local_expansion(&self, p: &ProjPoint) -> Vec<Scalar> {
        let f = self.field;
        match p.chart() {
            Chart::TOne(sigma) => {
                // Horner in (sigma + u).
                let mut acc: Vec<Scalar> = vec![f.zero()];
                let shift = vec![sigma, f.one()];
                for c in self.coeffs.iter().rev() {
                    acc = uni::mul(&f, &acc, &shift);
                    acc[0] = f.add(&acc[0], c);
                }
                acc.resize(self.degree() + 1, f.zero());
                acc
            }
            Chart::SOne => {
                // F(1, u) = sum c_i u^(d-i)
                self.coeffs.iter().rev().cloned().collect()
            }
        }
    }

    /// Substitutes `s -> a s + b t`, `t -> c s + d t`.
    pub fn substitute_linear(&self, m: [[Scalar; 2]; 2]) -> Self {
        let f = self.field;
        let new_s = HomogPoly { field: f, coeffs: vec![m[0][1].clone(), m[0][0].clone()] };
        let new_t = HomogPoly { field: f, coeffs: vec![m[1][1].clone(), m[1][0].clone()] };
        let d = self.degree();
        let mut s_pows = vec![HomogPoly::from_ints(f, &[1])];
        let mut t_pows = vec![HomogPoly::from_ints(f, &[1])];
        for _ in 0..d {
            s_pows.push(s_pows.last().unwrap().mul(&new_s).unwrap());
            t_pows.push(t_pows.last().unwrap().mul(&new_t).unwrap());
        }
        let mut acc = HomogPoly::zero(f, d);
        for (i, c) in self.coeffs.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let term = s_pows[i].mul(&t_pows[d - i]).unwrap().scale(c);
            acc = acc.add(&term).unwrap();
        }
        acc
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = self.field;
        let d = self.degree();
        let mut first = true;
        for i in (0..=d).rev() {
            let c = &self.coeffs[i];
            if f.is_zero(c) {
                continue;
            }
            let (neg, mag) = if f.is_negative(c) { (true, f.neg(c)) } else { (false, c.clone()) };
            let text = f.format(&mag);
            if first {
                if neg {
                    write!(out, "-")?;
                }
            } else {
                write!(out, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mut factors = Vec::new();
            let unit = mag == f.one();
            if !unit || d == 0 {
                factors.push(text);
            }
            for (var, e) in [("s", i), ("t", d - i)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            write!(out, "{}", factors.join("*"))?;
        }
        if first {
            write!(out, "0")?;
        }
        Ok(())
    }
}

/// A point `[s0 : t0]` of the projective line.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    field: FieldSpec,
    s: Scalar,
    t: Scalar,
}

/// Affine chart used for local expansions at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chart {
    /// `t = 1`, the point sits at `s = sigma`, local coordinate `u = s - sigma`.
    TOne(Scalar),
    /// `s = 1`, the point is `[1 : 0]`, local coordinate `u = t`.
    SOne,
}

impl ProjPoint {
    pub fn new(field: FieldSpec, s: Scalar, t: Scalar) -> Result<Self> {
        if field.is_zero(&s) && field.is_zero(&t) {
            return Err(Error::EvaluationAtOrigin);
        }
        if !field.contains(&s) || !field.contains(&t) {
            return Err(Error::FieldMismatch(format!("{s:?}, {t:?}"), field.to_string()));
        }
        Ok(ProjPoint { field, s, t })
    }

    pub fn from_ints(field: FieldSpec, s: i64, t: i64) -> Result<Self> {
        Self::new(field, field.from_i64(s), field.from_i64(t))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn s(&self) -> &Scalar {
        &self.s
    }

    pub fn t(&self) -> &Scalar {
        &self.t
    }

    /// Chart `t = 1` whenever `t0 != 0`, otherwise `s = 1`.
    pub fn chart(&self) -> Chart {
        let f = &self.field;
        if f.is_zero(&self.t) {
            Chart::SOne
        } else {
            Chart::TOne(f.div(&self.s, &self.t).expect("t0 nonzero"))
        }
    }

    /// Projective equality.
    pub fn same_as(&self, other: &ProjPoint) -> bool {
        let f = &self.field;
        f.mul(&self.s, &other.t) == f.mul(&other.s, &self.t)
    }

    /// Candidate points `[0:1], [1:0], [1:1], [1:2], ...` in a fixed order,
    /// at most `q + 1` of them over F_q.
    pub fn enumerate(field: FieldSpec) -> impl Iterator<Item = ProjPoint> {
        let bound = field.order().map_or(u64::MAX, |q| q + 1);
        (0..bound).map(move |k| match k {
            0 => ProjPoint::from_ints(field, 0, 1).unwrap(),
            1 => ProjPoint::from_ints(field, 1, 0).unwrap(),
            k => ProjPoint::new(field, field.one(), field.from_i64(k as i64 - 1)).unwrap(),
        })
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.field.format(&self.s), self.field.format(&self.t))
    }
}

/// Dense univariate polynomials, lowest degree first.
pub mod uni {
    use crate::field::{FieldSpec, Scalar};

    pub fn trim(f: &FieldSpec, p: &mut Vec<Scalar>) {
        while p.len() > 1 && f.is_zero(p.last().unwrap()) {
            p.pop();
        }
    }

    pub fn is_zero(f: &FieldSpec, p: &[Scalar]) -> bool {
        p.iter().all(|c| f.is_zero(c))
    }

    pub fn add(f: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => f.add(x, y),
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!(),
            })
            .collect()
    }

    pub fn scale(f: &FieldSpec, a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
        a.iter().map(|x| f.mul(x, c)).collect()
    }

    pub fn mul(f: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![f.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !f.is_zero(y) {
                    out[i + j] = f.add(&out[i + j], &f.mul(x, y));
                }
            }
        }
        out
    }

    /// Product truncated to the first `order` coefficients.
    pub fn mul_trunc(f: &FieldSpec, a: &[Scalar], b: &[Scalar], order: usize) -> Vec<Scalar> {
        let mut out = vec![f.zero(); order];
        for (i, x) in a.iter().enumerate().take(order) {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(order - i) {
                if !f.is_zero(y) {
                    out[i + j] = f.add(&out[i + j], &f.mul(x, y));
                }
            }
        }
        out
    }

    /// Remainder of `a` modulo a nonzero `b`.
    pub fn rem(f: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut b = b.to_vec();
        trim(f, &mut b);
        let mut r = a.to_vec();
        trim(f, &mut r);
        let lead_inv = f.inv(b.last().unwrap()).expect("divisor is nonzero");
        while r.len() >= b.len() && !is_zero(f, &r) {
            let shift = r.len() - b.len();
            let factor = f.mul(r.last().unwrap(), &lead_inv);
            for (i, c) in b.iter().enumerate() {
                r[i + shift] = f.sub(&r[i + shift], &f.mul(&factor, c));
            }
            r.pop();
            trim(f, &mut r);
        }
        r
    }

    /// Monic gcd by the Euclidean algorithm; `gcd(0, 0) = 0`.
    pub fn gcd(f: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(f, &mut x);
        trim(f, &mut y);
        while !is_zero(f, &y) {
            let r = rem(f, &x, &y);
            x = y;
            y = r;
        }
        if is_zero(f, &x) {
            return vec![f.zero()];
        }
        let inv = f.inv(x.last().unwrap()).expect("nonzero");
        scale(f, &x, &inv)
    }

    pub fn eval(f: &FieldSpec, p: &[Scalar], x: &Scalar) -> Scalar {
        p.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }
}
