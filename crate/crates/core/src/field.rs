//! Exact ground fields: the rationals and prime fields F_p with p < 2^62.
//!
//! Elements are carried as [`Scalar`] values and all arithmetic goes
//! through the owning [`FieldSpec`], so an element never meets a field
//! it does not belong to.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MODULUS_LIMIT: u64 = 1 << 62;

/// A primality-checked modulus below 2^62.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..MODULUS_LIMIT).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// Deterministic Miller-Rabin; the witness set is exact for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Which exact field the computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(Prime),
}

/// An element of some [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        Ok(FieldSpec::PrimeField(Prime::new(p)?))
    }

    /// 0 for the rationals, p for F_p.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => p.get(),
        }
    }

    /// Number of elements, or `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField(p) => Some(p.get()),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::PrimeField(_) => Scalar::Modular(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::PrimeField(p) => Scalar::Modular(v.rem_euclid(p.get() as i64) as u64),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(v.clone())),
            FieldSpec::PrimeField(p) => {
                let m = BigInt::from(p.get());
                Scalar::Modular(v.mod_floor(&m).to_u64().expect("reduced below modulus"))
            }
        }
    }

    /// Maps a rational into the field; fails if the denominator vanishes mod p.
    pub fn from_rational(&self, v: &BigRational) -> Result<Scalar> {
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rational(v.clone())),
            FieldSpec::PrimeField(_) => {
                let num = self.from_bigint(v.numer());
                let den = self.from_bigint(v.denom());
                let inv = self.inv(&den).ok_or_else(|| Error::NonInvertible(v.denom().to_string()))?;
                Ok(self.mul(&num, &inv))
            }
        }
    }

    /// True if `a` is a well-formed element of this field.
    pub fn contains(&self, a: &Scalar) -> bool {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(_)) => true,
            (FieldSpec::PrimeField(p), Scalar::Modular(v)) => *v < p.get(),
            _ => false,
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular(v) => *v == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (FieldSpec::PrimeField(p), Scalar::Modular(x), Scalar::Modular(y)) => {
                let s = x + y;
                Scalar::Modular(if s >= p.get() { s - p.get() } else { s })
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            (FieldSpec::PrimeField(p), Scalar::Modular(x)) => Scalar::Modular(if *x == 0 { 0 } else { p.get() - x }),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (FieldSpec::PrimeField(p), Scalar::Modular(x), Scalar::Modular(y)) => {
                Scalar::Modular(mul_mod(*x, *y, p.get()))
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => Scalar::Rational(x.recip()),
            (FieldSpec::PrimeField(p), Scalar::Modular(x)) => Scalar::Modular(pow_mod(*x, p.get() - 2, p.get())),
            _ => panic!("scalar does not belong to {self}"),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    pub fn pow(&self, a: &Scalar, exp: usize) -> Scalar {
        let mut acc = self.one();
        for _ in 0..exp {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Parses `"n"`, `"-n"` or `"n/d"` into the field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::Parse(format!("not a rational number: {text:?}"));
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        self.from_rational(&BigRational::new(num, den))
    }

    /// Canonical text form: `"n"` or `"n/d"` over Q, the residue in [0, p) over F_p.
    pub fn format(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rational(q) if q.is_integer() => q.numer().to_string(),
            Scalar::Rational(q) => format!("{}/{}", q.numer(), q.denom()),
            Scalar::Modular(v) => v.to_string(),
        }
    }

    /// Signed small-integer view, used for display of F_p residues and
    /// integral rationals. Returns `None` when no such view exists.
    pub fn to_i64(&self, a: &Scalar) -> Option<i64> {
        match a {
            Scalar::Rational(q) if q.is_integer() => q.numer().to_i64(),
            Scalar::Rational(_) => None,
            Scalar::Modular(v) => i64::try_from(*v).ok(),
        }
    }

    pub fn is_negative(&self, a: &Scalar) -> bool {
        matches!(a, Scalar::Rational(q) if q.is_negative())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F_{}", p.get()),
        }
    }
}

/// JSON shape `{"kind": "Q"|"Fp", "p": int?}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u64>,
}

impl TryFrom<&FieldJson> for FieldSpec {
    type Error = Error;

    fn try_from(value: &FieldJson) -> Result<Self> {
        match (value.kind.as_str(), value.p) {
            ("Q", None) => Ok(FieldSpec::Rationals),
            ("Fp", Some(p)) => FieldSpec::prime(p),
            ("Q", Some(_)) => Err(Error::Parse("field Q takes no modulus".into())),
            ("Fp", None) => Err(Error::Parse("field Fp needs \"p\"".into())),
            (other, _) => Err(Error::Parse(format!("unknown field kind {other:?}"))),
        }
    }
}

impl From<FieldSpec> for FieldJson {
    fn from(value: FieldSpec) -> Self {
        match value {
            FieldSpec::Rationals => FieldJson { kind: "Q".into(), p: None },
            FieldSpec::PrimeField(p) => FieldJson { kind: "Fp".into(), p: Some(p.get()) },
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `q`, `Q`, `f<p>`, `fp<p>` and `F_<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "q" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = lower
            .strip_prefix("fp")
            .or_else(|| lower.strip_prefix("f_"))
            .or_else(|| lower.strip_prefix('f'))
            .ok_or_else(|| Error::Parse(format!("unknown field {s:?}")))?;
        let p: u64 = digits.parse().map_err(|_| Error::Parse(format!("unknown field {s:?}")))?;
        FieldSpec::prime(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(32003));
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3215031751));
        assert!(matches!(FieldSpec::prime(4), Err(Error::NotPrime(4))));
        assert!(FieldSpec::prime(1 << 62).is_err());
    }

    #[test]
    fn characteristic() {
        assert_eq!(FieldSpec::Rationals.characteristic(), 0);
        assert_eq!(FieldSpec::prime(7).unwrap().characteristic(), 7);
    }

    #[test]
    fn modular_arithmetic() {
        let f = FieldSpec::prime(7).unwrap();
        let a = f.from_i64(-3);
        assert_eq!(a, Scalar::Modular(4));
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        assert_eq!(f.add(&a, &f.from_i64(3)), f.zero());
        assert_eq!(f.parse_scalar("1/2").unwrap(), Scalar::Modular(4));
        assert!(matches!(f.parse_scalar("1/7"), Err(Error::NonInvertible(_))));
        let big = FieldSpec::prime((1 << 61) - 1).unwrap();
        let x = big.from_i64(-1);
        assert_eq!(big.mul(&x, &x), big.one());
    }

    #[test]
    fn rational_text_round_trip() {
        let q = FieldSpec::Rationals;
        let x = q.parse_scalar("-6/4").unwrap();
        assert_eq!(q.format(&x), "-3/2");
        assert_eq!(q.format(&q.from_i64(5)), "5");
        assert!(q.parse_scalar("1/0").is_err());
        assert!(q.parse_scalar("abc").is_err());
    }

    #[test]
    fn field_names() {
        assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("f2".parse::<FieldSpec>().unwrap(), FieldSpec::prime(2).unwrap());
        assert_eq!("F_32003".parse::<FieldSpec>().unwrap(), FieldSpec::prime(32003).unwrap());
        assert!("f9".parse::<FieldSpec>().is_err());
    }
}
