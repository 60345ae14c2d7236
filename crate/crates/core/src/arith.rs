//! Exact scalars: arbitrary-precision rationals and prime fields.

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::Rng;
use std::fmt;

/// An exact field element. No floating point is admitted behind this trait.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Element of the prime field F_p. Each element carries its modulus so that
/// values from different fields cannot be mixed silently. The neutral
/// elements from [`Scalar::zero`]/[`Scalar::one`] carry modulus 0 until they
/// touch a concrete field element; equality compares values only.
#[derive(Clone, Copy, Eq, Debug)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        debug_assert!(
            self.p == 0 || other.p == 0 || self.p == other.p,
            "comparing elements of different prime fields"
        );
        self.v == other.v
    }
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        let m = v.rem_euclid(p as i64) as u64;
        Fp { v: m, p }
    }

    pub fn from_u64(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp { v: 1, p: self.p };
        while e > 0 {
            if e & 1 == 1 {
                acc = Scalar::mul(&acc, &base);
            }
            base = Scalar::mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Scalar for Fp {
    fn zero() -> Self {
        // The modulus of a bare zero is patched on first arithmetic contact.
        Fp { v: 0, p: 0 }
    }
    fn one() -> Self {
        Fp { v: 1, p: 0 }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        let p = unify(self.p, rhs.p);
        if p == 0 {
            return Fp { v: self.v + rhs.v, p: 0 };
        }
        Fp { v: (self.v % p + rhs.v % p) % p, p }
    }
    fn sub(&self, rhs: &Self) -> Self {
        let p = unify(self.p, rhs.p);
        if p == 0 {
            return Fp { v: self.v - rhs.v, p: 0 };
        }
        Fp { v: (self.v % p + p - rhs.v % p) % p, p }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let p = unify(self.p, rhs.p);
        if p == 0 {
            return Fp { v: self.v * rhs.v, p: 0 };
        }
        Fp { v: ((self.v as u128 * rhs.v as u128) % p as u128) as u64, p }
    }
    fn neg(&self) -> Self {
        if self.p == 0 {
            return *self;
        }
        Fp { v: (self.p - self.v % self.p) % self.p, p: self.p }
    }
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        debug_assert!(self.p > 1, "inverse needs a concrete modulus");
        Some(self.pow(self.p - 2))
    }
}

fn unify(a: u64, b: u64) -> u64 {
    match (a, b) {
        (0, p) | (p, 0) => p,
        (p, q) => {
            debug_assert_eq!(p, q, "mixed prime fields");
            p
        }
    }
}

/// Runtime description of a field, used to sample entries and to convert
/// integers. Matrices stay generic in the element type.
pub trait FieldOps {
    type Elem: Scalar;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn sample<R: Rng>(&self, rng: &mut R) -> Self::Elem;
    fn name(&self) -> String;
}

/// The rationals; random entries are integers drawn uniformly from
/// [-100, 100], which keeps intermediate values small while staying generic.
pub struct Rationals;

pub const RATIONAL_SAMPLE_BOX: i64 = 100;

impl FieldOps for Rationals {
    type Elem = BigRational;
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn sample<R: Rng>(&self, rng: &mut R) -> BigRational {
        let v = rng.gen_range(-RATIONAL_SAMPLE_BOX..=RATIONAL_SAMPLE_BOX);
        self.from_i64(v)
    }
    fn name(&self) -> String {
        "Q".into()
    }
}

/// A prime field F_p with runtime modulus. The default sampling prime is
/// [`DEFAULT_PRIME`]; a second prime is used for cross-validation.
pub struct PrimeField {
    pub p: u64,
}

pub const DEFAULT_PRIME: u64 = 1009;
pub const CROSSCHECK_PRIME: u64 = 2003;

impl FieldOps for PrimeField {
    type Elem = Fp;
    fn from_i64(&self, v: i64) -> Fp {
        Fp::new(v, self.p)
    }
    fn sample<R: Rng>(&self, rng: &mut R) -> Fp {
        Fp::from_u64(rng.gen_range(0..self.p), self.p)
    }
    fn name(&self) -> String {
        format!("F{}", self.p)
    }
}

/// Parse "a/b" or "a" as an exact rational.
pub fn parse_rational(s: &str) -> crate::Result<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| crate::Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Format a rational as "a" or "a/b" (lowest terms, as kept by BigRational).
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

/// True when the rational is strictly positive.
pub fn is_positive(r: &BigRational) -> bool {
    r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_field_axioms() {
        let p = 1009;
        let a = Fp::new(-5, p);
        assert_eq!(a.v, 1004);
        let b = Fp::from_u64(500, p);
        let ab = Scalar::mul(&a, &b);
        let inv = b.inv().unwrap();
        assert_eq!(Scalar::mul(&ab, &inv), a);
        assert_eq!(Scalar::add(&a, &a.neg()).v, 0);
    }

    #[test]
    fn rational_parse_roundtrip() {
        let r = parse_rational("-3/7").unwrap();
        assert_eq!(format_rational(&r), "-3/7");
        let r = parse_rational("12").unwrap();
        assert_eq!(format_rational(&r), "12");
    }
}
