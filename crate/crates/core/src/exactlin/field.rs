use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible prime modulus (exclusive).
pub const MAX_PRIME: u32 = 1 << 16;

/// The coefficient field: a prime field `F_p` with `p < 2^16`, or the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Prime(u32),
    Rationals,
}

/// A field element. `Fp` values are always reduced into `0..p`; the modulus
/// lives in the [`FieldSpec`] that produced the element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp(u32),
    Q(BigRational),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Input(format!("{p} is not prime")));
        }
        if p >= MAX_PRIME {
            return Err(Error::Input(format!("prime {p} exceeds the supported bound 2^16")));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// Cardinality of the field, `None` for the rationals.
    pub fn order(&self) -> Option<u32> {
        match self {
            FieldSpec::Prime(p) => Some(*p),
            FieldSpec::Rationals => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Prime(_) => Scalar::Fp(0),
            FieldSpec::Rationals => Scalar::Q(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Prime(_) => Scalar::Fp(1),
            FieldSpec::Rationals => Scalar::Q(BigRational::one()),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Fp(v.rem_euclid(*p as i64) as u32),
            FieldSpec::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            FieldSpec::Prime(p) => {
                let r = v % BigInt::from(*p);
                let r = if r.is_negative() { r + BigInt::from(*p) } else { r };
                Scalar::Fp(u32::try_from(r).expect("residue fits u32"))
            }
            FieldSpec::Rationals => Scalar::Q(BigRational::from_integer(v.clone())),
        }
    }

    /// `num / den`; fails when `den` vanishes in the field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let d = self.from_bigint(den);
        if self.is_zero(&d) {
            return Err(Error::Input(format!("denominator {den} vanishes in {self}")));
        }
        Ok(self.div(&self.from_bigint(num), &d))
    }

    /// Whether `s` is a valid element of this field.
    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (FieldSpec::Prime(p), Scalar::Fp(v)) => v < p,
            (FieldSpec::Rationals, Scalar::Q(_)) => true,
            _ => false,
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(v) => *v == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(v) => *v == 1,
            Scalar::Q(q) => q.is_one(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % p),
            (FieldSpec::Rationals, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x + y),
            _ => panic!("field mismatch in add"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + p - y) % p),
            (FieldSpec::Rationals, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x - y),
            _ => panic!("field mismatch in sub"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Prime(p), Scalar::Fp(x)) => Scalar::Fp((p - x) % p),
            (FieldSpec::Rationals, Scalar::Q(x)) => Scalar::Q(-x),
            _ => panic!("field mismatch in neg"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u64 * *y as u64) % *p as u64) as u32)
            }
            (FieldSpec::Rationals, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x * y),
            _ => panic!("field mismatch in mul"),
        }
    }

    /// Multiplicative inverse. Panics on zero; callers check first.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!self.is_zero(a), "inverse of zero");
        match (self, a) {
            (FieldSpec::Prime(p), Scalar::Fp(x)) => Scalar::Fp(mod_pow(*x as u64, *p as u64 - 2, *p as u64) as u32),
            (FieldSpec::Rationals, Scalar::Q(x)) => Scalar::Q(x.recip()),
            _ => panic!("field mismatch in inv"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    /// Render an element the way the input grammar reads it back.
    pub fn format(&self, a: &Scalar) -> String {
        match a {
            Scalar::Fp(v) => v.to_string(),
            Scalar::Q(q) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
        }
    }

    /// True when the element prints with a leading minus sign.
    pub fn is_negative(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(_) => false,
            Scalar::Q(q) => q.is_negative(),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Rationals => write!(f, "Q"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_large_primes() {
        assert!(FieldSpec::prime(4).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(65537).is_err());
        assert!(FieldSpec::prime(65521).is_ok());
    }

    #[test]
    fn wraparound_in_prime_field() {
        for p in [2u32, 3, 5, 7, 101, 65521] {
            let f = FieldSpec::prime(p).unwrap();
            let pm1 = f.from_i64(p as i64 - 1);
            assert!(f.is_zero(&f.add(&pm1, &f.one())));
            for v in 1..p.min(50) {
                let x = f.from_i64(v as i64);
                assert!(f.is_one(&f.mul(&x, &f.inv(&x))));
            }
        }
    }

    #[test]
    fn rationals_match_cross_multiplication() {
        let q = FieldSpec::Rationals;
        let pairs = [(1i64, 2i64, 3i64, 4i64), (-5, 7, 2, 3), (0, 1, 9, 11)];
        for (a, b, c, d) in pairs {
            let x = q.from_ratio(&a.into(), &b.into()).unwrap();
            let y = q.from_ratio(&c.into(), &d.into()).unwrap();
            let sum = q.add(&x, &y);
            let expected = q.from_ratio(&(a * d + c * b).into(), &(b * d).into()).unwrap();
            assert_eq!(sum, expected);
            let prod = q.mul(&x, &y);
            let expected = q.from_ratio(&(a * c).into(), &(b * d).into()).unwrap();
            assert_eq!(prod, expected);
        }
    }

    #[test]
    fn ratio_with_vanishing_denominator() {
        let f = FieldSpec::prime(3).unwrap();
        assert!(f.from_ratio(&1.into(), &6.into()).is_err());
        assert_eq!(f.from_ratio(&1.into(), &2.into()).unwrap(), Scalar::Fp(2));
    }
}
