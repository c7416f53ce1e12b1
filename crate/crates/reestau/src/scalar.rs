//! Exact coefficient fields: the rationals and prime fields F_p.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::Error;

/// The coefficient field of a polynomial ring: Q or F_p with p prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    /// Builds the prime field F_p, rejecting composite p by trial division.
    pub fn prime(p: u64) -> Result<FieldSpec, Error> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Fp { v: 0, p: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let r = n.rem_euclid(*p as i64) as u64;
                Scalar::Fp { v: r, p: *p }
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::from_integer(n.clone())),
            FieldSpec::Prime(p) => {
                let m = BigInt::from(*p);
                let r = ((n % &m) + &m) % &m;
                let (_, digits) = r.to_u64_digits();
                Scalar::Fp {
                    v: digits.first().copied().unwrap_or(0),
                    p: *p,
                }
            }
        }
    }

    /// All field elements, for brute-force enumeration. Only finite fields.
    pub fn elements(&self) -> Vec<Scalar> {
        match self {
            FieldSpec::Rational => panic!("cannot enumerate Q"),
            FieldSpec::Prime(p) => (0..*p).map(|v| Scalar::Fp { v, p: *p }).collect(),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. F_p values carry their modulus; mixing moduli
/// or mixing Q with F_p is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rat(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rational,
            Scalar::Fp { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Rat(a.recip())
            }
            Scalar::Fp { v, p } => {
                assert!(*v != 0, "inverse of zero");
                // Fermat: v^(p-2) mod p
                Scalar::Fp {
                    v: pow_mod(*v, *p - 2, *p),
                    p: *p,
                }
            }
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Scalar {
        self.mul(&rhs.inv())
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

fn pow_mod(b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut bb = b as u128 % p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % p as u128;
        }
        bb = bb * bb % p as u128;
        e >>= 1;
    }
    acc as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

/// True if the rational scalar is negative (used for sign-aware printing).
pub fn is_negative(s: &Scalar) -> bool {
    match s {
        Scalar::Rat(r) => r.is_negative(),
        Scalar::Fp { .. } => false,
    }
}

/// Binomial coefficient C(n, k) in the given field.
/// Over F_p the value is reduced via Lucas' theorem.
pub fn binomial(field: FieldSpec, n: u32, k: u32) -> Scalar {
    if k > n {
        return field.zero();
    }
    match field {
        FieldSpec::Rational => {
            let mut acc = BigInt::one();
            for i in 0..k {
                acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
            }
            field.from_bigint(&acc)
        }
        FieldSpec::Prime(p) => {
            // Lucas: C(n, k) = prod C(n_i, k_i) mod p over base-p digits.
            let mut n = n as u64;
            let mut k = k as u64;
            let mut acc = 1u64;
            while k > 0 || n > 0 {
                let (nd, kd) = (n % p, k % p);
                if kd > nd {
                    return field.zero();
                }
                acc = (acc as u128 * binom_small(nd, kd, p) as u128 % p as u128) as u64;
                n /= p;
                k /= p;
            }
            Scalar::Fp { v: acc, p }
        }
    }
}

fn binom_small(n: u64, k: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = (num as u128 * ((n - i) % p) as u128 % p as u128) as u64;
        den = (den as u128 * ((i + 1) % p) as u128 % p as u128) as u64;
    }
    (num as u128 * pow_mod(den, p - 2, p) as u128 % p as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_check() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(97).is_ok());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(91).is_err());
    }

    #[test]
    fn fp_arithmetic() {
        let f = FieldSpec::prime(5).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(4);
        assert_eq!(a.add(&b), f.from_i64(2));
        assert_eq!(a.mul(&b), f.from_i64(2));
        assert_eq!(a.inv().mul(&a), f.one());
        assert_eq!(f.from_i64(-1), f.from_i64(4));
    }

    #[test]
    fn rational_arithmetic() {
        let f = FieldSpec::Rational;
        let a = f.from_i64(2);
        assert_eq!(a.inv().mul(&a), f.one());
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn binomial_lucas() {
        let f2 = FieldSpec::prime(2).unwrap();
        // C(2,1) = 2 = 0 mod 2
        assert!(binomial(f2, 2, 1).is_zero());
        assert!(binomial(f2, 2, 2).is_one());
        let f3 = FieldSpec::prime(3).unwrap();
        // C(6,3) = 20 = 2 mod 3
        assert_eq!(binomial(f3, 6, 3), f3.from_i64(2));
        assert_eq!(binomial(FieldSpec::Rational, 6, 3), FieldSpec::Rational.from_i64(20));
    }
}
