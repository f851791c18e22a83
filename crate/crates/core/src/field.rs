//! Coefficient fields: the rationals and prime fields.
//!
//! Coefficients are stored as `BigRational` in both cases. Over a prime
//! field every stored value is an integer in `0..p`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Coeff = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Field {
    characteristic: u64,
}

impl Field {
    pub const RATIONALS: Field = Field { characteristic: 0 };

    pub fn rationals() -> Self {
        Self::RATIONALS
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Field { characteristic: p })
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn is_rationals(&self) -> bool {
        self.characteristic == 0
    }

    /// Rejects characteristic 2 for constructions that need 2 to be invertible.
    pub fn require_odd_or_zero(&self, context: &str) -> Result<()> {
        if self.characteristic == 2 {
            return Err(Error::InvalidField(format!("{context} requires characteristic != 2")));
        }
        Ok(())
    }

    pub fn reduce(&self, c: Coeff) -> Coeff {
        if self.characteristic == 0 {
            return c;
        }
        let p = BigInt::from(self.characteristic);
        let num = c.numer().mod_floor(&p);
        let den = c.denom().mod_floor(&p);
        let inv = mod_inverse(&den, &p).expect("denominator divisible by the characteristic");
        BigRational::from_integer((num * inv).mod_floor(&p))
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        self.reduce(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(&self, n: i64, d: i64) -> Coeff {
        self.reduce(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero(&self) -> Coeff {
        Coeff::zero()
    }

    pub fn one(&self) -> Coeff {
        Coeff::one()
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        self.reduce(-a)
    }

    pub fn inv(&self, a: &Coeff) -> Coeff {
        assert!(!a.is_zero(), "inverse of zero");
        if self.characteristic == 0 {
            return a.recip();
        }
        let p = BigInt::from(self.characteristic);
        let inv = mod_inverse(a.numer(), &p).expect("nonzero element of a prime field");
        BigRational::from_integer(inv)
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.mul(a, &self.inv(b))
    }

    /// All elements of a prime field, or `None` over the rationals.
    pub fn elements(&self) -> Option<Vec<Coeff>> {
        if self.characteristic == 0 {
            return None;
        }
        Some((0..self.characteristic).map(|i| self.from_i64(i as i64)).collect())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.characteristic == 0 {
            write!(f, "Q")
        } else {
            write!(f, "Fp {}", self.characteristic)
        }
    }
}

/// Canonical text for a coefficient: an integer or `a/b`.
pub fn coeff_to_string(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn parse_coeff(s: &str) -> Option<Coeff> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}

pub fn is_negative(c: &Coeff) -> bool {
    c.is_negative()
}

pub fn small_value(c: &Coeff) -> Option<i64> {
    if c.is_integer() {
        c.numer().to_i64()
    } else {
        None
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(p);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(p))
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
