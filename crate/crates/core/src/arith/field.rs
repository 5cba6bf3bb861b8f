//! Prime fields F_p with exact modular arithmetic.
//!
//! Moduli are restricted to machine-word primes below 2^16: everything
//! downstream enumerates rational points in O(p), so small p suffices, and
//! products of two residues always fit a u64 after widening to u128.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Largest admissible prime modulus (exclusive bound).
pub const MAX_PRIME: u64 = 1 << 16;

/// A validated prime modulus; the ambient coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// Validates that `p` is prime, greater than 3 and below 2^16.
    pub fn new(p: u64) -> Result<Self> {
        if p <= 3 {
            return Err(Error::InvalidInput(format!("modulus {p} is too small (need p > 3)")));
        }
        if p >= MAX_PRIME {
            return Err(Error::InvalidInput(format!("modulus {p} exceeds the 2^16 policy bound")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("modulus {p} is composite")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Canonical residue of an arbitrary integer.
    pub fn scalar(&self, value: i64) -> Scalar {
        let p = self.p as i64;
        let v = value.rem_euclid(p) as u64;
        Scalar { value: v, field: *self }
    }

    pub fn scalar_from_u64(&self, value: u64) -> Scalar {
        Scalar { value: value % self.p, field: *self }
    }

    pub fn zero(&self) -> Scalar {
        Scalar { value: 0, field: *self }
    }

    pub fn one(&self) -> Scalar {
        Scalar { value: 1, field: *self }
    }

    /// All field elements in ascending residue order.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        let f = *self;
        (0..self.p).map(move |v| Scalar { value: v, field: f })
    }
}

/// An element of F_p in canonical form: `value` is always reduced mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    value: u64,
    field: PrimeField,
}

impl Scalar {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check_field(&self, other: &Scalar) {
        assert_eq!(
            self.field, other.field,
            "scalar arithmetic across distinct prime fields"
        );
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn invert(&self) -> Result<Scalar> {
        if self.value == 0 {
            return Err(Error::ZeroInverse);
        }
        // Iterative extended Euclid on (p, value); p prime so the gcd is 1.
        let p = self.field.p as i64;
        let (mut r0, mut r1) = (p, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.field.scalar(t0))
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = *self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.check_field(&rhs);
        let p = self.field.p;
        let mut v = self.value + rhs.value;
        if v >= p {
            v -= p;
        }
        Scalar { value: v, field: self.field }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.check_field(&rhs);
        let p = self.field.p;
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + p - rhs.value
        };
        Scalar { value: v, field: self.field }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.check_field(&rhs);
        // Double-width intermediate keeps the product exact for any p < 2^16.
        let prod = (self.value as u128) * (rhs.value as u128);
        Scalar {
            value: (prod % self.field.p as u128) as u64,
            field: self.field,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        if self.value == 0 {
            self
        } else {
            Scalar { value: self.field.p - self.value, field: self.field }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
