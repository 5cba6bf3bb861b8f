//! Truncated power series over a prime field.
//!
//! A `TruncSeries` stores coefficients 0..precision-1 of a series in one
//! local parameter t. Arithmetic never claims more precision than the
//! weakest operand: sums and products are truncated to the minimum of the
//! operand precisions, and no operation silently extends a series.

use crate::arith::field::{PrimeField, Scalar};
use crate::error::{Error, Result};
use std::fmt;

/// Valuation of a truncated series: either the index of the first nonzero
/// coefficient, or a sentinel recording that every stored coefficient
/// vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(usize),
    /// All coefficients up to the stated precision are zero.
    AtLeast(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Scalar>,
    field: PrimeField,
}

impl TruncSeries {
    /// The zero series at the given precision.
    pub fn zero(field: PrimeField, precision: usize) -> Self {
        assert!(precision >= 1, "series precision must be positive");
        TruncSeries { coeffs: vec![field.zero(); precision], field }
    }

    /// Series with the given low-order coefficients, padded with zeros up to
    /// `precision`.
    pub fn from_coeffs(field: PrimeField, mut coeffs: Vec<Scalar>, precision: usize) -> Self {
        assert!(precision >= 1, "series precision must be positive");
        assert!(coeffs.len() <= precision, "more coefficients than precision");
        for c in &coeffs {
            assert_eq!(c.field(), field, "coefficient from a different field");
        }
        coeffs.resize(precision, field.zero());
        TruncSeries { coeffs, field }
    }

    /// The constant series c + O(t^precision).
    pub fn constant(c: Scalar, precision: usize) -> Self {
        Self::from_coeffs(c.field(), vec![c], precision)
    }

    /// The series c0 + t, exact to any precision; the standard local
    /// parameter attached to a free coordinate.
    pub fn linear(c0: Scalar, precision: usize) -> Self {
        assert!(precision >= 1);
        let field = c0.field();
        if precision == 1 {
            return Self::constant(c0, 1);
        }
        Self::from_coeffs(field, vec![c0, field.one()], precision)
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient, or the at-least-precision
    /// sentinel when the stored window is identically zero.
    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => Valuation::Finite(i),
            None => Valuation::AtLeast(self.precision()),
        }
    }

    /// Drop precision down to `precision` (never extends).
    pub fn truncate(&self, precision: usize) -> TruncSeries {
        assert!(precision >= 1 && precision <= self.precision());
        TruncSeries { coeffs: self.coeffs[..precision].to_vec(), field: self.field }
    }

    fn check_field(&self, other: &TruncSeries) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_field(other)?;
        let prec = self.precision().min(other.precision());
        let coeffs = (0..prec).map(|i| self.coeffs[i] + other.coeffs[i]).collect();
        Ok(TruncSeries { coeffs, field: self.field })
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_field(other)?;
        let prec = self.precision().min(other.precision());
        let coeffs = (0..prec).map(|i| self.coeffs[i] - other.coeffs[i]).collect();
        Ok(TruncSeries { coeffs, field: self.field })
    }

    pub fn scale(&self, c: Scalar) -> TruncSeries {
        let coeffs = self.coeffs.iter().map(|a| *a * c).collect();
        TruncSeries { coeffs, field: self.field }
    }

    /// Convolution truncated to the minimum operand precision.
    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_field(other)?;
        let prec = self.precision().min(other.precision());
        let mut coeffs = vec![self.field.zero(); prec];
        for (i, a) in self.coeffs.iter().take(prec).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(prec - i).enumerate() {
                coeffs[i + j] = coeffs[i + j] + *a * *b;
            }
        }
        Ok(TruncSeries { coeffs, field: self.field })
    }

    /// Multiplicative inverse; requires a unit constant term.
    pub fn invert(&self) -> Result<TruncSeries> {
        let c0 = self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let inv0 = c0.invert()?;
        let prec = self.precision();
        let mut out = vec![self.field.zero(); prec];
        out[0] = inv0;
        // out[n] = -inv0 * sum_{i=1..n} a_i * out[n-i]
        for n in 1..prec {
            let mut acc = self.field.zero();
            for i in 1..=n {
                acc = acc + self.coeffs[i] * out[n - i];
            }
            out[n] = -(inv0 * acc);
        }
        Ok(TruncSeries { coeffs: out, field: self.field })
    }

    /// Raise to a small power by repeated multiplication.
    pub fn pow(&self, e: usize) -> TruncSeries {
        let prec = self.precision();
        let mut acc = TruncSeries::constant(self.field.one(), prec);
        for _ in 0..e {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.precision())
    }
}
