//! Dense univariate polynomials over a prime field.
//!
//! Internal helper for the smoothness checker: rational witness scans run on
//! per-column gcds, and the resultant certificate needs fraction-free
//! determinants of polynomial matrices.

use crate::arith::{PrimeField, Scalar};

/// Coefficients in ascending degree order; the vector is empty for the zero
/// polynomial and otherwise ends in a nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct UniPoly {
    coeffs: Vec<Scalar>,
    field: PrimeField,
}

impl UniPoly {
    pub fn zero(field: PrimeField) -> Self {
        UniPoly { coeffs: Vec::new(), field }
    }

    pub fn from_coeffs(field: PrimeField, coeffs: Vec<Scalar>) -> Self {
        let mut p = UniPoly { coeffs, field };
        p.normalize();
        p
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_coeffs(c.field(), vec![c])
    }

    /// The monomial x.
    pub fn x(field: PrimeField) -> Self {
        Self::from_coeffs(field, vec![field.zero(), field.one()])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).copied().unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, x: Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + *c;
        }
        acc
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Self::from_coeffs(self.field, coeffs)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j] + *a * *b;
            }
        }
        Self::from_coeffs(self.field, coeffs)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[dd].invert().expect("leading coefficient is nonzero");
        let mut rem = self.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.coeffs[rd] * lead_inv;
            quot[rd - dd] = factor;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem.coeffs[rd - dd + i] = rem.coeffs[rd - dd + i] - factor * *c;
            }
            rem.normalize();
        }
        (Self::from_coeffs(self.field, quot), rem)
    }

    /// Exact division; panics if a remainder is left. Used by the
    /// fraction-free determinant, where divisibility is guaranteed.
    pub fn div_exact(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.divrem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if let Some(d) = a.degree() {
            let inv = a.coeffs[d].invert().expect("nonzero leading coefficient");
            a = a.mul(&UniPoly::constant(inv));
        }
        a
    }

    /// self^exp modulo `modulus` by binary exponentiation.
    pub fn powmod(&self, mut exp: u64, modulus: &UniPoly) -> UniPoly {
        let mut base = self.divrem(modulus).1;
        let mut acc = UniPoly::constant(self.field.one()).divrem(modulus).1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).divrem(modulus).1;
            }
            base = base.mul(&base).divrem(modulus).1;
            exp >>= 1;
        }
        acc
    }

    /// The product of (x - r) over the distinct rational roots r, computed as
    /// gcd(self, x^p - x).
    pub fn rational_root_part(&self) -> UniPoly {
        match self.degree() {
            None => UniPoly::zero(self.field),
            Some(0) => UniPoly::constant(self.field.one()),
            Some(_) => {
                let p = self.field.modulus();
                let frob = UniPoly::x(self.field).powmod(p, self);
                let diff = frob.sub(&UniPoly::x(self.field).divrem(self).1);
                self.gcd(&diff)
            }
        }
    }

    /// First rational root in ascending residue order, if any.
    pub fn first_root(&self) -> Option<Scalar> {
        let roots = self.rational_root_part();
        match roots.degree() {
            None | Some(0) => None,
            Some(1) => {
                // x + c0 (monic): root is -c0
                Some(-roots.coeff(0))
            }
            Some(_) => self.field.elements().find(|x| roots.eval(*x).is_zero()),
        }
    }
}

/// Fraction-free (Bareiss) determinant of a square matrix of polynomials.
pub(crate) fn poly_matrix_det(field: PrimeField, mut m: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::constant(field.one());
    }
    for row in &m {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
    }
    let mut sign = false;
    let mut prev_pivot = UniPoly::constant(field.one());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return UniPoly::zero(field);
            };
            m.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev_pivot);
            }
        }
        prev_pivot = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        UniPoly::zero(field).sub(&det)
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn poly(field: PrimeField, coeffs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(field, coeffs.iter().map(|&c| field.scalar(c)).collect())
    }

    #[test]
    fn divrem_roundtrip() {
        let f = f7();
        let a = poly(f, &[1, 0, 2, 3]);
        let b = poly(f, &[2, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(a.sub(&q.mul(&b)), r);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_common_factor() {
        let f = f7();
        let common = poly(f, &[3, 1]); // x + 3
        let a = common.mul(&poly(f, &[1, 1]));
        let b = common.mul(&poly(f, &[5, 0, 1]));
        let g = a.gcd(&b);
        assert_eq!(g, common); // already monic
    }

    #[test]
    fn rational_roots() {
        let f = f7();
        // (x - 2)(x - 5) = x^2 - 7x + 10 = x^2 + 3 over F_7
        let a = poly(f, &[3, 0, 1]);
        assert_eq!(a.first_root(), Some(f.scalar(2)));
        // x^2 + 1 has no roots mod 7
        let b = poly(f, &[1, 0, 1]);
        assert_eq!(b.first_root(), None);
    }

    #[test]
    fn bareiss_determinant() {
        let f = f7();
        // det [[x, 1], [2, x]] = x^2 - 2
        let m = vec![
            vec![UniPoly::x(f), poly(f, &[1])],
            vec![poly(f, &[2]), UniPoly::x(f)],
        ];
        assert_eq!(poly_matrix_det(f, m), poly(f, &[-2, 0, 1]));
        // Singular matrix
        let s = vec![
            vec![UniPoly::x(f), UniPoly::x(f)],
            vec![UniPoly::x(f), UniPoly::x(f)],
        ];
        assert!(poly_matrix_det(f, s).is_zero());
    }
}
