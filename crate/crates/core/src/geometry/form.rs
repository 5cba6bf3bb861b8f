//! Homogeneous forms in three variables.
//!
//! A form is a map from exponent triples (i, j, k) with i + j + k = degree
//! to nonzero field elements. Zero coefficients are never stored, and the
//! exponent map is ordered, so iteration order and serialized term order are
//! deterministic.

use crate::arith::{PrimeField, Scalar, TruncSeries};
use crate::error::{Error, Result};
use crate::geometry::point::ProjPoint;
use std::collections::BTreeMap;
use std::fmt;

pub type Exponents = (u32, u32, u32);

/// All exponent triples of the given total degree, in ascending tuple order.
pub fn monomials_of_degree(degree: usize) -> Vec<Exponents> {
    let d = degree as u32;
    let mut out = Vec::new();
    for i in 0..=d {
        for j in 0..=(d - i) {
            out.push((i, j, d - i - j));
        }
    }
    out.sort();
    out
}

/// Dimension of the space of degree-d forms in three variables.
pub fn form_space_dim(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousForm {
    degree: usize,
    coeffs: BTreeMap<Exponents, Scalar>,
    field: PrimeField,
}

impl HomogeneousForm {
    /// The zero form of the given degree.
    pub fn zero(field: PrimeField, degree: usize) -> Self {
        HomogeneousForm { degree, coeffs: BTreeMap::new(), field }
    }

    /// Builds a form from (exponents, coefficient) terms, validating that
    /// every exponent triple sums to `degree`. Repeated triples accumulate.
    pub fn new(
        field: PrimeField,
        degree: usize,
        terms: impl IntoIterator<Item = (Exponents, Scalar)>,
    ) -> Result<Self> {
        let mut form = Self::zero(field, degree);
        for ((i, j, k), c) in terms {
            if (i + j + k) as usize != degree {
                return Err(Error::InvalidInput(format!(
                    "exponents ({i},{j},{k}) do not sum to degree {degree}"
                )));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch);
            }
            form.add_term((i, j, k), c);
        }
        Ok(form)
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_terms(field: PrimeField, degree: usize, terms: &[(u32, u32, u32, i64)]) -> Result<Self> {
        Self::new(
            field,
            degree,
            terms.iter().map(|&(i, j, k, c)| ((i, j, k), field.scalar(c))),
        )
    }

    fn add_term(&mut self, e: Exponents, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&e) {
            Some(existing) => {
                let sum = *existing + c;
                if sum.is_zero() {
                    self.coeffs.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, e: Exponents) -> Scalar {
        self.coeffs.get(&e).copied().unwrap_or_else(|| self.field.zero())
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponents, Scalar)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    /// Coefficient vector relative to `monomials_of_degree(self.degree)`.
    pub fn coefficient_vector(&self) -> Vec<Scalar> {
        monomials_of_degree(self.degree)
            .into_iter()
            .map(|e| self.coefficient(e))
            .collect()
    }

    /// Rebuilds a form from a coefficient vector in canonical monomial order.
    pub fn from_coefficient_vector(field: PrimeField, degree: usize, v: &[Scalar]) -> Self {
        let mons = monomials_of_degree(degree);
        assert_eq!(v.len(), mons.len());
        let mut form = Self::zero(field, degree);
        for (e, c) in mons.into_iter().zip(v.iter()) {
            form.add_term(e, *c);
        }
        form
    }

    pub fn add(&self, other: &HomogeneousForm) -> Result<HomogeneousForm> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::InvalidInput(format!(
                "cannot add forms of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Scalar) -> HomogeneousForm {
        let mut out = Self::zero(self.field, self.degree);
        for (e, a) in self.terms() {
            out.add_term(e, a * c);
        }
        out
    }

    pub fn multiply(&self, other: &HomogeneousForm) -> Result<HomogeneousForm> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut out = Self::zero(self.field, self.degree + other.degree);
        for ((i1, j1, k1), c1) in self.terms() {
            for ((i2, j2, k2), c2) in other.terms() {
                out.add_term((i1 + i2, j1 + j2, k1 + k2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Value at the canonical representative of a projective point; zero
    /// exactly when the point lies on the curve cut out by this form.
    pub fn evaluate(&self, p: &ProjPoint) -> Result<Scalar> {
        if p.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let [x, y, z] = p.coords();
        let mut acc = self.field.zero();
        for ((i, j, k), c) in self.terms() {
            acc = acc + c * x.pow(i as u64) * y.pow(j as u64) * z.pow(k as u64);
        }
        Ok(acc)
    }

    /// Partial derivative with respect to variable 0 (X), 1 (Y) or 2 (Z).
    ///
    /// In characteristic p the integer multiplier is reduced mod p, so terms
    /// whose exponent is divisible by p drop out.
    pub fn partial(&self, var: usize) -> HomogeneousForm {
        assert!(var < 3);
        let degree = self.degree.saturating_sub(1);
        let mut out = Self::zero(self.field, degree);
        for ((i, j, k), c) in self.terms() {
            let (e, rest) = match var {
                0 => (i, (i.wrapping_sub(1), j, k)),
                1 => (j, (i, j.wrapping_sub(1), k)),
                _ => (k, (i, j, k.wrapping_sub(1))),
            };
            if e == 0 {
                continue;
            }
            out.add_term(rest, c * self.field.scalar(e as i64));
        }
        out
    }

    /// Substitutes one truncated series per variable; the workhorse for
    /// computing vanishing orders along a branch.
    pub fn compose_series(&self, coords: &[TruncSeries; 3]) -> Result<TruncSeries> {
        let prec = coords.iter().map(|s| s.precision()).min().unwrap();
        for s in coords {
            if s.field() != self.field {
                return Err(Error::FieldMismatch);
            }
        }
        // Cache powers of each coordinate series up to the degree.
        let mut pows: [Vec<TruncSeries>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for (v, cache) in pows.iter_mut().enumerate() {
            let one = TruncSeries::constant(self.field.one(), prec);
            cache.push(one);
            for e in 1..=self.degree {
                let next = cache[e - 1].mul(&coords[v].truncate(prec))?;
                cache.push(next);
            }
        }
        let mut acc = TruncSeries::zero(self.field, prec);
        for ((i, j, k), c) in self.terms() {
            let term = pows[0][i as usize]
                .mul(&pows[1][j as usize])?
                .mul(&pows[2][k as usize])?
                .scale(c);
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Exact quotient by a cubic that is monic in X up to a unit, i.e. has a
    /// nonzero X^3 coefficient. Returns None when the division leaves a
    /// remainder.
    ///
    /// Division runs in (F_p[Y,Z])[X]: the divisor's X-leading coefficient is
    /// a unit constant, so the Euclidean step is exact and `self` is a
    /// multiple of `cubic` iff the remainder vanishes.
    pub fn divide_by_cubic(&self, cubic: &HomogeneousForm) -> Option<HomogeneousForm> {
        assert_eq!(cubic.degree(), 3);
        let lead = cubic.coefficient((3, 0, 0));
        assert!(!lead.is_zero(), "cubic must have a nonzero X^3 coefficient");
        if self.degree < 3 {
            return if self.is_zero() {
                Some(HomogeneousForm::zero(self.field, 0))
            } else {
                None
            };
        }
        let lead_inv = lead.invert().expect("nonzero");
        let mut rem = self.clone();
        let mut quot = HomogeneousForm::zero(self.field, self.degree - 3);
        // Eliminate monomials X^i.. with i >= 3, highest X-degree first.
        while let Some((&(i, j, k), &c)) =
            rem.coeffs.iter().rev().find(|((i, _, _), _)| *i >= 3)
        {
            let factor = c * lead_inv;
            quot.add_term((i - 3, j, k), factor);
            for ((ci, cj, ck), cc) in cubic.terms() {
                rem.add_term((i - 3 + ci, j + cj, k + ck), -(factor * cc));
            }
        }
        if rem.is_zero() {
            Some(quot)
        } else {
            None
        }
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let vars = ["X", "Y", "Z"];
        let mut first = true;
        for ((i, j, k), c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let exps = [i, j, k];
            let is_constant = i == 0 && j == 0 && k == 0;
            if c.value() != 1 || is_constant {
                write!(f, "{c}")?;
            }
            for (v, &e) in vars.iter().zip(exps.iter()) {
                match e {
                    0 => {}
                    1 => write!(f, "{v}")?,
                    _ => write!(f, "{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}
