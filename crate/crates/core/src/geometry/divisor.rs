//! Intersection divisors of a form with a smooth curve.
//!
//! Multiplicities are branch valuations at the rational points of the curve.
//! The total is audited against the Bezout bound deg(F) * deg(C): anything
//! less means some intersection points live in an extension field, and the
//! computation refuses to return a partial answer.

use crate::error::{Error, Result};
use crate::geometry::branch::{intersection_multiplicity, local_parametrization};
use crate::geometry::form::HomogeneousForm;
use crate::geometry::point::ProjPoint;
use std::collections::BTreeMap;
use std::fmt;

/// An effective divisor supported on rational points, with its audited total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionDivisor {
    entries: BTreeMap<ProjPoint, usize>,
    total: usize,
}

impl IntersectionDivisor {
    pub fn entries(&self) -> &BTreeMap<ProjPoint, usize> {
        &self.entries
    }

    pub fn multiplicity(&self, p: &ProjPoint) -> usize {
        self.entries.get(p).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn from_entries(entries: BTreeMap<ProjPoint, usize>) -> Self {
        let entries: BTreeMap<_, _> = entries.into_iter().filter(|(_, m)| *m > 0).collect();
        let total = entries.values().sum();
        IntersectionDivisor { entries, total }
    }

    pub fn scale(&self, k: usize) -> Self {
        IntersectionDivisor {
            entries: self.entries.iter().map(|(p, m)| (*p, m * k)).collect(),
            total: self.total * k,
        }
    }
}

impl fmt::Display for IntersectionDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, m) in &self.entries {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *m > 1 {
                write!(f, "{m}*{p}")?;
            } else {
                write!(f, "{p}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Computes the divisor cut out by `form` on the smooth curve `curve`, whose
/// complete list of rational points is supplied by the caller.
///
/// Branch precision is 1 + deg(form) * deg(curve): the Bezout bound caps
/// every finite multiplicity, so an exhausted valuation certifies a common
/// component. A total below the bound reports NonRationalIntersection.
pub fn intersection_divisor(
    form: &HomogeneousForm,
    curve: &HomogeneousForm,
    curve_points: &[ProjPoint],
) -> Result<IntersectionDivisor> {
    if form.is_zero() {
        return Err(Error::InvalidInput("intersection with the zero form".into()));
    }
    let expected = form.degree() * curve.degree();
    let precision = expected + 1;
    let mut entries = BTreeMap::new();
    let mut total = 0usize;
    for p in curve_points {
        if !form.evaluate(p)?.is_zero() {
            continue;
        }
        let branch = local_parametrization(curve, p, precision)?;
        let mult = match intersection_multiplicity(form, &branch) {
            Ok(m) => m,
            Err(Error::PrecisionExhausted { .. }) => return Err(Error::CommonComponent),
            Err(e) => return Err(e),
        };
        debug_assert!(mult >= 1);
        entries.insert(*p, mult);
        total += mult;
    }
    if total != expected {
        debug_assert!(total < expected, "intersection total exceeds the Bezout bound");
        return Err(Error::NonRationalIntersection { expected, found: total });
    }
    Ok(IntersectionDivisor { entries, total })
}
