//! Short Weierstrass cubics over F_p and their group law.
//!
//! The model is Y^2 Z = X^3 + a4 X Z^2 + a6 Z^3 with the flex at
//! O = [0:1:0] as identity, so three collinear points sum to O and the
//! divisor class of a line section is 3 O. Group orders come from full
//! enumeration: p is capped at 2^16 by the arithmetic layer, and
//! certificates must not depend on conditional point counting.

use crate::arith::{PrimeField, Scalar};
use crate::error::{Error, Result};
use crate::geometry::divisor::{intersection_divisor, IntersectionDivisor};
use crate::geometry::form::HomogeneousForm;
use crate::geometry::point::ProjPoint;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;

/// A smooth curve Y^2 Z = X^3 + a4 X Z^2 + a6 Z^3 over F_p, p > 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeierstrassCurve {
    field: PrimeField,
    a4: Scalar,
    a6: Scalar,
}

/// A rational point of the curve: the flex at infinity or an affine point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EPoint {
    Infinity,
    Affine(Scalar, Scalar),
}

impl WeierstrassCurve {
    /// Validates the discriminant -16(4 a4^3 + 27 a6^2) != 0.
    pub fn new(field: PrimeField, a4: Scalar, a6: Scalar) -> Result<Self> {
        if a4.field() != field || a6.field() != field {
            return Err(Error::FieldMismatch);
        }
        let four = field.scalar(4);
        let twenty_seven = field.scalar(27);
        let disc = four * a4 * a4 * a4 + twenty_seven * a6 * a6;
        if disc.is_zero() {
            return Err(Error::InvalidInput(format!(
                "curve y^2 = x^3 + {}x + {} over F_{} is singular",
                a4,
                a6,
                field.modulus()
            )));
        }
        Ok(WeierstrassCurve { field, a4, a6 })
    }

    pub fn from_values(p: u64, a4: i64, a6: i64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        Self::new(field, field.scalar(a4), field.scalar(a6))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn a4(&self) -> Scalar {
        self.a4
    }

    pub fn a6(&self) -> Scalar {
        self.a6
    }

    /// The defining cubic Y^2 Z - X^3 - a4 X Z^2 - a6 Z^3.
    pub fn defining_form(&self) -> HomogeneousForm {
        HomogeneousForm::new(
            self.field,
            3,
            [
                ((0, 2, 1), self.field.one()),
                ((3, 0, 0), -self.field.one()),
                ((1, 0, 2), -self.a4),
                ((0, 0, 3), -self.a6),
            ],
        )
        .expect("well-formed cubic")
    }

    pub fn contains(&self, p: &EPoint) -> bool {
        match p {
            EPoint::Infinity => true,
            EPoint::Affine(x, y) => {
                *y * *y == *x * *x * *x + self.a4 * *x + self.a6
            }
        }
    }

    fn check_on_curve(&self, p: &EPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve)
        }
    }

    /// Right-hand side x^3 + a4 x + a6.
    fn rhs(&self, x: Scalar) -> Scalar {
        x * x * x + self.a4 * x + self.a6
    }

    /// All rational points: O first, then affine points by ascending (x, y).
    pub fn rational_points(&self) -> Vec<EPoint> {
        let p = self.field.modulus();
        // Square-root table: roots[r] lists the y with y^2 = r, ascending.
        let mut roots: Vec<Vec<u64>> = vec![Vec::new(); p as usize];
        for y in 0..p {
            let sq = (y as u128 * y as u128 % p as u128) as usize;
            roots[sq].push(y);
        }
        let mut points = vec![EPoint::Infinity];
        for x in 0..p {
            let xs = self.field.scalar_from_u64(x);
            let rhs = self.rhs(xs);
            for &y in &roots[rhs.value() as usize] {
                points.push(EPoint::Affine(xs, self.field.scalar_from_u64(y)));
            }
        }
        points
    }

    pub fn rational_points_proj(&self) -> Vec<ProjPoint> {
        self.rational_points().iter().map(|p| p.to_proj(self.field)).collect()
    }

    /// Exact group order |E(F_p)| by enumeration; asserted to satisfy the
    /// Hasse bound |N - (p+1)| <= 2 sqrt(p).
    pub fn group_order(&self) -> u64 {
        let n = self.rational_points().len() as u64;
        let p = self.field.modulus();
        let diff = n as i128 - (p as i128 + 1);
        assert!(diff * diff <= 4 * p as i128, "point count violates the Hasse bound");
        n
    }

    fn add_unchecked(&self, p: &EPoint, q: &EPoint) -> EPoint {
        match (p, q) {
            (EPoint::Infinity, _) => *q,
            (_, EPoint::Infinity) => *p,
            (EPoint::Affine(x1, y1), EPoint::Affine(x2, y2)) => {
                if x1 == x2 && (*y1 + *y2).is_zero() {
                    return EPoint::Infinity;
                }
                let lambda = if x1 == x2 {
                    // Tangent slope (3x^2 + a4) / (2y); y != 0 here.
                    let three = self.field.scalar(3);
                    let two = self.field.scalar(2);
                    (three * *x1 * *x1 + self.a4) * (two * *y1).invert().expect("y nonzero")
                } else {
                    (*y2 - *y1) * (*x2 - *x1).invert().expect("x1 != x2")
                };
                let x3 = lambda * lambda - *x1 - *x2;
                let y3 = lambda * (*x1 - x3) - *y1;
                EPoint::Affine(x3, y3)
            }
        }
    }

    /// Chord-tangent sum with identity O.
    pub fn add_points(&self, p: &EPoint, q: &EPoint) -> Result<EPoint> {
        self.check_on_curve(p)?;
        self.check_on_curve(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub fn negate(&self, p: &EPoint) -> EPoint {
        match p {
            EPoint::Infinity => EPoint::Infinity,
            EPoint::Affine(x, y) => EPoint::Affine(*x, -*y),
        }
    }

    /// k * P by double-and-add; negative k negates the point first.
    pub fn scalar_multiply(&self, k: i64, p: &EPoint) -> Result<EPoint> {
        self.check_on_curve(p)?;
        let (mut base, mut k) = if k < 0 {
            (self.negate(p), k.unsigned_abs())
        } else {
            (*p, k as u64)
        };
        let mut acc = EPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Least k >= 1 with k * P = O, by stripping prime factors from the
    /// group order.
    pub fn point_order(&self, p: &EPoint) -> Result<u64> {
        self.check_on_curve(p)?;
        let n = self.group_order();
        self.point_order_given(p, n)
    }

    fn point_order_given(&self, p: &EPoint, group_order: u64) -> Result<u64> {
        let mut k = group_order;
        debug_assert_eq!(self.scalar_multiply(k as i64, p)?, EPoint::Infinity);
        for q in prime_factors(group_order) {
            while k % q == 0
                && self.scalar_multiply((k / q) as i64, p)? == EPoint::Infinity
            {
                k /= q;
            }
        }
        Ok(k)
    }

    /// Exponent of the rational point group: the largest point order.
    pub fn group_exponent(&self) -> u64 {
        let n = self.group_order();
        self.rational_points()
            .iter()
            .map(|p| self.point_order_given(p, n).expect("enumerated point"))
            .max()
            .expect("group is nonempty")
    }

    /// A rational point of exact order `mu`: random points scaled by
    /// group_order/mu, a bounded number of seeded draws, then an exhaustive
    /// deterministic fallback.
    pub fn find_point_of_order(&self, mu: u64, seed: u64) -> Result<EPoint> {
        if mu == 0 {
            return Err(Error::InvalidInput("order must be positive".into()));
        }
        if mu == 1 {
            return Ok(EPoint::Infinity);
        }
        let n = self.group_order();
        if n % mu != 0 {
            return Err(Error::NoSuchOrder { order: mu });
        }
        let cofactor = (n / mu) as i64;
        let mu_primes = prime_factors(mu);
        let has_exact_order = |q: &EPoint| -> Result<bool> {
            if *q == EPoint::Infinity {
                return Ok(false);
            }
            for &pr in &mu_primes {
                if self.scalar_multiply((mu / pr) as i64, q)? == EPoint::Infinity {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let points = self.rational_points();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..64 {
            let p = points[rng.gen_range(0..points.len())];
            let q = self.scalar_multiply(cofactor, &p)?;
            if has_exact_order(&q)? {
                return Ok(q);
            }
        }
        for p in &points {
            if self.point_order_given(p, n)? == mu {
                return Ok(*p);
            }
        }
        Err(Error::NoSuchOrder { order: mu })
    }

    /// Intersection divisor of a form with this cubic, audited to total
    /// 3 * deg(form).
    pub fn intersection_divisor(&self, form: &HomogeneousForm) -> Result<IntersectionDivisor> {
        intersection_divisor(form, &self.defining_form(), &self.rational_points_proj())
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "y^2 = x^3 + {}x + {} over F_{}",
            self.a4,
            self.a6,
            self.field.modulus()
        )
    }
}

impl EPoint {
    pub fn to_proj(&self, field: PrimeField) -> ProjPoint {
        match self {
            EPoint::Infinity => {
                ProjPoint::new([field.zero(), field.one(), field.zero()]).unwrap()
            }
            EPoint::Affine(x, y) => ProjPoint::new([*x, *y, field.one()]).unwrap(),
        }
    }

    /// Interprets a projective point as a curve point; the only point of a
    /// Weierstrass cubic on the line z = 0 is the flex [0:1:0].
    pub fn from_proj(p: &ProjPoint) -> Result<EPoint> {
        let [x, y, z] = p.coords();
        if z.is_zero() {
            if x.is_zero() && !y.is_zero() {
                Ok(EPoint::Infinity)
            } else {
                Err(Error::NotOnCurve)
            }
        } else {
            Ok(EPoint::Affine(x, y))
        }
    }
}

impl fmt::Display for EPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EPoint::Infinity => write!(f, "inf"),
            EPoint::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A divisor on the curve: a finite integer combination of rational points.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DivisorOnE {
    entries: BTreeMap<EPoint, i64>,
}

impl DivisorOnE {
    pub fn new() -> Self {
        DivisorOnE { entries: BTreeMap::new() }
    }

    pub fn from_points(points: &[EPoint]) -> Self {
        let mut d = Self::new();
        for p in points {
            d.add_entry(*p, 1);
        }
        d
    }

    /// Converts a plane intersection divisor supported on the cubic.
    pub fn from_intersection(div: &IntersectionDivisor) -> Result<Self> {
        let mut d = Self::new();
        for (p, m) in div.entries() {
            d.add_entry(EPoint::from_proj(p)?, *m as i64);
        }
        Ok(d)
    }

    pub fn add_entry(&mut self, p: EPoint, coefficient: i64) {
        let c = self.entries.entry(p).or_insert(0);
        *c += coefficient;
        if *c == 0 {
            self.entries.remove(&p);
        }
    }

    pub fn coefficient(&self, p: &EPoint) -> i64 {
        self.entries.get(p).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<EPoint, i64> {
        &self.entries
    }

    pub fn degree(&self) -> i64 {
        self.entries.values().sum()
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut d = Self::new();
        if k != 0 {
            for (p, c) in &self.entries {
                d.entries.insert(*p, c * k);
            }
        }
        d
    }

    pub fn add(&self, other: &DivisorOnE) -> Self {
        let mut d = self.clone();
        for (p, c) in &other.entries {
            d.add_entry(*p, *c);
        }
        d
    }

    pub fn sub(&self, other: &DivisorOnE) -> Self {
        self.add(&other.scale(-1))
    }
}

/// Reduces a degree-0 divisor class to its unique point representative: with
/// the flex base point, the class of D corresponds to the group-law sum of
/// its points with multiplicity. D is principal iff the result is O.
pub fn divisor_class_point(d: &DivisorOnE, curve: &WeierstrassCurve) -> Result<EPoint> {
    let degree = d.degree();
    if degree != 0 {
        return Err(Error::NonzeroDegree { degree });
    }
    let mut acc = EPoint::Infinity;
    for (p, c) in d.entries() {
        let term = curve.scalar_multiply(*c, p)?;
        acc = curve.add_points(&acc, &term)?;
    }
    Ok(acc)
}

/// Order of the class of a degree-0 divisor in Pic^0.
pub fn class_order(d: &DivisorOnE, curve: &WeierstrassCurve) -> Result<u64> {
    let s = divisor_class_point(d, curve)?;
    curve.point_order(&s)
}
