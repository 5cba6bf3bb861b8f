//! Local parametrization of a curve at a smooth point, and vanishing orders
//! of forms along the resulting branch.
//!
//! At a smooth point exactly one branch passes through the curve. We
//! dehomogenize in the canonical chart of the point, attach the local
//! parameter t to one affine coordinate and solve for the other with Newton
//! iteration, doubling the accurate order each step.

use crate::arith::series::Valuation;
use crate::arith::TruncSeries;
use crate::error::{Error, Result};
use crate::geometry::form::HomogeneousForm;
use crate::geometry::point::ProjPoint;

/// A power-series branch of a curve through a smooth point.
///
/// `coords` holds one series per projective coordinate: the chart coordinate
/// is the constant 1, the parameter coordinate is c + t, and the dependent
/// coordinate is the solved series. Substituting them into the curve form
/// gives the zero series to full precision.
#[derive(Debug, Clone)]
pub struct BranchParametrization {
    center: ProjPoint,
    chart: usize,
    param: usize,
    dependent: usize,
    coords: [TruncSeries; 3],
    precision: usize,
}

impl BranchParametrization {
    pub fn center(&self) -> &ProjPoint {
        &self.center
    }

    /// Index of the dehomogenized coordinate (the series fixed at 1).
    pub fn chart(&self) -> usize {
        self.chart
    }

    /// Index of the coordinate carrying the local parameter t.
    pub fn param(&self) -> usize {
        self.param
    }

    pub fn dependent(&self) -> usize {
        self.dependent
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn coord_series(&self) -> &[TruncSeries; 3] {
        &self.coords
    }
}

/// Computes the branch of `curve` through `p` to the requested precision,
/// in the canonical chart of the point.
pub fn local_parametrization(
    curve: &HomogeneousForm,
    p: &ProjPoint,
    precision: usize,
) -> Result<BranchParametrization> {
    local_parametrization_in_chart(curve, p, p.chart(), precision)
}

/// Branch computation in an explicit chart; the point's coordinate there
/// must be nonzero. Among the two remaining coordinates, in index order, the
/// parameter is attached to the first one whose partner has a nonzero
/// partial derivative at `p`; the partner is then solved as a series by
/// Newton iteration.
pub fn local_parametrization_in_chart(
    curve: &HomogeneousForm,
    p: &ProjPoint,
    chart: usize,
    precision: usize,
) -> Result<BranchParametrization> {
    assert!(precision >= 1, "precision must be positive");
    assert!(chart < 3);
    if curve.evaluate(p)? != curve.field().zero() {
        return Err(Error::NotOnCurve);
    }
    let canonical = p.coords();
    if canonical[chart].is_zero() {
        return Err(Error::InvalidInput(format!(
            "point {p} does not lie in chart {chart}"
        )));
    }
    // Representative with the chart coordinate scaled to 1.
    let scale = canonical[chart].invert()?;
    let coords_at_p = [canonical[0] * scale, canonical[1] * scale, canonical[2] * scale];
    let others = match chart {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    };
    let partial_at = |var: usize| -> Result<_> { curve.partial(var).evaluate(p) };
    let d_first = partial_at(others[0])?;
    let d_second = partial_at(others[1])?;
    // At an on-curve point of the chart, Euler's relation forces the chart
    // partial to vanish whenever both others do, so this detects singularity.
    if d_first.is_zero() && d_second.is_zero() {
        return Err(Error::SingularPoint { point: p.coord_values() });
    }
    let (param, dependent) = if !d_second.is_zero() {
        (others[0], others[1])
    } else {
        (others[1], others[0])
    };

    let field = curve.field();
    let mut coords: [TruncSeries; 3] = [
        TruncSeries::zero(field, precision),
        TruncSeries::zero(field, precision),
        TruncSeries::zero(field, precision),
    ];
    coords[chart] = TruncSeries::constant(field.one(), precision);
    coords[param] = TruncSeries::linear(coords_at_p[param], precision);
    coords[dependent] = TruncSeries::constant(coords_at_p[dependent], precision);

    // Newton: w <- w - F(..)/F_w(..). The residual starts at valuation >= 1
    // and doubles each step, so log2(precision) + 1 rounds suffice.
    let dcurve = curve.partial(dependent);
    let mut rounds = 0usize;
    loop {
        let residual = curve.compose_series(&coords)?;
        match residual.valuation() {
            Valuation::AtLeast(_) => break,
            Valuation::Finite(v) => {
                assert!(v >= 1, "Newton residual must vanish at t = 0");
                let deriv = dcurve.compose_series(&coords)?;
                let update = residual.mul(&deriv.invert()?)?;
                coords[dependent] = coords[dependent].sub(&update)?;
            }
        }
        rounds += 1;
        assert!(rounds <= 64, "Newton iteration failed to converge");
    }
    debug_assert!(curve.compose_series(&coords)?.is_zero());

    Ok(BranchParametrization {
        center: *p,
        chart,
        param,
        dependent,
        coords,
        precision,
    })
}

/// Vanishing order of `form` along the branch: the valuation of the composed
/// series. Exhausted precision means the form vanishes along the whole
/// visible branch, i.e. shares a component with the branch's curve.
pub fn intersection_multiplicity(
    form: &HomogeneousForm,
    branch: &BranchParametrization,
) -> Result<usize> {
    let composed = form.compose_series(branch.coord_series())?;
    match composed.valuation() {
        Valuation::Finite(v) => Ok(v),
        Valuation::AtLeast(precision) => Err(Error::PrecisionExhausted { precision }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PrimeField;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    /// Y^2 Z = X^3 + Z^3 over F_7.
    fn curve_e() -> HomogeneousForm {
        HomogeneousForm::from_terms(f7(), 3, &[(0, 2, 1, 1), (3, 0, 0, -1), (0, 0, 3, -1)])
            .unwrap()
    }

    #[test]
    fn branch_at_affine_point() {
        let e = curve_e();
        let p = ProjPoint::from_values(f7(), [2, 3, 1]).unwrap();
        let branch = local_parametrization(&e, &p, 5).unwrap();
        assert_eq!(branch.chart(), 2);
        assert_eq!(branch.param(), 0);
        assert_eq!(branch.dependent(), 1);
        // x(t) = 2 + t
        let xs = branch.coord_series()[0].coeffs();
        assert_eq!(xs[0].value(), 2);
        assert_eq!(xs[1].value(), 1);
        // y(t) = 3 + 2t + ...: implicit differentiation gives y' = 3x^2/(2y) = 2
        let ys = branch.coord_series()[1].coeffs();
        assert_eq!(ys[0].value(), 3);
        assert_eq!(ys[1].value(), 2);
        // Residual vanishes to full precision.
        assert!(e.compose_series(branch.coord_series()).unwrap().is_zero());
    }

    #[test]
    fn line_branch_is_exact() {
        let f = f7();
        let z = HomogeneousForm::from_terms(f, 1, &[(0, 0, 1, 1)]).unwrap();
        let inf = ProjPoint::from_values(f, [0, 1, 0]).unwrap();
        let branch = local_parametrization(&z, &inf, 9).unwrap();
        assert_eq!(branch.chart(), 1);
        // z(t) stays identically zero on the line Z = 0.
        assert!(branch.coord_series()[2].is_zero());
    }

    #[test]
    fn singular_point_rejected() {
        let f = f7();
        // Cuspidal cubic Y^2 Z - X^3 is singular at [0:0:1].
        let cusp = HomogeneousForm::from_terms(f, 3, &[(0, 2, 1, 1), (3, 0, 0, -1)]).unwrap();
        let origin = ProjPoint::from_values(f, [0, 0, 1]).unwrap();
        assert!(matches!(
            local_parametrization(&cusp, &origin, 4),
            Err(Error::SingularPoint { point: [0, 0, 1] })
        ));
    }

    #[test]
    fn off_curve_rejected() {
        let e = curve_e();
        let q = ProjPoint::from_values(f7(), [2, 5, 1]).unwrap();
        assert!(matches!(local_parametrization(&e, &q, 4), Err(Error::NotOnCurve)));
    }

    #[test]
    fn flex_line_multiplicity_three() {
        let f = f7();
        let e = curve_e();
        let inf = ProjPoint::from_values(f, [0, 1, 0]).unwrap();
        let branch = local_parametrization(&e, &inf, 4).unwrap();
        let z = HomogeneousForm::from_terms(f, 1, &[(0, 0, 1, 1)]).unwrap();
        assert_eq!(intersection_multiplicity(&z, &branch).unwrap(), 3);
    }

    #[test]
    fn common_component_exhausts_precision() {
        let e = curve_e();
        let p = ProjPoint::from_values(f7(), [2, 3, 1]).unwrap();
        let branch = local_parametrization(&e, &p, 10).unwrap();
        assert_eq!(
            intersection_multiplicity(&e, &branch),
            Err(Error::PrecisionExhausted { precision: 10 })
        );
    }
}
