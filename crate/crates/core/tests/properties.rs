//! Cross-module invariants: field axioms, valuation additivity, rank/kernel
//! laws, Bezout audits, chart independence, and group-law structure.

use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use splitnum::arith::{DenseMatrix, PrimeField, Scalar, TruncSeries, Valuation};
use splitnum::elliptic::{divisor_class_point, DivisorOnE, EPoint, WeierstrassCurve};
use splitnum::geometry::{
    intersection_multiplicity, local_parametrization, local_parametrization_in_chart,
    monomials_of_degree, HomogeneousForm,
};

const TEST_PRIMES: [u64; 4] = [5, 7, 11, 13];

fn arb_field() -> impl Strategy<Value = PrimeField> {
    prop::sample::select(TEST_PRIMES.to_vec()).prop_map(|p| PrimeField::new(p).unwrap())
}

fn random_scalar(field: PrimeField, rng: &mut ChaCha8Rng) -> Scalar {
    field.scalar_from_u64(rng.gen_range(0..field.modulus()))
}

#[test]
fn field_axioms_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF1E1D);
    for _ in 0..1000 {
        let p = TEST_PRIMES[rng.gen_range(0..TEST_PRIMES.len())];
        let f = PrimeField::new(p).unwrap();
        let (a, b, c) =
            (random_scalar(f, &mut rng), random_scalar(f, &mut rng), random_scalar(f, &mut rng));
        assert_eq!((a + b) + c, a + (b + c));
        assert_eq!((a * b) * c, a * (b * c));
        assert_eq!(a * (b + c), a * b + a * c);
        assert_eq!(a + f.zero(), a);
        assert_eq!(a * f.one(), a);
        assert_eq!(a + (-a), f.zero());
        if !a.is_zero() {
            assert_eq!(a * a.invert().unwrap(), f.one());
        }
    }
}

proptest! {
    #[test]
    fn series_valuation_is_additive(
        field in arb_field(),
        va in 0usize..4,
        vb in 0usize..4,
        tail_a in prop::collection::vec(0u64..65536, 4),
        tail_b in prop::collection::vec(0u64..65536, 4),
    ) {
        let prec = 10;
        let make = |v: usize, tail: &[u64]| {
            let mut coeffs = vec![field.zero(); v];
            coeffs.push(field.one()); // pin the valuation exactly
            coeffs.extend(tail.iter().map(|&c| field.scalar_from_u64(c)));
            TruncSeries::from_coeffs(field, coeffs, prec)
        };
        let a = make(va, &tail_a);
        let b = make(vb, &tail_b);
        prop_assert_eq!(a.valuation(), Valuation::Finite(va));
        let prod = a.mul(&b).unwrap();
        prop_assert_eq!(prod.valuation(), Valuation::Finite(va + vb));
    }

    #[test]
    fn kernel_vectors_annihilate_and_rank_nullity_holds(
        field in arb_field(),
        rows in 1usize..6,
        cols in 1usize..6,
        entries in prop::collection::vec(0u64..65536, 36),
    ) {
        let data: Vec<Vec<Scalar>> = (0..rows)
            .map(|i| (0..cols).map(|j| field.scalar_from_u64(entries[i * 6 + j])).collect())
            .collect();
        let m = DenseMatrix::from_rows(field, data);
        let basis = m.kernel_basis();
        for v in &basis {
            prop_assert!(m.apply(v).iter().all(|e| e.is_zero()));
        }
        // Row reduction of the transpose is the independent rank route.
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.rank() + basis.len(), cols);
        // Deterministic output for fixed input.
        prop_assert_eq!(m.kernel_basis(), basis);
    }
}

fn random_form(
    field: PrimeField,
    degree: usize,
    rng: &mut ChaCha8Rng,
) -> HomogeneousForm {
    loop {
        let terms: Vec<((u32, u32, u32), Scalar)> = monomials_of_degree(degree)
            .into_iter()
            .map(|e| (e, random_scalar(field, rng)))
            .collect();
        let form = HomogeneousForm::new(field, degree, terms).unwrap();
        if !form.is_zero() {
            return form;
        }
    }
}

fn test_curves() -> Vec<WeierstrassCurve> {
    vec![
        WeierstrassCurve::from_values(5, 0, 1).unwrap(),
        WeierstrassCurve::from_values(5, 4, 0).unwrap(),
        WeierstrassCurve::from_values(7, 0, 1).unwrap(),
        WeierstrassCurve::from_values(11, 3, 5).unwrap(),
        WeierstrassCurve::from_values(13, 1, 0).unwrap(),
    ]
}

#[test]
fn bezout_audit_on_random_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBE20);
    let curves = test_curves();
    let mut successes = 0;
    for i in 0..400 {
        let curve = &curves[i % curves.len()];
        let degree = 1 + (i / curves.len()) % 4;
        let form = random_form(curve.field(), degree, &mut rng);
        match curve.intersection_divisor(&form) {
            Ok(div) => {
                assert_eq!(div.total(), 3 * degree, "Bezout audit");
                successes += 1;
            }
            Err(splitnum::Error::NonRationalIntersection { expected, found }) => {
                assert_eq!(expected, 3 * degree);
                assert!(found < expected);
            }
            Err(e) => panic!("unexpected intersection error: {e}"),
        }
    }
    assert!(successes >= 30, "only {successes} rational intersections in 400 draws");
}

#[test]
fn multiplicity_is_multiplicative_and_chart_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let curves = test_curves();
    let mut checked = 0;
    'outer: for i in 0.. {
        if checked >= 200 {
            break;
        }
        let curve = &curves[i % curves.len()];
        let field = curve.field();
        let cubic = curve.defining_form();
        let points = curve.rational_points();
        let p = points[rng.gen_range(0..points.len())];
        let proj = p.to_proj(field);
        let (df, dg) = (1 + i % 3, 1 + (i / 3) % 2);
        // Forms forced through the point so multiplicities are positive.
        let mut f = random_form(field, df, &mut rng);
        let mut g = random_form(field, dg, &mut rng);
        for form in [&mut f, &mut g] {
            let v = form.evaluate(&proj).unwrap();
            if !v.is_zero() {
                // Subtract v * (chart coordinate)^degree to force vanishing.
                let chart = proj.chart();
                let mut exps = [0u32; 3];
                exps[chart] = form.degree() as u32;
                let correction = HomogeneousForm::new(
                    field,
                    form.degree(),
                    [((exps[0], exps[1], exps[2]), -v)],
                )
                .unwrap();
                *form = form.add(&correction).unwrap();
            }
            if form.is_zero() {
                continue 'outer;
            }
        }
        let precision = 3 * (df + dg) + 1;
        let branch = local_parametrization(&cubic, &proj, precision).unwrap();
        let prod = f.multiply(&g).unwrap();
        let (mf, mg, mfg) = (
            intersection_multiplicity(&f, &branch),
            intersection_multiplicity(&g, &branch),
            intersection_multiplicity(&prod, &branch),
        );
        let (Ok(mf), Ok(mg), Ok(mfg)) = (mf, mg, mfg) else {
            continue; // a factor vanishes on the curve beyond the window
        };
        assert_eq!(mfg, mf + mg, "multiplicativity at {proj}");

        // Same multiplicity in every admissible chart.
        for chart in 0..3 {
            if proj.coords()[chart].is_zero() || chart == proj.chart() {
                continue;
            }
            let other = local_parametrization_in_chart(&cubic, &proj, chart, precision).unwrap();
            assert_eq!(
                intersection_multiplicity(&prod, &other).unwrap(),
                mfg,
                "chart {chart} at {proj}"
            );
        }
        checked += 1;
    }
    assert_eq!(checked, 200);
}

#[test]
fn parametrization_residual_vanishes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5E51E5);
    for curve in test_curves() {
        let cubic = curve.defining_form();
        let points = curve.rational_points();
        for _ in 0..20 {
            let p = points[rng.gen_range(0..points.len())].to_proj(curve.field());
            let branch = local_parametrization(&cubic, &p, 16).unwrap();
            assert!(cubic.compose_series(branch.coord_series()).unwrap().is_zero());
            let at_zero = [
                branch.coord_series()[0].coeff(0),
                branch.coord_series()[1].coeff(0),
                branch.coord_series()[2].coeff(0),
            ];
            // The series at t = 0 is a representative of the center.
            let back = splitnum::geometry::ProjPoint::new(at_zero).unwrap();
            assert_eq!(back, p);
        }
    }
}

#[test]
fn group_law_and_collinearity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6701);
    for curve in test_curves() {
        let points = curve.rational_points();
        let field = curve.field();
        for _ in 0..200 {
            let pick = |rng: &mut ChaCha8Rng| points[rng.gen_range(0..points.len())];
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let ab_c = curve
                .add_points(&curve.add_points(&a, &b).unwrap(), &c)
                .unwrap();
            let a_bc = curve
                .add_points(&a, &curve.add_points(&b, &c).unwrap())
                .unwrap();
            assert_eq!(ab_c, a_bc, "associativity on {curve}");
            assert_eq!(
                curve.add_points(&a, &b).unwrap(),
                curve.add_points(&b, &a).unwrap()
            );
            assert_eq!(
                curve.add_points(&a, &curve.negate(&a)).unwrap(),
                EPoint::Infinity
            );
        }
        // Random line sections: the three intersection points (with
        // multiplicity) always sum to the identity in the flex model.
        let mut sections = 0;
        for _ in 0..60 {
            let line = random_form(field, 1, &mut rng);
            let Ok(div) = curve.intersection_divisor(&line) else { continue };
            let mut sum = EPoint::Infinity;
            for (pt, &mult) in div.entries() {
                let ep = EPoint::from_proj(pt).unwrap();
                sum = curve
                    .add_points(&sum, &curve.scalar_multiply(mult as i64, &ep).unwrap())
                    .unwrap();
            }
            assert_eq!(sum, EPoint::Infinity, "line section on {curve}");
            sections += 1;
        }
        assert!(sections >= 5, "too few rational line sections on {curve}");
    }
}

#[test]
fn point_orders_divide_group_order() {
    for curve in test_curves() {
        let order = curve.group_order();
        for p in curve.rational_points() {
            assert_eq!(order % curve.point_order(&p).unwrap(), 0);
        }
    }
}

#[test]
fn class_point_is_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xADD);
    for curve in test_curves() {
        let points = curve.rational_points();
        for _ in 0..50 {
            let mut d1 = DivisorOnE::new();
            let mut d2 = DivisorOnE::new();
            for _ in 0..3 {
                let p = points[rng.gen_range(0..points.len())];
                let q = points[rng.gen_range(0..points.len())];
                d1.add_entry(p, 1);
                d1.add_entry(EPoint::Infinity, -1);
                d2.add_entry(q, rng.gen_range(-2..=2i64));
            }
            let deg = d2.degree();
            d2.add_entry(EPoint::Infinity, -deg);
            let s1 = divisor_class_point(&d1, &curve).unwrap();
            let s2 = divisor_class_point(&d2, &curve).unwrap();
            let s12 = divisor_class_point(&d1.add(&d2), &curve).unwrap();
            assert_eq!(s12, curve.add_points(&s1, &s2).unwrap());
        }
    }
}

#[test]
fn smoothness_agrees_with_discriminant_on_cubics() {
    // Weierstrass cubics with nonzero discriminant pass the general check;
    // the degenerate ones are rejected at construction.
    for curve in test_curves() {
        let verdict = splitnum::geometry::curve_is_smooth(&curve.defining_form()).unwrap();
        assert!(verdict.is_smooth(), "{curve}");
    }
}
