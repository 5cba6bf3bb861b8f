//! Construction of branch curves of type (b, m) with a prescribed divisor
//! class order mu, and assembly of k-plet demonstrations.
//!
//! The recipe: pick a point T of exact order mu, sample 3n - 1 random affine
//! points and close the tuple with T minus their sum, so the class of the
//! divisor minus 3n O is exactly the class of T. A degree-b curve vanishing
//! to order m at each point then exists precisely because mu divides m; a
//! seeded search picks kernel elements until one passes the smoothness
//! screen, and the result is re-verified to meet the cubic in exactly those
//! 3n points with multiplicity m.

use crate::certificate::{build_certificate, SplittingCertificate};
use crate::elliptic::{DivisorOnE, EPoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::geometry::form::HomogeneousForm;
use crate::geometry::smooth::{curve_is_smooth, Smoothness};
use crate::splitting::{
    derive_seed, verify_witness, CoverSpec, KernelSpace, ReducedBranchDivisor,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

/// Positive divisors of m in ascending order.
pub fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m % d == 0).collect()
}

/// A request to build one member with class order exactly mu.
#[derive(Debug, Clone)]
pub struct ConstructionRequest {
    pub b: usize,
    pub m: u64,
    pub mu: u64,
    pub curve: WeierstrassCurve,
    pub seed: u64,
    pub retry_budget: usize,
}

impl ConstructionRequest {
    pub fn new(
        b: usize,
        m: u64,
        mu: u64,
        curve: WeierstrassCurve,
        seed: u64,
        retry_budget: usize,
    ) -> Result<Self> {
        if b < 3 {
            return Err(Error::InvalidInput(format!("branch degree {b} must be at least 3")));
        }
        if m == 0 || b as u64 % m != 0 {
            return Err(Error::InvalidInput(format!("m = {m} must divide b = {b}")));
        }
        if mu == 0 || m % mu != 0 {
            return Err(Error::InvalidInput(format!("mu = {mu} must divide m = {m}")));
        }
        if m % curve.field().modulus() == 0 {
            return Err(Error::InvalidInput(format!(
                "characteristic divides m = {m}; gcd(p, 6m) must be 1"
            )));
        }
        if retry_budget == 0 {
            return Err(Error::InvalidInput("retry budget must be positive".into()));
        }
        Ok(ConstructionRequest { b, m, mu, curve, seed, retry_budget })
    }

    pub fn n(&self) -> usize {
        self.b / self.m as usize
    }
}

/// Samples 3n distinct affine points whose group sum has exact order mu.
///
/// The first 3n - 1 points are drawn uniformly from the affine rational
/// points; the last is T minus their sum, where T is a point of exact order
/// mu. Draws repeat until the closing point is affine, all points are
/// distinct, and (when n = 1) no two share an x-coordinate, which would
/// degenerate the chord geometry of the 3-point case.
pub fn sample_divisor_with_class(req: &ConstructionRequest) -> Result<Vec<EPoint>> {
    let n = req.n();
    let count = 3 * n;
    let target = req.curve.find_point_of_order(req.mu, derive_seed(req.seed, 0xA0))?;
    let affine: Vec<EPoint> = req
        .curve
        .rational_points()
        .into_iter()
        .filter(|p| *p != EPoint::Infinity)
        .collect();
    if affine.len() < count {
        return Err(Error::RetryExhausted {
            stage: format!("curve has only {} affine points, need {count}", affine.len()),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(req.seed, 0xA1));
    'attempt: for _ in 0..req.retry_budget.max(64) {
        let mut chosen: Vec<EPoint> = Vec::with_capacity(count);
        let mut seen = BTreeSet::new();
        while chosen.len() < count - 1 {
            let p = affine[rng.gen_range(0..affine.len())];
            if seen.insert(p) {
                chosen.push(p);
            }
        }
        let mut sum = EPoint::Infinity;
        for p in &chosen {
            sum = req.curve.add_points(&sum, p)?;
        }
        let last = req.curve.add_points(&target, &req.curve.negate(&sum))?;
        if last == EPoint::Infinity || !seen.insert(last) {
            continue 'attempt;
        }
        chosen.push(last);
        if n == 1 {
            let mut xs = BTreeSet::new();
            for p in &chosen {
                let EPoint::Affine(x, _) = p else { unreachable!("samples are affine") };
                if !xs.insert(x.value()) {
                    continue 'attempt;
                }
            }
        }
        // The closing point forces the group sum to T; keep it audited.
        let mut total = EPoint::Infinity;
        for p in &chosen {
            total = req.curve.add_points(&total, p)?;
        }
        assert_eq!(total, target);
        return Ok(chosen);
    }
    Err(Error::RetryExhausted { stage: "sample_divisor_with_class".into() })
}

/// Interpolates a degree-b form with intersection divisor exactly
/// m * (sum of points), without any smoothness screening.
///
/// EmptyKernel signals that the class order of the sample does not divide m,
/// which is a caller bug when the sample came from
/// [`sample_divisor_with_class`].
pub fn interpolate_exact_divisor(
    points: &[EPoint],
    req: &ConstructionRequest,
) -> Result<(HomogeneousForm, ReducedBranchDivisor)> {
    let dbc = ReducedBranchDivisor::from_parts(DivisorOnE::from_points(points), req.n())?;
    let space = KernelSpace::solve(&dbc, req.m as usize, &req.curve)?;
    if space.evidence().quotient_dim() == 0 {
        return Err(Error::EmptyKernel);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(req.seed, 0xB0));
    let form = space.sample_non_multiple(&mut rng).expect("positive quotient dimension");
    debug_assert!(verify_witness(&form, &dbc, req.m, &req.curve)?);
    Ok((form, dbc))
}

/// Builds a smooth branch curve of degree b meeting the cubic exactly at the
/// sample points, each with multiplicity m. Kernel elements are drawn with
/// the request seed until one passes the smoothness check and the exact
/// divisor re-verification; the retry budget bounds the draws.
pub fn interpolate_branched_curve(
    points: &[EPoint],
    req: &ConstructionRequest,
) -> Result<HomogeneousForm> {
    let dbc = ReducedBranchDivisor::from_parts(DivisorOnE::from_points(points), req.n())?;
    let space = KernelSpace::solve(&dbc, req.m as usize, &req.curve)?;
    if space.evidence().quotient_dim() == 0 {
        return Err(Error::EmptyKernel);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(req.seed, 0xB1));
    let mut last_failure = String::new();
    for _ in 0..req.retry_budget {
        let candidate = space.sample_non_multiple(&mut rng).expect("positive quotient");
        if !verify_witness(&candidate, &dbc, req.m, &req.curve)? {
            last_failure = "exact divisor check".into();
            continue;
        }
        match curve_is_smooth(&candidate) {
            Ok(Smoothness::Smooth) => return Ok(candidate),
            Ok(Smoothness::SingularAt(p)) => {
                last_failure = format!("smoothness: rational singular point {p}");
            }
            Ok(Smoothness::NotSmoothCertified(_)) => {
                last_failure = "smoothness: singular over the closure".into();
            }
            Err(Error::DegenerateElimination) => {
                last_failure = "smoothness: degenerate elimination".into();
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetryExhausted { stage: format!("interpolate_branched_curve: {last_failure}") })
}

/// One verified condition of the type-(b, m) definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub pass: bool,
    pub evidence: String,
}

/// Evidence for the defining conditions: component degrees, smoothness of
/// both curves, 3n intersection points, multiplicity m at each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeBMReport {
    pub checks: BTreeMap<String, CheckResult>,
}

impl TypeBMReport {
    pub fn pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    fn insert(&mut self, name: &str, pass: bool, evidence: impl Into<String>) {
        self.checks.insert(name.to_string(), CheckResult { pass, evidence: evidence.into() });
    }
}

/// Checks the type-(b, m) conditions for a branch curve against the cubic.
/// A non-rational intersection is reported as a failing check, not an error.
pub fn verify_type_bm(
    branch: &HomogeneousForm,
    cubic: &WeierstrassCurve,
    b: usize,
    m: u64,
) -> Result<TypeBMReport> {
    if branch.field() != cubic.field() {
        return Err(Error::FieldMismatch);
    }
    let mut report = TypeBMReport { checks: BTreeMap::new() };

    let degree_ok = branch.degree() == b && m >= 1 && b as u64 % m == 0;
    report.insert("degrees", degree_ok, format!("deg B = {}, b = {b}, m = {m}", branch.degree()));
    if !degree_ok {
        return Ok(report);
    }
    let n = b / m as usize;

    let distinct = if b >= 3 {
        branch.divide_by_cubic(&cubic.defining_form()).is_none()
    } else {
        true
    };
    report.insert("distinct_components", distinct, "branch is not a multiple of the cubic");

    match curve_is_smooth(branch) {
        Ok(Smoothness::Smooth) => report.insert("branch_smooth", true, "no singular points"),
        Ok(Smoothness::SingularAt(p)) => {
            report.insert("branch_smooth", false, format!("singular at {p}"));
        }
        Ok(Smoothness::NotSmoothCertified(cert)) => {
            report.insert(
                "branch_smooth",
                false,
                format!(
                    "singular over the closure: saturation rank {}/{}",
                    cert.saturation_rank, cert.saturation_target
                ),
            );
        }
        Err(Error::DegenerateElimination) => {
            report.insert("branch_smooth", false, "degenerate elimination");
        }
        Err(e) => return Err(e),
    }

    match curve_is_smooth(&cubic.defining_form()) {
        Ok(Smoothness::Smooth) => report.insert("cubic_smooth", true, "discriminant nonzero"),
        _ => report.insert("cubic_smooth", false, "cubic fails the smoothness check"),
    }

    match cubic.intersection_divisor(branch) {
        Ok(div) => {
            report.insert("intersection_rational", true, format!("total {} = 3b", div.total()));
            report.insert(
                "intersection_count",
                div.support_size() == 3 * n,
                format!("{} points, expected {}", div.support_size(), 3 * n),
            );
            let all_m = div.entries().values().all(|&mult| mult == m as usize);
            report.insert(
                "multiplicities",
                all_m,
                format!("multiplicities {:?}", div.entries().values().collect::<Vec<_>>()),
            );
        }
        Err(Error::NonRationalIntersection { expected, found }) => {
            report.insert(
                "intersection_rational",
                false,
                format!("only {found} of {expected} intersections are rational"),
            );
        }
        Err(Error::CommonComponent) => {
            report.insert("intersection_rational", false, "shares a component with the cubic");
        }
        Err(e) => return Err(e),
    }

    Ok(report)
}

/// One member of a k-plet: the branch curve, its class order, and the full
/// certificate.
#[derive(Debug, Clone)]
pub struct KpletMember {
    pub branch_form: HomogeneousForm,
    pub mu: u64,
    pub certificate: SplittingCertificate,
}

/// Builds one verified member per divisor mu of m, over the given curve.
///
/// The curve's group exponent must be divisible by m, which makes every
/// divisor realizable as a point order; otherwise the unrealizable orders
/// are reported. Each member is certified through both splitting routes.
pub fn build_kplet(
    b: usize,
    m: u64,
    curve: WeierstrassCurve,
    seed: u64,
    retry_budget: usize,
) -> Result<Vec<KpletMember>> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let exponent = curve.group_exponent();
    if exponent % m != 0 {
        let failing: Vec<u64> = divisors(m).into_iter().filter(|d| exponent % d != 0).collect();
        return Err(Error::UnrealizableOrder { orders: failing });
    }
    divisors(m)
        .into_iter()
        .map(|mu| build_member(b, m, mu, curve, seed, retry_budget))
        .collect()
}

fn build_member(
    b: usize,
    m: u64,
    mu: u64,
    curve: WeierstrassCurve,
    seed: u64,
    retry_budget: usize,
) -> Result<KpletMember> {
    let mut last_err = None;
    // Outer retries re-sample the points; a sample can fail to carry any
    // smooth member even when the class order is right.
    for attempt in 0..retry_budget as u64 {
        let req = ConstructionRequest::new(
            b,
            m,
            mu,
            curve,
            derive_seed(seed, (mu << 16) | attempt),
            retry_budget,
        )?;
        let points = sample_divisor_with_class(&req)?;
        match interpolate_branched_curve(&points, &req) {
            Ok(branch_form) => {
                let report = verify_type_bm(&branch_form, &curve, b, m)?;
                if !report.pass() {
                    last_err = Some(Error::RetryExhausted {
                        stage: format!("type check: {:?}", report.checks),
                    });
                    continue;
                }
                let cover = CoverSpec::new(m, branch_form.clone(), curve)?;
                let cert = build_certificate(&cover, derive_seed(seed, mu))?;
                if cert.lambda != mu {
                    return Err(Error::InvalidCertificate(format!(
                        "constructed curve has lambda {} instead of {mu}",
                        cert.lambda
                    )));
                }
                return Ok(KpletMember { branch_form, mu, certificate: cert });
            }
            Err(e @ (Error::RetryExhausted { .. } | Error::EmptyKernel)) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or(Error::RetryExhausted { stage: format!("mu = {mu}") }))
}

/// Finds the smallest admissible (p, a4, a6) whose group exponent is
/// divisible by m and whose group is large enough to sample 3n distinct
/// affine points: the reproducible default curve for constructions. `skip`
/// steps past the first matches, for fallback when a construction cannot be
/// completed over the first curve.
pub fn find_construction_curve(m: u64, n: usize, skip: usize) -> Result<WeierstrassCurve> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let min_order = 3 * n as u64 + 4;
    let mut skipped = 0;
    for p in 5..crate::arith::field::MAX_PRIME {
        let Ok(field) = crate::arith::PrimeField::new(p) else { continue };
        if m % p == 0 {
            continue;
        }
        let bound = p.min(64);
        for a4 in 0..bound {
            for a6 in 0..bound {
                let Ok(curve) = WeierstrassCurve::new(
                    field,
                    field.scalar_from_u64(a4),
                    field.scalar_from_u64(a6),
                ) else {
                    continue;
                };
                // Divisibility of the order is a cheap necessary filter.
                let order = curve.group_order();
                if order % m != 0 || order < min_order {
                    continue;
                }
                if curve.group_exponent() % m == 0 {
                    if skipped < skip {
                        skipped += 1;
                        continue;
                    }
                    return Ok(curve);
                }
            }
        }
    }
    Err(Error::NoSuchOrder { order: m })
}
