//! Machine-checkable splitting certificates.
//!
//! A certificate records everything needed to re-derive a splitting number
//! from scratch: the cover data, the audited intersection divisor, the class
//! point with its order, the witness curve at level lambda, and rank
//! evidence that every level below lambda is witness-free. Verification
//! recomputes all of it, including the seeded witness search, so any
//! tampered field fails some named check.
//!
//! Serialization is canonical JSON: objects with sorted keys, decimal
//! integers, a trailing newline. Byte equality of two emissions with the
//! same seed is equivalent to semantic equality.

use crate::arith::PrimeField;
use crate::elliptic::{DivisorOnE, EPoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::geometry::divisor::IntersectionDivisor;
use crate::geometry::form::HomogeneousForm;
use crate::splitting::{
    assemble_dbc_with_intersection, principality_witness, splitting_number_of_dbc, CoverSpec,
    ReducedBranchDivisor,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Curve data as serialized: {p, a4, a6}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveData {
    pub p: u64,
    pub a4: u64,
    pub a6: u64,
}

impl CurveData {
    pub fn from_curve(curve: &WeierstrassCurve) -> Self {
        CurveData {
            p: curve.field().modulus(),
            a4: curve.a4().value(),
            a6: curve.a6().value(),
        }
    }

    pub fn to_curve(&self) -> Result<WeierstrassCurve> {
        let field = PrimeField::new(self.p)?;
        if self.a4 >= self.p || self.a6 >= self.p {
            return Err(Error::InvalidInput("curve coefficients out of range".into()));
        }
        WeierstrassCurve::new(
            field,
            field.scalar_from_u64(self.a4),
            field.scalar_from_u64(self.a6),
        )
    }
}

/// A form in the shared terms format: {degree, terms: [[i, j, k, c], ...]}
/// with terms in strictly ascending exponent order and 0 < c < p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormData {
    pub degree: usize,
    pub terms: Vec<(u32, u32, u32, u64)>,
}

impl FormData {
    pub fn from_form(form: &HomogeneousForm) -> Self {
        FormData {
            degree: form.degree(),
            terms: form.terms().map(|((i, j, k), c)| (i, j, k, c.value())).collect(),
        }
    }

    pub fn to_form(&self, field: PrimeField) -> Result<HomogeneousForm> {
        let p = field.modulus();
        let mut prev: Option<(u32, u32, u32)> = None;
        for &(i, j, k, c) in &self.terms {
            if c == 0 || c >= p {
                return Err(Error::InvalidInput(format!(
                    "coefficient {c} out of range (0, {p})"
                )));
            }
            if prev.is_some_and(|e| e >= (i, j, k)) {
                return Err(Error::InvalidInput(
                    "form terms must be in strictly ascending exponent order".into(),
                ));
            }
            prev = Some((i, j, k));
        }
        HomogeneousForm::new(
            field,
            self.degree,
            self.terms.iter().map(|&(i, j, k, c)| ((i, j, k), field.scalar_from_u64(c))),
        )
    }
}

/// A standalone form file, as consumed by the CLI: {p, degree, terms}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormFile {
    pub p: u64,
    pub degree: usize,
    pub terms: Vec<(u32, u32, u32, u64)>,
}

impl FormFile {
    pub fn to_form(&self) -> Result<(PrimeField, HomogeneousForm)> {
        let field = PrimeField::new(self.p)?;
        let data = FormData { degree: self.degree, terms: self.terms.clone() };
        Ok((field, data.to_form(field)?))
    }

    pub fn from_form(form: &HomogeneousForm) -> Self {
        let data = FormData::from_form(form);
        FormFile {
            p: form.field().modulus(),
            degree: data.degree,
            terms: data.terms,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("form file: {e}")))
    }
}

/// A curve point as serialized: "inf" or [x, y].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointData {
    Named(String),
    Affine([u64; 2]),
}

impl PointData {
    pub fn from_point(p: &EPoint) -> Self {
        match p {
            EPoint::Infinity => PointData::Named("inf".into()),
            EPoint::Affine(x, y) => PointData::Affine([x.value(), y.value()]),
        }
    }

    pub fn to_point(&self, field: PrimeField) -> Result<EPoint> {
        match self {
            PointData::Named(s) if s == "inf" => Ok(EPoint::Infinity),
            PointData::Named(s) => {
                Err(Error::InvalidInput(format!("unknown point literal {s:?}")))
            }
            PointData::Affine([x, y]) => {
                if *x >= field.modulus() || *y >= field.modulus() {
                    return Err(Error::InvalidInput("point coordinates out of range".into()));
                }
                Ok(EPoint::Affine(field.scalar_from_u64(*x), field.scalar_from_u64(*y)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSummary {
    pub curve: CurveData,
    pub m: u64,
    pub b: usize,
    pub n: usize,
    pub branch: FormData,
    /// Set when b < 4: the distinguishing theorems assume b >= 4, so such
    /// runs are exploratory.
    pub outside_theorem_hypotheses: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntersectionEntry {
    pub point: PointData,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntersectionData {
    pub entries: Vec<IntersectionEntry>,
    pub total: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankRecord {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
}

/// The full audit record for one splitting-number computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplittingCertificate {
    pub cover: CoverSummary,
    pub intersection: IntersectionData,
    pub class_point: PointData,
    pub lambda: u64,
    pub splitting_number: u64,
    pub witness: FormData,
    /// Rank evidence per witness-free level 1 <= k < lambda, keyed by k.
    pub nonexistence_ranks: BTreeMap<String, RankRecord>,
    pub seed: u64,
}

fn intersection_data(div: &IntersectionDivisor) -> Result<IntersectionData> {
    let mut as_points: Vec<(EPoint, usize)> = Vec::new();
    for (p, &m) in div.entries() {
        as_points.push((EPoint::from_proj(p)?, m));
    }
    as_points.sort();
    let entries = as_points
        .into_iter()
        .map(|(p, m)| IntersectionEntry { point: PointData::from_point(&p), multiplicity: m })
        .collect();
    Ok(IntersectionData { entries, total: div.total() })
}

/// Runs the full pipeline on a cover and packages the result.
///
/// Both splitting routes are exercised: the class-order route fixes lambda,
/// and the per-level witness search must find its first witness exactly at
/// lambda, recording rank evidence below it. A disagreement aborts with
/// InvalidCertificate rather than emitting an inconsistent record.
pub fn build_certificate(cover: &CoverSpec, seed: u64) -> Result<SplittingCertificate> {
    let (dbc, intersection) = assemble_dbc_with_intersection(cover)?;
    let outcome = splitting_number_of_dbc(&dbc, cover)?;

    let mut ranks = BTreeMap::new();
    let mut witness = None;
    for k in 1..=outcome.lambda {
        let search = principality_witness(&dbc, k, cover.cubic(), seed)?;
        match search.witness {
            Some(w) if k == outcome.lambda => witness = Some(w),
            Some(_) => {
                return Err(Error::InvalidCertificate(format!(
                    "witness found at level {k} below the class order {}",
                    outcome.lambda
                )));
            }
            None if k == outcome.lambda => {
                return Err(Error::InvalidCertificate(format!(
                    "no witness at the class order {}",
                    outcome.lambda
                )));
            }
            None => {
                ranks.insert(
                    k.to_string(),
                    RankRecord {
                        rows: search.evidence.rows,
                        cols: search.evidence.cols,
                        rank: search.evidence.rank,
                    },
                );
            }
        }
    }
    let witness = witness.expect("witness exists at level lambda");

    Ok(SplittingCertificate {
        cover: CoverSummary {
            curve: CurveData::from_curve(cover.cubic()),
            m: cover.m(),
            b: cover.b(),
            n: cover.n(),
            branch: FormData::from_form(cover.branch_form()),
            outside_theorem_hypotheses: cover.b() < 4,
        },
        intersection: intersection_data(&intersection)?,
        class_point: PointData::from_point(&outcome.class_point),
        lambda: outcome.lambda,
        splitting_number: outcome.nu,
        witness: FormData::from_form(&witness),
        nonexistence_ranks: ranks,
        seed,
    })
}

/// Structural invariants checked before a certificate may be written out:
/// lambda * nu = m, witness degree lambda * n, rank keys exactly 1..lambda.
pub fn validate_structure(cert: &SplittingCertificate) -> Result<()> {
    if cert.lambda == 0 || cert.lambda * cert.splitting_number != cert.cover.m {
        return Err(Error::InvalidCertificate(format!(
            "lambda {} * nu {} != m {}",
            cert.lambda, cert.splitting_number, cert.cover.m
        )));
    }
    if cert.cover.n * cert.cover.m as usize != cert.cover.b {
        return Err(Error::InvalidCertificate("n * m != b".into()));
    }
    if cert.witness.degree != cert.lambda as usize * cert.cover.n {
        return Err(Error::InvalidCertificate("witness degree is not lambda * n".into()));
    }
    let expected_keys: Vec<String> = {
        let mut v: Vec<String> = (1..cert.lambda).map(|k| k.to_string()).collect();
        v.sort();
        v
    };
    let actual_keys: Vec<String> = cert.nonexistence_ranks.keys().cloned().collect();
    if actual_keys != expected_keys {
        return Err(Error::InvalidCertificate(format!(
            "rank evidence keys {actual_keys:?} do not cover 1..lambda"
        )));
    }
    Ok(())
}

/// One named verification step.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// The result of re-running a certificate.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.pass)
    }
}

struct Checker {
    checks: Vec<CheckOutcome>,
}

impl Checker {
    fn new() -> Self {
        Checker { checks: Vec::new() }
    }

    fn record(&mut self, name: &str, pass: bool, detail: impl Into<String>) -> bool {
        self.checks.push(CheckOutcome { name: name.into(), pass, detail: detail.into() });
        pass
    }

    fn fail(mut self, name: &str, detail: impl Into<String>) -> VerifyReport {
        self.record(name, false, detail);
        VerifyReport { checks: self.checks }
    }
}

/// Recomputes every recorded quantity of the certificate from its inputs.
/// Any mismatch, including in the seeded witness bytes, fails a named
/// check. Errors become failing checks rather than panics.
pub fn verify_certificate(cert: &SplittingCertificate) -> VerifyReport {
    let mut ck = Checker::new();

    // cover: curve and branch form reconstruct, degrees and flags match.
    let curve = match cert.cover.curve.to_curve() {
        Ok(c) => c,
        Err(e) => return ck.fail("cover", format!("curve rejected: {e}")),
    };
    let branch = match cert.cover.branch.to_form(curve.field()) {
        Ok(f) => f,
        Err(e) => return ck.fail("cover", format!("branch form rejected: {e}")),
    };
    let cover = match CoverSpec::new(cert.cover.m, branch, curve) {
        Ok(c) => c,
        Err(e) => return ck.fail("cover", format!("cover rejected: {e}")),
    };
    let cover_ok = cert.cover.b == cover.b()
        && cert.cover.n == cover.n()
        && cert.cover.outside_theorem_hypotheses == (cover.b() < 4);
    if !ck.record("cover", cover_ok, format!("m={} b={} n={}", cover.m(), cover.b(), cover.n()))
    {
        return VerifyReport { checks: ck.checks };
    }

    // structure: arithmetic invariants of the record itself.
    if let Err(e) = validate_structure(cert) {
        return ck.fail("structure", e.to_string());
    }
    ck.record("structure", true, "lambda * nu = m; witness degree lambda * n");

    // intersection: recompute the divisor of the branch on the cubic.
    let (dbc, intersection) = match assemble_dbc_with_intersection(&cover) {
        Ok(pair) => pair,
        Err(e) => return ck.fail("intersection", format!("recomputation failed: {e}")),
    };
    let recomputed = match intersection_data(&intersection) {
        Ok(d) => d,
        Err(e) => return ck.fail("intersection", e.to_string()),
    };
    if !ck.record(
        "intersection",
        recomputed == cert.intersection,
        format!("total {}", intersection.total()),
    ) {
        return VerifyReport { checks: ck.checks };
    }

    // class_point, lambda and nu through the group law.
    let outcome = match splitting_number_of_dbc(&dbc, &cover) {
        Ok(o) => o,
        Err(e) => return ck.fail("class_point", e.to_string()),
    };
    let recorded_class = cert.class_point.to_point(curve.field());
    let class_ok = recorded_class.as_ref() == Ok(&outcome.class_point);
    ck.record("class_point", class_ok, format!("computed {}", outcome.class_point));
    ck.record("lambda", outcome.lambda == cert.lambda, format!("computed {}", outcome.lambda));
    ck.record(
        "splitting_number",
        outcome.nu == cert.splitting_number,
        format!("computed {}", outcome.nu),
    );

    // witness: the recorded form must re-verify and must equal the seeded
    // search bit for bit, so the seed field is load-bearing.
    match cert.witness.to_form(curve.field()) {
        Err(e) => {
            ck.record("witness", false, format!("witness form rejected: {e}"));
        }
        Ok(w) => {
            let verified = crate::splitting::verify_witness(&w, &dbc, cert.lambda, &curve);
            if !matches!(verified, Ok(true)) {
                ck.record(
                    "witness",
                    false,
                    format!("intersection divisor is not {} * D", cert.lambda),
                );
            } else {
                match principality_witness(&dbc, cert.lambda, &curve, cert.seed) {
                    Ok(search) => {
                        let same = search.witness.as_ref() == Some(&w);
                        let detail = if same {
                            "re-verified and matches the seeded search".to_string()
                        } else {
                            "witness differs from the seeded search".to_string()
                        };
                        ck.record("witness", same, detail);
                    }
                    Err(e) => {
                        ck.record("witness", false, format!("seeded search failed: {e}"));
                    }
                }
            }
        }
    }

    // ranks: every level below lambda is witness-free with matching shape.
    let mut ranks_ok = true;
    let mut rank_detail = String::new();
    for k in 1..cert.lambda {
        match principality_witness(&dbc, k, &curve, cert.seed) {
            Ok(search) => {
                let record = cert.nonexistence_ranks.get(&k.to_string());
                let expected = RankRecord {
                    rows: search.evidence.rows,
                    cols: search.evidence.cols,
                    rank: search.evidence.rank,
                };
                let ok = search.witness.is_none()
                    && search.evidence.quotient_dim() == 0
                    && record == Some(&expected);
                if !ok {
                    ranks_ok = false;
                    rank_detail =
                        format!("level {k}: computed {expected:?}, recorded {record:?}");
                    break;
                }
            }
            Err(e) => {
                ranks_ok = false;
                rank_detail = format!("level {k} failed: {e}");
                break;
            }
        }
    }
    if ranks_ok {
        rank_detail = format!("{} witness-free levels re-verified", cert.lambda - 1);
    }
    ck.record("ranks", ranks_ok, rank_detail);

    VerifyReport { checks: ck.checks }
}

/// Canonical JSON: sorted keys, two-space indentation, trailing newline.
pub fn canonical_json(cert: &SplittingCertificate) -> String {
    let value = serde_json::to_value(cert).expect("certificate serializes");
    let mut s = serde_json::to_string_pretty(&value).expect("value prints");
    s.push('\n');
    s
}

pub fn from_json(s: &str) -> Result<SplittingCertificate> {
    serde_json::from_str(s).map_err(|e| Error::InvalidCertificate(e.to_string()))
}

/// Rebuilds the reduced branch divisor recorded in a certificate.
pub fn dbc_from_certificate(cert: &SplittingCertificate) -> Result<ReducedBranchDivisor> {
    let curve = cert.cover.curve.to_curve()?;
    let m = cert.cover.m as usize;
    let mut divisor = DivisorOnE::new();
    for entry in &cert.intersection.entries {
        let point = entry.point.to_point(curve.field())?;
        if entry.multiplicity % m != 0 {
            return Err(Error::InvalidCertificate(format!(
                "multiplicity {} not divisible by m",
                entry.multiplicity
            )));
        }
        divisor.add_entry(point, (entry.multiplicity / m) as i64);
    }
    ReducedBranchDivisor::from_parts(divisor, cert.cover.n)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// lambda = 1 example: B = Y^4 over y^2 = x^3 + 4x / F_5.
    fn sample_certificate() -> SplittingCertificate {
        let e = WeierstrassCurve::from_values(5, 4, 0).unwrap();
        let f = e.field();
        let y = HomogeneousForm::from_terms(f, 1, &[(0, 1, 0, 1)]).unwrap();
        let b = y.multiply(&y).unwrap().multiply(&y).unwrap().multiply(&y).unwrap();
        let cover = CoverSpec::new(4, b, e).unwrap();
        build_certificate(&cover, 9).unwrap()
    }

    #[test]
    fn certificate_roundtrip_and_determinism() {
        let cert = sample_certificate();
        assert_eq!(cert.lambda, 1);
        assert_eq!(cert.splitting_number, 4);
        assert!(cert.nonexistence_ranks.is_empty());
        validate_structure(&cert).unwrap();

        let json = canonical_json(&cert);
        let parsed = from_json(&json).unwrap();
        assert_eq!(parsed, cert);
        // Same seed, same bytes.
        assert_eq!(json, canonical_json(&parsed));

        let report = verify_certificate(&cert);
        assert!(report.pass(), "{:?}", report.first_failure());
    }

    #[test]
    fn tampering_fails_named_checks() {
        let base = sample_certificate();

        let mut c = base.clone();
        c.lambda = 2;
        c.splitting_number = 2;
        assert!(!verify_certificate(&c).pass());

        let mut c = base.clone();
        c.splitting_number = 1;
        assert_eq!(verify_certificate(&c).first_failure().unwrap().name, "structure");

        let mut c = base.clone();
        c.intersection.entries[0].multiplicity = 3;
        assert_eq!(verify_certificate(&c).first_failure().unwrap().name, "intersection");

        let mut c = base.clone();
        c.class_point = PointData::Affine([0, 0]);
        assert_eq!(verify_certificate(&c).first_failure().unwrap().name, "class_point");

        // Tampered witness coefficient.
        let mut c = base.clone();
        c.witness.terms[0].3 = 2;
        assert_eq!(verify_certificate(&c).first_failure().unwrap().name, "witness");

        // Tampered seed breaks witness byte-equality.
        let mut c = base.clone();
        c.seed = 10;
        assert_eq!(verify_certificate(&c).first_failure().unwrap().name, "witness");

        // Extra rank evidence is rejected.
        let mut c = base.clone();
        c.nonexistence_ranks.insert("1".into(), RankRecord { rows: 1, cols: 1, rank: 1 });
        assert_eq!(verify_certificate(&c).first_failure().unwrap().name, "structure");
    }

    #[test]
    fn corrupt_cover_rejected_up_front() {
        let mut c = sample_certificate();
        c.cover.curve.p = 6;
        assert_eq!(verify_certificate(&c).first_failure().unwrap().name, "cover");
    }

    #[test]
    fn small_degree_covers_are_flagged() {
        // b = 3 sits outside the distinguishing theorems' hypotheses and the
        // certificate says so.
        let e = WeierstrassCurve::from_values(5, 4, 0).unwrap();
        let f = e.field();
        let y = HomogeneousForm::from_terms(f, 1, &[(0, 1, 0, 1)]).unwrap();
        let b3 = y.multiply(&y).unwrap().multiply(&y).unwrap();
        let cover = CoverSpec::new(3, b3, e).unwrap();
        let cert = build_certificate(&cover, 2).unwrap();
        assert!(cert.cover.outside_theorem_hypotheses);
        assert_eq!(cert.lambda, 1);
        assert_eq!(cert.splitting_number, 3);
        assert!(verify_certificate(&cert).pass());
    }
}
