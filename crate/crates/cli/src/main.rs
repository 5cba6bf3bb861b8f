//! Command-line front end: splitting numbers, class orders, curve
//! construction, k-plets and certificate verification.
//!
//! Exit status: 0 on success, 2 for validation problems, 3 for mathematical
//! failures (essential ramification, failed verification, ...), 4 when a
//! seeded search exhausts its retry budget. Errors are emitted as one JSON
//! object on stderr with the stable error name.

use clap::{Args, Parser, Subcommand};
use splitnum::certificate::{
    build_certificate, canonical_json, from_json, validate_structure, verify_certificate,
    FormFile, SplittingCertificate,
};
use splitnum::construct::{
    build_kplet, divisors, find_construction_curve, interpolate_branched_curve,
    sample_divisor_with_class, verify_type_bm, ConstructionRequest, KpletMember,
};
use splitnum::elliptic::WeierstrassCurve;
use splitnum::splitting::{splitting_number, CoverSpec};
use splitnum::Error;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "splitnum",
    version,
    about = "Splitting numbers of a smooth cubic under simple cyclic covers, over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// `p,a4,a6` in strict decimal.
#[derive(Clone, Copy, Debug)]
struct CurveArg {
    p: u64,
    a4: u64,
    a6: u64,
}

impl std::str::FromStr for CurveArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err("expected p,a4,a6".into());
        }
        let parse = |t: &str| -> Result<u64, String> {
            t.trim().parse::<u64>().map_err(|e| format!("bad integer {t:?}: {e}"))
        };
        Ok(CurveArg { p: parse(parts[0])?, a4: parse(parts[1])?, a6: parse(parts[2])? })
    }
}

impl CurveArg {
    fn to_curve(self) -> Result<WeierstrassCurve, Error> {
        let field = splitnum::arith::PrimeField::new(self.p)?;
        WeierstrassCurve::new(
            field,
            field.scalar_from_u64(self.a4),
            field.scalar_from_u64(self.a6),
        )
    }
}

#[derive(Args)]
struct CoverArgs {
    /// Cubic as p,a4,a6
    #[arg(long)]
    curve: CurveArg,
    /// Branch form file: JSON {p, degree, terms: [[i,j,k,c], ...]}
    #[arg(long)]
    branch: PathBuf,
    /// Cover degree
    #[arg(short)]
    m: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Compute (nu, lambda, class point) for a cover
    Split {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also emit a full certificate to this file
        #[arg(long)]
        certify: Option<PathBuf>,
    },
    /// Print the class order lambda of branch + cubic
    Lambda {
        #[command(flatten)]
        cover: CoverArgs,
    },
    /// Build one type-(b,m) branch curve with class order mu
    Construct {
        #[arg(short)]
        b: usize,
        #[arg(short)]
        m: u64,
        #[arg(long)]
        mu: u64,
        /// Cubic as p,a4,a6; searched automatically when omitted
        #[arg(long)]
        curve: Option<CurveArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        retries: usize,
        #[arg(long)]
        certify: Option<PathBuf>,
    },
    /// Re-check a certificate file; exits 0 iff every check passes
    Verify {
        file: PathBuf,
    },
    /// Build one certified member per divisor mu of m
    Kplet {
        #[arg(short)]
        b: usize,
        #[arg(short)]
        m: u64,
        /// Cubic as p,a4,a6; searched automatically when omitted
        #[arg(long)]
        curve: Option<CurveArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        retries: usize,
        /// Write one certificate file per member into this directory
        #[arg(long)]
        certify_dir: Option<PathBuf>,
    },
    /// End-to-end (b, m) = (4, 4) demonstration: three components
    Demo {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

enum CliError {
    Core(Error),
    Io(String, std::io::Error),
    Verification(String),
}

impl CliError {
    fn name(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.name(),
            CliError::Io(..) => "Io",
            CliError::Verification(_) => "VerificationFailed",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => e.exit_code() as u8,
            CliError::Io(..) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{path}: {e}"),
            CliError::Verification(check) => write!(f, "check {check:?} failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let payload = match &e {
                CliError::Verification(check) => serde_json::json!({
                    "error": e.name(),
                    "check": check,
                    "detail": e.to_string(),
                }),
                _ => serde_json::json!({
                    "error": e.name(),
                    "detail": e.to_string(),
                }),
            };
            eprintln!("{payload}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(path.display().to_string(), e))
}

fn load_cover(args: &CoverArgs) -> Result<CoverSpec, CliError> {
    let curve = args.curve.to_curve()?;
    let form_file = FormFile::parse(&read_file(&args.branch)?)?;
    if form_file.p != curve.field().modulus() {
        return Err(Error::InvalidInput(format!(
            "branch file is over F_{} but the curve is over F_{}",
            form_file.p,
            curve.field().modulus()
        ))
        .into());
    }
    let (_, branch) = form_file.to_form()?;
    Ok(CoverSpec::new(args.m, branch, curve)?)
}

fn emit_certificate(cert: &SplittingCertificate, path: &Path) -> Result<(), CliError> {
    validate_structure(cert)?;
    write_file(path, &canonical_json(cert))
}

fn pick_curve(explicit: Option<CurveArg>, m: u64, b: usize) -> Result<WeierstrassCurve, CliError> {
    match explicit {
        Some(arg) => Ok(arg.to_curve()?),
        None => {
            if m == 0 || b as u64 % m != 0 {
                return Err(Error::InvalidInput(format!("m = {m} must divide b = {b}")).into());
            }
            Ok(find_construction_curve(m, b / m as usize, 0)?)
        }
    }
}

fn warn_small_degree(b: usize) {
    if b < 4 {
        eprintln!(
            "warning: b = {b} is outside the distinguishing theorems' hypotheses (b >= 4); \
             certificates are marked accordingly"
        );
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Split { cover, seed, certify } => {
            let spec = load_cover(&cover)?;
            let outcome = splitting_number(&spec)?;
            println!(
                "nu = {}, lambda = {}, class_point = {}",
                outcome.nu, outcome.lambda, outcome.class_point
            );
            if let Some(path) = certify {
                let cert = build_certificate(&spec, seed)?;
                emit_certificate(&cert, &path)?;
                println!("certificate written to {}", path.display());
            }
            Ok(())
        }
        Command::Lambda { cover } => {
            let spec = load_cover(&cover)?;
            let outcome = splitting_number(&spec)?;
            println!("{}", outcome.lambda);
            Ok(())
        }
        Command::Construct { b, m, mu, curve, seed, retries, certify } => {
            warn_small_degree(b);
            let curve = pick_curve(curve, m, b)?;
            let req = ConstructionRequest::new(b, m, mu, curve, seed, retries)?;
            let points = sample_divisor_with_class(&req)?;
            let branch = interpolate_branched_curve(&points, &req)?;
            let report = verify_type_bm(&branch, &curve, b, m)?;
            let form_file = FormFile::from_form(&branch);
            let checks: serde_json::Value = report
                .checks
                .iter()
                .map(|(name, c)| {
                    (name.clone(), serde_json::json!({"pass": c.pass, "evidence": c.evidence}))
                })
                .collect::<serde_json::Map<String, serde_json::Value>>()
                .into();
            let doc = serde_json::json!({
                "curve": {
                    "p": curve.field().modulus(),
                    "a4": curve.a4().value(),
                    "a6": curve.a6().value(),
                },
                "branch": serde_json::to_value(&form_file).expect("form serializes"),
                "type_bm_checks": checks,
                "pass": report.pass(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("doc serializes"));
            if let Some(path) = certify {
                let spec = CoverSpec::new(m, branch, curve)?;
                let cert = build_certificate(&spec, seed)?;
                emit_certificate(&cert, &path)?;
            }
            Ok(())
        }
        Command::Verify { file } => {
            let cert = from_json(&read_file(&file)?)?;
            let report = verify_certificate(&cert);
            for check in &report.checks {
                println!(
                    "{} {}: {}",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.name,
                    check.detail
                );
            }
            match report.first_failure() {
                None => Ok(()),
                Some(check) => Err(CliError::Verification(check.name.clone())),
            }
        }
        Command::Kplet { b, m, curve, seed, retries, certify_dir } => {
            warn_small_degree(b);
            let members = run_kplet(b, m, curve, seed, retries)?;
            report_kplet(&members, certify_dir.as_deref())
        }
        Command::Demo { seed } => {
            let (b, m) = (4, 4);
            let members = run_kplet(b, m, None, seed, 64)?;
            println!(
                "(b, m) = ({b}, {m}): m has {} divisors, so {} connected families",
                divisors(m).len(),
                members.len()
            );
            for member in &members {
                let c = &member.certificate;
                println!(
                    "mu = {}: lambda = {}, nu = {} (cover p = {}, branch degree {}), verify: {}",
                    member.mu,
                    c.lambda,
                    c.splitting_number,
                    c.cover.curve.p,
                    c.cover.b,
                    if verify_certificate(c).pass() { "ok" } else { "FAILED" }
                );
            }
            report_kplet(&members, None)
        }
    }
}

/// Runs build_kplet; when no curve was supplied, steps through further
/// search candidates if construction over the first cannot be completed.
fn run_kplet(
    b: usize,
    m: u64,
    curve: Option<CurveArg>,
    seed: u64,
    retries: usize,
) -> Result<Vec<KpletMember>, CliError> {
    if let Some(arg) = curve {
        return Ok(build_kplet(b, m, arg.to_curve()?, seed, retries)?);
    }
    if m == 0 || b as u64 % m != 0 {
        return Err(Error::InvalidInput(format!("m = {m} must divide b = {b}")).into());
    }
    let n = b / m as usize;
    let mut last = None;
    for skip in 0..8 {
        let candidate = find_construction_curve(m, n, skip)?;
        match build_kplet(b, m, candidate, seed, retries) {
            Ok(members) => return Ok(members),
            Err(e @ (Error::RetryExhausted { .. } | Error::UnrealizableOrder { .. })) => {
                last = Some(e);
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(last.expect("at least one candidate attempted").into())
}

fn report_kplet(members: &[KpletMember], dir: Option<&Path>) -> Result<(), CliError> {
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.display().to_string(), e))?;
        for member in members {
            let path = dir.join(format!("cert_mu{}.json", member.mu));
            emit_certificate(&member.certificate, &path)?;
            println!(
                "mu = {}: nu = {}, certificate {}",
                member.mu,
                member.certificate.splitting_number,
                path.display()
            );
        }
    } else {
        let docs: Vec<serde_json::Value> = members
            .iter()
            .map(|mb| serde_json::to_value(&mb.certificate).expect("certificate serializes"))
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Array(docs)).expect("array prints")
        );
    }
    Ok(())
}
