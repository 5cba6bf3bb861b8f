//! Crate-wide error type.
//!
//! Every fallible operation reports one of these variants. The variant name
//! is stable and is what the CLI prints in structured error output, so
//! downstream scripts can match on it.

use std::fmt;

/// Errors raised by the arithmetic, geometry, elliptic, splitting and
/// construction layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Inversion of the zero scalar.
    ZeroInverse,
    /// Mixing values that live over different prime fields.
    FieldMismatch,
    /// A series valuation ran past the stored precision: the composed form
    /// vanishes identically as far as we can see, signalling a common
    /// component.
    PrecisionExhausted { precision: usize },
    /// A point claimed to lie on a curve does not.
    NotOnCurve,
    /// Local parametrization requested at a point where all partials vanish.
    SingularPoint { point: [u64; 3] },
    /// An intersection divisor came up short: some intersection points live
    /// only in an extension field.
    NonRationalIntersection { expected: usize, found: usize },
    /// Two curves share an irreducible component.
    CommonComponent,
    /// Resultant elimination found no admissible coordinate chart.
    DegenerateElimination,
    /// A divisor-class operation was applied to a divisor of nonzero degree.
    NonzeroDegree { degree: i64 },
    /// No rational point of the requested exact order exists on the curve.
    NoSuchOrder { order: u64 },
    /// Some local intersection multiplicity of the branch curve with the
    /// cubic is not divisible by the cover degree.
    EssentiallyRamified {
        point: [u64; 3],
        multiplicity: usize,
        modulus: u64,
    },
    /// The interpolation system has no solutions beyond multiples of the
    /// cubic, although the caller asserted the class condition holds.
    EmptyKernel,
    /// A seeded search ran out of retries; `stage` names the failing check.
    RetryExhausted { stage: String },
    /// Divisors of m that cannot be realized as class orders on the curve.
    UnrealizableOrder { orders: Vec<u64> },
    /// Malformed input: bad prime, degree mismatch, bad flag combination.
    InvalidInput(String),
    /// A certificate violates its own structural invariants.
    InvalidCertificate(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ZeroInverse => "ZeroInverse",
            Error::FieldMismatch => "FieldMismatch",
            Error::PrecisionExhausted { .. } => "PrecisionExhausted",
            Error::NotOnCurve => "NotOnCurve",
            Error::SingularPoint { .. } => "SingularPoint",
            Error::NonRationalIntersection { .. } => "NonRationalIntersection",
            Error::CommonComponent => "CommonComponent",
            Error::DegenerateElimination => "DegenerateElimination",
            Error::NonzeroDegree { .. } => "NonzeroDegree",
            Error::NoSuchOrder { .. } => "NoSuchOrder",
            Error::EssentiallyRamified { .. } => "EssentiallyRamified",
            Error::EmptyKernel => "EmptyKernel",
            Error::RetryExhausted { .. } => "RetryExhausted",
            Error::UnrealizableOrder { .. } => "UnrealizableOrder",
            Error::InvalidInput(_) => "InvalidInput",
            Error::InvalidCertificate(_) => "InvalidCertificate",
        }
    }

    /// Process exit status the CLI maps this error to: 2 for validation
    /// problems, 4 for retry exhaustion, 3 for mathematical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 2,
            Error::RetryExhausted { .. } => 4,
            _ => 3,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroInverse => write!(f, "cannot invert zero"),
            Error::FieldMismatch => write!(f, "operands live over different prime fields"),
            Error::PrecisionExhausted { precision } => {
                write!(f, "series vanishes to full precision {precision}")
            }
            Error::NotOnCurve => write!(f, "point does not lie on the curve"),
            Error::SingularPoint { point } => {
                write!(f, "[{}:{}:{}] is a singular point", point[0], point[1], point[2])
            }
            Error::NonRationalIntersection { expected, found } => write!(
                f,
                "intersection total {found} < {expected}: some intersection points are not rational"
            ),
            Error::CommonComponent => write!(f, "curves share a component"),
            Error::DegenerateElimination => {
                write!(f, "leading coefficients vanish in every coordinate permutation")
            }
            Error::NonzeroDegree { degree } => {
                write!(f, "divisor has degree {degree}, expected 0")
            }
            Error::NoSuchOrder { order } => {
                write!(f, "curve has no rational point of exact order {order}")
            }
            Error::EssentiallyRamified { point, multiplicity, modulus } => write!(
                f,
                "multiplicity {multiplicity} at [{}:{}:{}] is not divisible by {modulus}",
                point[0], point[1], point[2]
            ),
            Error::EmptyKernel => {
                write!(f, "interpolation system admits only multiples of the cubic")
            }
            Error::RetryExhausted { stage } => write!(f, "retry budget exhausted at: {stage}"),
            Error::UnrealizableOrder { orders } => {
                write!(f, "orders {orders:?} are not realized on this curve")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::InvalidCertificate(msg) => write!(f, "invalid certificate: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
