use thiserror::Error;

/// Errors shared across the crate. Variant names follow the failure they
/// report, not the module that raises them.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("neither root of c^2 - abc + a^2 + b^2 lies in [b, ab/2)")]
    NoNormalizedCompletion,

    #[error("discriminant a^2 b^2 - 4(a^2 + b^2) is negative")]
    NonrealRoot,

    #[error("triple does not satisfy a^2 + b^2 + c^2 = abc: residual {residual}")]
    InvalidTriple { residual: String },

    #[error("matrix has nonzero trace, not an order-two elliptic")]
    NotElliptic,

    #[error("element is not hyperbolic (|trace| <= 2)")]
    NotHyperbolic,

    #[error("matrix fixes infinity (gamma = 0), no finite anchor")]
    AnchoredAtInfinity,

    #[error("nu move is only defined at the tree root")]
    NuNotAtRoot,

    #[error("continued fraction word evaluates with zero denominator")]
    DivergentWord,

    #[error("input is rational; Lagrange estimation needs an irrational or a long word")]
    RationalInput,

    #[error("expansion too short for the estimator: need at least {needed} quotients, got {got}")]
    InsufficientExpansion { needed: usize, got: usize },

    #[error("word machinery is not defined for m = {m}")]
    CaseUnsupported { m: i64 },

    #[error("excised intervals overlap: ({a_lo}, {a_hi}) collides with ({b_lo}, {b_hi})")]
    ExcisionOverlap {
        a_lo: String,
        a_hi: String,
        b_lo: String,
        b_hi: String,
    },

    #[error("square root of a negative value")]
    NegativeSqrt,

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
