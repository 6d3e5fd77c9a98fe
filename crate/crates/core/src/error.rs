use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("moment IKM({a},{b};{c}) diverges: need a < b, or a == b with c <= a - 2")]
    Divergent { a: u32, b: u32, c: u32 },

    #[error("requested accuracy of {target_digits} digits cannot be certified ({detail})")]
    PrecisionUnreachable { target_digits: u32, detail: String },

    #[error("no convergence after level {level}: best value {value} with error estimate {err}")]
    NonConvergence {
        level: u32,
        value: String,
        err: String,
    },

    #[error("intermediate value overflows the exponent range: {0}")]
    Overflow(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("evaluation point {x} is too close to the singularity at 0 (|x| < {min})")]
    SingularPoint { x: String, min: String },

    #[error("divisibility violated: {0}")]
    Divisibility(String),

    #[error("reduction mismatch: {0}")]
    ReductionMismatch(String),
}

impl Error {
    /// True for failures caused by insufficient precision or level budget
    /// rather than by bad input.
    pub fn is_precision_failure(&self) -> bool {
        matches!(
            self,
            Error::PrecisionUnreachable { .. } | Error::NonConvergence { .. } | Error::Overflow(_)
        )
    }
}
