use thiserror::Error;

/// Errors raised by group construction, spectral computations and sweeps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} exceeds guard ({value} > {limit})")]
    Guard {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("subset is not symmetric: inverse of element {0} is missing")]
    NotSymmetric(usize),

    #[error("subset contains the identity")]
    ContainsIdentity,

    #[error("subset does not generate the group")]
    NotGenerating,

    #[error("subset is not a union of conjugacy classes")]
    NotNormal,

    #[error("operation not supported for {0}")]
    UnsupportedFamily(String),

    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})"
    )]
    NonConvergence { sweeps: usize, residual: f64 },

    #[error("eigenvalue for character {row} has imaginary part {imag:e}")]
    ImaginaryResidue { row: usize, imag: f64 },

    #[error("classification routes disagree for p = {p}: polynomial says {polynomial}, spectrum says {spectral}")]
    RouteDisagreement {
        p: u64,
        polynomial: bool,
        spectral: bool,
    },

    #[error("comparison for p = {p} is within the guard after recomputation (margin {margin:e})")]
    Borderline { p: u64, margin: f64 },

    #[error("extremality violated at p = {p}, l = {l}: mu = {mu} > {extremal} for mask {mask}")]
    ExtremalityViolation {
        p: u64,
        l: u64,
        mu: f64,
        extremal: f64,
        mask: String,
    },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
