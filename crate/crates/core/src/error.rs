use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pole at s = {re} + {im}i", re = .0.re, im = .0.im)]
    Pole(Complex64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("σ = {sigma} is outside the supported region σ > {sigma_phi}")]
    UnsupportedRegion { sigma: f64, sigma_phi: f64 },

    #[error("no admissible cutoff below {cap}: certified tail {tail:e} exceeds {tolerance:e}")]
    Convergence { cap: usize, tail: f64, tolerance: f64 },

    #[error("{what} {value} lies outside the materialized range (bound {bound})")]
    OutOfMaterializedRange { what: &'static str, value: u64, bound: u64 },

    #[error("character phase θ = {theta:e} is ≡ 0 mod 2π for a nontrivial index")]
    DegenerateCharacter { theta: f64 },

    #[error("target is not admissible: {0}")]
    NonAdmissibleTarget(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("evaluation failed at shift k = {k}: {source}")]
    AtShift {
        k: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Stable process exit code for the CLI: 2 config, 3 domain/invariant,
    /// 4 numeric failure, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Json(_) => 2,
            Error::Pole(_)
            | Error::Domain(_)
            | Error::UnsupportedRegion { .. }
            | Error::OutOfMaterializedRange { .. }
            | Error::NonAdmissibleTarget(_)
            | Error::LengthMismatch { .. }
            | Error::InvalidSequence(_)
            | Error::Invariant(_) => 3,
            Error::Convergence { .. } | Error::DegenerateCharacter { .. } => 4,
            Error::AtShift { source, .. } => source.exit_code(),
            Error::Io(_) => 1,
        }
    }
}
