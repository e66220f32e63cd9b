use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pre- and postselected states are orthogonal (overlap {overlap:e}); the weak value diverges")]
    OrthogonalSelection { overlap: f64 },

    #[error("observable does not square to the identity (max deviation {deviation:e})")]
    InvalidObservable { deviation: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("truncation at dimension {dim} is insufficient (tail mass {tail_mass:e})")]
    TruncationInsufficient { dim: usize, tail_mass: f64 },

    #[error("analytic and finite-difference QFI disagree: {analytic} vs {numeric}")]
    DerivativeMismatch { analytic: f64, numeric: f64 },

    #[error("position variance {variance:e} is too small to define a signal-to-noise ratio")]
    DegenerateNoise { variance: f64 },

    #[error("SNR ratio undefined: the non-postselected signal vanishes")]
    ChiUndefined,

    #[error("Cramér-Rao bound undefined for Fisher information {fisher} and {n_runs} runs")]
    BoundUndefined { fisher: f64, n_runs: u64 },

    #[error("invalid configuration at `{path}`: {message}")]
    ConfigInvalid { path: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::ConfigInvalid {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::TruncationInsufficient { .. } | Error::DerivativeMismatch { .. } | Error::DegenerateNoise { .. }
        )
    }
}
