//! Crate-wide error type.
//!
//! Numerical routines in this crate are total on their documented domains;
//! anything outside that domain is reported as an explicit [`Error`] rather
//! than silently producing NaN.

use std::path::PathBuf;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// Array dimensions do not line up.
    #[error("shape mismatch in {op}: {msg}")]
    Shape { op: &'static str, msg: String },

    /// A class label is out of range for the output layer.
    #[error("label {label} out of range for {classes} classes")]
    InvalidLabel { label: usize, classes: usize },

    /// An iterative routine failed to reach its tolerance.
    #[error("{op} did not converge within {iters} iterations (residual {residual:.3e})")]
    NoConvergence {
        op: &'static str,
        iters: usize,
        residual: f64,
    },

    /// A calibration batch produced zero pre-activation variance, so
    /// variance normalisation cannot proceed.
    #[error("degenerate calibration batch: zero pre-activation variance at layer {layer}")]
    DegenerateBatch { layer: usize },

    /// A weight vector meant to be rescaled onto the target ellipse has zero
    /// norm, so its direction is undefined.
    #[error("zero-norm seed vector ({context}): direction undefined, reseed and retry")]
    ZeroSeed { context: String },

    /// The training objective left the representable range.
    #[error("non-finite objective at iteration {iteration}")]
    NonFiniteLoss { iteration: usize },

    /// A dataset file is missing.
    #[error("dataset file not found: {path}")]
    MissingData { path: PathBuf },

    /// An IDX file announced an unexpected magic number.
    #[error("bad IDX magic in {path}: expected {expected:#010x}, found {found:#010x}")]
    IdxMagic {
        path: PathBuf,
        expected: u32,
        found: u32,
    },

    /// An IDX file ended before its header-declared payload.
    #[error("truncated IDX payload in {path}: expected {expected} bytes, found {found}")]
    IdxTruncated {
        path: PathBuf,
        expected: usize,
        found: usize,
    },

    /// A configuration file or override could not be interpreted.
    #[error("config error: {0}")]
    Config(String),

    /// Plain I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
