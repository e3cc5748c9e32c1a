use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown matrix identifier `{0}`")]
    UnknownMatrix(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("site {site} out of range for {nsites} sites")]
    SiteOutOfRange { site: usize, nsites: usize },

    #[error("a b a^dag b^dag is not proportional to the identity (deviation {0:.3e})")]
    NotProjective(f64),

    #[error("field low-energy space is not a doublet: {0}")]
    Degeneracy(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("model does not fit the three-state path: {0}")]
    PathMismatch(String),

    #[error("invalid lattice: {0}")]
    Lattice(String),

    #[error("bond label mismatch: {0}")]
    LabelMismatch(String),

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("operator is not hermitian (residual {0:.3e})")]
    NotHermitian(f64),

    #[error("hilbert dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("interval [{start}, {end}) is not aligned to two-site cells")]
    MisalignedInterval { start: usize, end: usize },

    #[error("cut {cut} does not split {nsites} sites into two nonempty blocks")]
    InvalidCut { cut: usize, nsites: usize },

    #[error("singular point: {0}")]
    Singularity(String),

    #[error("spectrum is gapless (gap {0:.3e}); Chern number is undefined")]
    Gapless(f64),

    #[error("Luttinger parameter diverges for delta_tilde = {0}")]
    LuttingerDivergence(f64),

    #[error("missing preset parameter `{0}`")]
    MissingParameter(String),

    #[error("preset violates the doublet condition: {0}")]
    PresetDegeneracy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
