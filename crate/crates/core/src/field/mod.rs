//! Stationary, centered, unit-variance Gaussian random fields: covariance
//! models satisfying the smoothness/normalization contract and samplers for
//! grids and point clouds.

mod covariance;
mod crossings;
mod grid_sampler;
mod point_sampler;
mod sample;

pub use covariance::{
    normalize, CovarianceModel, ParameterTransform, RadialProfile, RawCovariance,
};
pub use crossings::{count_local_maxima_above, count_upcrossings, local_maxima_above, LocalMaximum};
pub use grid_sampler::{simulate_grid, GridSampler, GridSamplerScratch};
pub use point_sampler::{
    simulate_points, ExactPointSampler, FourierPointSampler, PointMethod, PointSamplerOptions,
    MIN_FOURIER_MODES,
};
pub use sample::{FieldSample, GridGeometry, SampleDomain, SynthesisMethod};

/// Errors from field synthesis.
#[derive(Debug, thiserror::Error)]
pub enum FieldError {
    #[error("grid spacing {spacing} too coarse: Γ(h) = {correlation:.4} ≤ 0.95")]
    GridTooCoarse { spacing: f64, correlation: f64 },
    #[error("circulant embedding not nonnegative definite after {doublings} domain doublings")]
    EmbeddingFailure { doublings: usize },
    #[error("second spectral moment matrix is singular")]
    DegenerateSpectralMoment,
    #[error("covariance factorization failed after exhausting the jitter ladder")]
    FactorizationFailure,
    #[error("{points} points exceed the exact-factorization cap of {cap}")]
    CapExceeded { points: usize, cap: usize },
    #[error("{modes} Fourier modes is below the minimum of {minimum}")]
    TooFewFourierModes { modes: usize, minimum: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty point list")]
    EmptyPoints,
}
