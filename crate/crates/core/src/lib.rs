//! Gaussian random fields on fractal sets.
//!
//! This crate simulates smooth stationary Gaussian random fields on fractal
//! and regular subsets of ℝⁿ and compares Monte Carlo estimates of the tail
//! of the maximum, `P(sup_{t∈S} X(t) > u)`, against closed-form asymptotic
//! predictions driven by the Minkowski geometry of the parameter set `S`.
//!
//! The pieces fit together as a pipeline:
//!
//! 1. [`geometry`] builds self-similar sets from iterated function systems,
//!    rasterizes them, and measures tube volumes, Minkowski dimension and
//!    content, and outer Minkowski content.
//! 2. [`field`] synthesizes unit-variance stationary Gaussian fields on
//!    grids (circulant embedding) and on arbitrary point clouds (exact
//!    factorization or random Fourier features).
//! 3. [`tail`] evaluates the closed-form tail predictions for the maximum in
//!    the strong/weak/log Minkowski regimes and the two-term expansion for
//!    sets with an outer Minkowski content.
//! 4. [`mc`] estimates the same tail empirically with shared-replication
//!    Monte Carlo and Wilson confidence intervals, and extracts the
//!    log-slope dimension from the estimates.
//! 5. [`excursion`] provides diagnostics on excursion-set components
//!    (radius envelopes, boundary exclusion) used to sanity-check the
//!    asymptotic picture on simulated fields.
//! 6. [`driver`] wires everything into reproducible batch experiments with
//!    CSV/JSON outputs; the `fractal-extremes` binary is a thin wrapper
//!    around it.
//!
//! Every randomized computation takes a master seed and derives one
//! independent stream per replication, so results are byte-identical across
//! runs and worker counts.

pub mod driver;
pub mod excursion;
pub mod field;
pub mod geometry;
pub mod mc;
pub mod seeding;
pub mod special;
pub mod tail;

pub use excursion::{analyze_excursion, boundary_exclusion_check, radius_bounds, ComponentReport};
pub use field::{
    simulate_grid, simulate_points, CovarianceModel, FieldSample, GridGeometry, PointMethod,
    SynthesisMethod,
};
pub use geometry::{
    attractor, content_1d, estimate_minkowski, is_lattice_type, moran_dimension, outer_content,
    AttractorMode, GridSet, Ifs, PointCloud, Similarity, TubeProfile,
};
pub use mc::{compare, estimate_tail, fit_log_slope, McTailEstimate, TailTarget};
pub use tail::{
    gaussian_density, gaussian_upper_tail, predict_log, predict_outer, predict_strong,
    predict_weak_band, Regime, TailPrediction,
};
