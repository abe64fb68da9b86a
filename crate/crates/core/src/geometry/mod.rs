//! Fractal and tube geometry: iterated function systems, attractor point
//! clouds, grid rasterization with exact Euclidean distance fields, tube
//! volumes, and Minkowski dimension/content estimation.

mod grid;
mod ifs;
mod tube;

pub use grid::{CloudSource, GridSet, PointCloud};
pub use ifs::{
    attractor, content_1d, is_lattice_type, moran_dimension, AttractorMode, AxisBox, BoxSpec,
    Content1d, Ifs, IfsFile, IfsMapSpec, Similarity, DEFAULT_LATTICE_TOLERANCE,
};
pub use tube::{
    default_epsilon_ladder, estimate_minkowski, outer_content, MinkowskiFit, TubeProfile,
};

pub(crate) use grid::euclidean_distance_cells;

/// Errors from geometric construction and estimation.
#[derive(Debug, thiserror::Error)]
pub enum GeometryError {
    #[error("contraction ratio {0} is outside (0, 1)")]
    NonContractive(f64),
    #[error("need at least two maps/ratios, got {0}")]
    TooFewMaps(usize),
    #[error("orthogonal part deviates from orthogonality by {0:.3e} (tolerance 1e-12)")]
    NotOrthogonal(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("open set hint rejected: {0}")]
    OpenSetViolation(String),
    #[error("dimension {0} is outside (0, 1); the 1-D content formula degenerates")]
    DimensionOutOfRange(f64),
    #[error("Moran residual |Σ cᵢᵈ − 1| = {0:.3e} exceeds tolerance at the supplied dimension")]
    MoranMismatch(f64),
    #[error("gap lengths must be positive, got {0}")]
    NonPositiveGap(f64),
    #[error("at least one gap length is required")]
    NoGaps,
    #[error("deterministic iteration needs {needed} points, exceeding the budget of {budget}")]
    ExplosionGuard { needed: u128, budget: usize },
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("point cloud contains a non-finite coordinate")]
    NonFiniteCoordinate,
    #[error("coordinate buffer length {len} is not a multiple of the dimension {dim}")]
    RaggedCoordinates { len: usize, dim: usize },
    #[error("resolution {resolution} too coarse for a set of diameter {diameter} (need ≤ diameter/8)")]
    ResolutionTooCoarse { resolution: f64, diameter: f64 },
    #[error("no cell of the grid is occupied")]
    EmptyGrid,
    #[error("epsilon {epsilon} is below twice the grid resolution {resolution}")]
    EpsilonBelowResolution { epsilon: f64, resolution: f64 },
    #[error("distance field has not been computed for this grid")]
    MissingDistanceField,
    #[error("tube ladder is degenerate: all epsilons are equal")]
    DegenerateLadder,
    #[error("need at least {needed} ladder points, got {got}")]
    LadderTooShort { needed: usize, got: usize },
    #[error("occupied set has no interior cells; outer Minkowski content is undefined for a null-volume cloud")]
    NoInterior,
    #[error("invalid tube profile: {0}")]
    InvalidProfile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Parse(#[from] serde_json::Error),
}
