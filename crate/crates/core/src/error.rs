use thiserror::Error;

/// Errors raised by the geometric kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vectors are expressed in different form bases")]
    BasisMismatch,

    #[error("input vectors are linearly dependent (smallest singular value ratio {ratio:.3e})")]
    DependentVectors { ratio: f64 },

    #[error("spatial dimension n must be at least 2 (got {0})")]
    InvalidDimension(usize),

    #[error("matrix is not in O(2,n): form residual {residual:.3e} exceeds tolerance")]
    NotInGroup { residual: f64 },

    #[error("Cartan decomposition failed: {0}")]
    CartanFailure(String),

    #[error("poles are ambiguous: Cartan gap {gap:.3e} is too small")]
    AmbiguousPoles { gap: f64 },

    #[error("a branch index is required to lift a conformal point to the universal cover")]
    BranchRequired,

    #[error("point lies on the equator and belongs to the conformal boundary, not to AdS")]
    OnConformalBoundary,

    #[error("point set is not acausal")]
    NotAcausal,

    #[error("word enumeration exceeded the element budget of {cap}")]
    BudgetExceeded { cap: usize },

    #[error("no enumerated element reached the required Cartan gap")]
    EmptySample,

    #[error("no consistent acausal lift exists for this sample")]
    InconsistentLift,

    #[error("point is not inside the invisible domain")]
    NotInDomain,

    #[error("f-envelope membership and dual-cone membership disagree outside the mesh band at t = {t:.6}")]
    OracleDisagreement { t: f64 },

    #[error("the limit set fills the equator sphere: the conformal boundary is empty")]
    EmptyBoundary,

    #[error("every sampled ratio was degenerate")]
    DegenerateSample,

    #[error("plane is not causal")]
    NotCausal,

    #[error("plane is not totally isotropic")]
    NotTotallyIsotropic,

    #[error("ping-pong arcs overlap (half-width {half_width:.4} rad)")]
    PingPongFailure { half_width: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
