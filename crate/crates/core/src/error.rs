use thiserror::Error;

/// Errors produced anywhere in the envelope pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polytope has no halfspaces")]
    NoHalfspaces,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("halfspace {index} has a zero coefficient vector")]
    ZeroNormal { index: usize },

    #[error("non-finite input data: {what}")]
    NonFiniteInput { what: String },

    #[error("polytope is unbounded along coordinate {coordinate}")]
    UnboundedPolytope { coordinate: usize },

    #[error("polytope has empty interior")]
    EmptyInterior,

    #[error("ray direction is the zero vector")]
    ZeroDirection,

    #[error("ray does not meet the polytope")]
    RayMissesPolytope,

    #[error("hyperplane of facet {facet} passes through the origin")]
    HyperplaneThroughOrigin { facet: usize },

    #[error("point {point:?} lies outside the polytope")]
    PointOutsidePolytope { point: Vec<f64> },

    #[error("operation requires dimension 2, polytope has dimension {dim}")]
    DimensionNotSupported { dim: usize },

    #[error("sampling budget of {budget} draws exhausted with {accepted} of {requested} points accepted")]
    SamplingBudgetExceeded {
        requested: usize,
        accepted: usize,
        budget: usize,
    },

    #[error("function evaluated to {value} at {point:?}")]
    NonFiniteEvaluation { point: Vec<f64>, value: f64 },

    #[error("anchor {anchor:?} is not inside the polytope")]
    InvalidAnchor { anchor: Vec<f64> },

    #[error("point {point:?} lies outside the model domain")]
    PointOutsideDomain { point: Vec<f64> },

    #[error("model is not certified positively homogeneous")]
    NotCertifiedHomogeneous,

    #[error("gradient unavailable: {reason}")]
    GradientUnavailable { reason: String },

    #[error("gradient is undefined at the anchor point")]
    GradientAtAnchor,

    #[error("linear program is infeasible")]
    InfeasibleLp,

    #[error("simplex pivot {pivot:e} below threshold after rescaling")]
    NumericalBreakdown { pivot: f64 },

    #[error("unknown catalog function `{name}`")]
    UnknownFunction { name: String },

    #[error("function `{function}` has no parameter `{name}`")]
    UnknownParameter { function: String, name: String },

    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },

    #[error("invalid model descriptor: {reason}")]
    Descriptor { reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
