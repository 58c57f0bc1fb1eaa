use thiserror::Error;

/// Errors raised by graph construction, distances, solvers and generators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph is disconnected: node {from} cannot reach node {to}")]
    DisconnectedGraph { from: usize, to: usize },
    #[error("degenerate matrix: {0}")]
    DegenerateMatrix(&'static str),
    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),
    #[error("curve must contain at least one sample")]
    EmptyCurve,
    #[error("histograms are defined on different grids")]
    GridMismatch,
    #[error("invalid histogram: {0}")]
    InvalidHistogram(String),
    #[error("attribute bundles do not have the expected layout: {0}")]
    BundleMismatch(String),
    #[error("set distance needs two nonempty sets")]
    EmptySet,
    #[error("k = {k} exceeds the number of nodes {n}")]
    KTooLarge { k: usize, n: usize },
    #[error("invalid initial centers: {0}")]
    InvalidCenters(String),
    #[error("target distance must be positive, got {0}")]
    BadDelta(f64),
    #[error("block matrix does not induce a connected target graph")]
    DisconnectedTarget,
    #[error("initial plan is infeasible: {0}")]
    InfeasibleInit(String),
    #[error("solver report has no outer-iteration trace")]
    MissingTrace,
    #[error("points have inconsistent dimensions")]
    DimensionMismatch,
    #[error("could not sample a connected graph after {0} attempts")]
    DisconnectedSample(usize),
    #[error("perturbation level must be in 1..=5, got {0}")]
    BadLevel(u8),
    #[error("partitions have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("method requires node attributes")]
    AttributesRequired,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Variant name, for machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DisconnectedGraph { .. } => "DisconnectedGraph",
            Error::DegenerateMatrix(_) => "DegenerateMatrix",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::EmptyGraph => "EmptyGraph",
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::InvalidMatrix(_) => "InvalidMatrix",
            Error::EmptyCurve => "EmptyCurve",
            Error::GridMismatch => "GridMismatch",
            Error::InvalidHistogram(_) => "InvalidHistogram",
            Error::BundleMismatch(_) => "BundleMismatch",
            Error::EmptySet => "EmptySet",
            Error::KTooLarge { .. } => "KTooLarge",
            Error::InvalidCenters(_) => "InvalidCenters",
            Error::BadDelta(_) => "BadDelta",
            Error::DisconnectedTarget => "DisconnectedTarget",
            Error::InfeasibleInit(_) => "InfeasibleInit",
            Error::MissingTrace => "MissingTrace",
            Error::DimensionMismatch => "DimensionMismatch",
            Error::DisconnectedSample(_) => "DisconnectedSample",
            Error::BadLevel(_) => "BadLevel",
            Error::SizeMismatch(..) => "SizeMismatch",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::AttributesRequired => "AttributesRequired",
            Error::Io(_) => "IoError",
            Error::Json(_) => "JsonError",
        }
    }
}
