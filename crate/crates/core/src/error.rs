use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph is disconnected: vertex {0} is unreachable from vertex 0")]
    DisconnectedGraph(usize),
    #[error("edge ({0}, {1}) has non-positive weight {2}")]
    NonpositiveWeight(usize, usize, f64),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("boundary set is empty")]
    EmptyBoundary,
    #[error("boundary contains every vertex")]
    BoundaryIsEverything,
    #[error("vertex index {index} out of range for graph with {len} vertices")]
    VertexOutOfRange { index: usize, len: usize },
    #[error("edge ({0}, {1}) given twice with conflicting weights")]
    ConflictingEdge(usize, usize),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("function has length {got}, expected {expected}")]
    DomainMismatch { expected: usize, got: usize },
    #[error("p-norm requires p >= 1, got {0}")]
    InvalidP(f64),
    #[error("operation requires unit edge weights")]
    NonUnitWeights,
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("function does not vanish on the boundary")]
    BoundaryNotZero,
    #[error("function is outside the unit ball: Lipschitz constant {0}")]
    NotInUnitBall(f64),
    #[error("step size must be non-negative and finite, got {0}")]
    InvalidStep(f64),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("no convergence after {iterations} iterations (primal-dual gap {gap:e})")]
    NonconvergedAfterMaxIters { iterations: usize, gap: f64 },
    #[error("trajectory has no sample before extinction")]
    EmptyTrajectory,
    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("profile does not declare perimeter-bound parameters")]
    MissingBoundParams,
    #[error("degenerate profile: small-g coefficient I2(g)/g^3 = {0}")]
    DegenerateProfile(f64),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("basis index must be >= 1")]
    InvalidIndex,
    #[error("piecewise-linear functions live on different intervals")]
    IntervalMismatch,
    #[error("invalid piecewise-linear function: {0}")]
    InvalidPiecewise(String),
    #[error("closed set is empty")]
    EmptySet,
    #[error("ODE integration failed: {0}")]
    Integration(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
