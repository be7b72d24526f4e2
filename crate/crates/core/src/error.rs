use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("local coordinate {0} outside [0, 1]")]
    CoordinateOutOfRange(f64),

    #[error("element width must be positive, got {0}")]
    NonPositiveWidth(f64),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("mesh needs at least one element")]
    EmptyMesh,

    #[error("element index {index} out of range 1..={count}")]
    ElementOutOfRange { index: usize, count: usize },

    #[error("point {x} outside domain [{left}, {right}]")]
    PointOutsideDomain { x: f64, left: f64, right: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entry ({row}, {col}) lies outside the band")]
    OutsideBand { row: usize, col: usize },

    /// 1-based index of the pivot that vanished.
    #[error("matrix is singular at pivot {index}")]
    SingularMatrix { index: usize },

    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),

    #[error("t_final / dt = {ratio} is not an integral step count")]
    NonIntegralStepCount { ratio: f64 },

    #[error("problem has no exact solution to measure errors against")]
    MissingExactSolution,

    #[error("invalid convergence data: {0}")]
    InvalidConvergenceData(String),
}
