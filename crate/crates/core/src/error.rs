use thiserror::Error;

pub type Result<T, E = GeomError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("grid size {0} is invalid: need an even count of at least 16 nodes")]
    InvalidGrid(usize),

    #[error("sample count {got} does not match grid size {expected}")]
    SampleCount { expected: usize, got: usize },

    #[error("grid mismatch: {left} vs {right} nodes")]
    GridMismatch { left: usize, right: usize },

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("semi-axes must satisfy a >= b > 0, got a = {a}, b = {b}")]
    InvalidSemiAxes { a: f64, b: f64 },

    #[error("convexity violation at node {index} (theta = {theta:.6}): h + h'' = {value:e}")]
    ConvexityViolation { index: usize, theta: f64, value: f64 },

    #[error("gauge is not centrally symmetric: max |h(t) - h(t + pi)| = {0:e}")]
    SymmetryViolation(f64),

    #[error("gauge support must be positive, got {0:e}")]
    NonPositiveGauge(f64),

    #[error("point ({x}, {y}) is not strictly inside the curve")]
    OriginOutside { x: f64, y: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("linear program failed: {0}")]
    Solver(String),

    #[error("degenerate annulus: curve is homothetic to the isoperimetrix")]
    DegenerateAnnulus,
}
