use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate direction")]
    DegenerateDirection,

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Adaptive quadrature ran out of its subdivision budget.
    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    QuadratureNotConverged { estimate: f64, error_bound: f64 },

    #[error("conditioning region must contain detector region")]
    RegionNotContained,

    #[error("conditioning on null event")]
    NullEvent,

    #[error("optimizer stuck: best |CHSH| {best} did not exceed {required}")]
    OptimizerStuck { best: f64, required: f64 },

    #[error("scenario too large for enumeration: {0}")]
    TooLarge(String),

    #[error("LP did not terminate within {0} pivots")]
    LpNotTerminated(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}
