use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    #[error("degenerate state: {0}")]
    DegenerateState(String),
    #[error("degenerate normalization: {0}")]
    DegenerateNormalization(String),
    #[error("amplitudes live on different frequency grids")]
    IncompatibleGrids,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("numeric and closed-form curves disagree at dz = {dz}: {numeric} vs {analytic} (tolerance {tol})")]
    ToleranceExceeded {
        dz: f64,
        numeric: f64,
        analytic: f64,
        tol: f64,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
