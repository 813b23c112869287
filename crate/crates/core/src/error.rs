use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("degenerate noise: |b*sigma| must be positive (alpha={alpha}, b={b}, sigma={sigma})")]
    DegenerateNoise { alpha: f64, b: f64, sigma: f64 },

    #[error("root not bracketed: f({lo})={f_lo}, f({hi})={f_hi}")]
    BracketFailure {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("state left the representable range: {0}")]
    NonFiniteState(String),

    #[error("singular discretization: {0}")]
    SingularDiscretization(String),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable tag used in sweep output and logs.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::NonConvergence(_) => "NonConvergence",
            Error::DegenerateNoise { .. } => "DegenerateNoise",
            Error::BracketFailure { .. } => "BracketFailure",
            Error::NonFiniteState(_) => "NonFiniteState",
            Error::SingularDiscretization(_) => "SingularDiscretization",
            Error::Io(_) => "IoFailure",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
