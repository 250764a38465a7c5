use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The inputs are well formed but violate a precondition of the operation.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("frequency {frequency} is not on the grid (1/{period})Z")]
    OffGrid { frequency: f64, period: f64 },

    #[error("Nyquist violation: {samples} samples over period {period} cannot carry frequency {frequency}")]
    Nyquist {
        samples: usize,
        period: f64,
        frequency: f64,
    },

    #[error("spectral leakage {leakage:e} outside the declared support exceeds {tolerance:e}")]
    Leakage { leakage: f64, tolerance: f64 },

    #[error("effectively degenerate form: smallest eigenvalue {lambda_min:e}")]
    Degenerate { lambda_min: f64 },

    #[error("eigensolver residual {residual:e} exceeds {tolerance:e}")]
    Eigensolver { residual: f64, tolerance: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Degenerate { .. } | Error::Eigensolver { .. } | Error::Numerical(_)
        )
    }
}
