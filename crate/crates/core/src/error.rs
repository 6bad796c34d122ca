use thiserror::Error;

/// Everything that can go wrong while building, transforming or evolving a state.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid resolution: {0}")]
    GridResolution(String),
    #[error("edge leakage: |psi| reaches {ratio:.3e} of its maximum in the outer band (limit 1e-6)")]
    Leakage { ratio: f64 },
    #[error("states live on different grids")]
    GridMismatch,
    #[error("invalid mixture weights: {0}")]
    Weight(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("normalization {value} deviates from 1 by more than {tolerance:e}")]
    Normalization { value: f64, tolerance: f64 },
    #[error("imaginary residue {residue:.3e} exceeds {limit:.3e}")]
    Reality { residue: f64, limit: f64 },
    #[error("field support leaves the grid: {0}")]
    Support(String),
    #[error("covariance is not positive semidefinite: {0}")]
    Psd(String),
    #[error("smoothing kernel too wide: {0}")]
    KernelTooWide(String),
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("time step {dt} violates the stability bound {limit}")]
    Stability { dt: f64, limit: f64 },
    #[error("time step {dt} exceeds {limit}")]
    StepSize { dt: f64, limit: f64 },
    #[error("bisection bracket invalid: {0}")]
    Bracket(String),
    #[error("field still negative at t_max = {t_max} (relative floor {relative_floor:.3e})")]
    NeverPositive { t_max: f64, relative_floor: f64 },
    #[error("malformed field file: {0}")]
    Format(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for violated numerical post-conditions, as opposed to rejected inputs.
    pub fn is_numerical_contract(&self) -> bool {
        matches!(
            self,
            Error::Normalization { .. }
                | Error::Reality { .. }
                | Error::NeverPositive { .. }
                | Error::Bracket(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
