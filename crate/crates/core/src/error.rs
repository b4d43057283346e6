use thiserror::Error;

/// Failures raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("DivergentSum: {0}")]
    DivergentSum(String),
    #[error("NotRecurrent: law has positive mass at infinity ({0})")]
    NotRecurrent(String),
    #[error("CapExceeded: length {n} exceeds cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("NoBracket: {0}")]
    NoBracket(String),
    #[error("AtCriticalPoint: u = {u} is within tolerance of the critical point {u_c}")]
    AtCriticalPoint { u: f64, u_c: f64 },
    #[error("Unsupported: {0}")]
    Unsupported(String),
    #[error("InvalidLaw: {0}")]
    InvalidLaw(String),
    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Short name of the variant, as printed on the diagnostic stream.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DivergentSum(_) => "DivergentSum",
            Error::NotRecurrent(_) => "NotRecurrent",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::NoBracket(_) => "NoBracket",
            Error::AtCriticalPoint { .. } => "AtCriticalPoint",
            Error::Unsupported(_) => "Unsupported",
            Error::InvalidLaw(_) => "InvalidLaw",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
