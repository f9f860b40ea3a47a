use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("inconsistent rotation: {0}")]
    InconsistentRotation(String),
    #[error("walk is not closed")]
    NotClosed,
    #[error("no path between {0} and {1}")]
    Unreachable(usize, usize),
    #[error("rotation system is not planar: {0}")]
    NonPlanarRotation(String),
    #[error("uncrossing did not terminate: {0}")]
    NonTermination(String),
    #[error("primary paths of canonical pair ({0}, {1}) do not cross")]
    NoBend(usize, usize),
    #[error("iteration cap exceeded: {0}")]
    ConvergenceCapExceeded(String),
    #[error("constraint generation exceeded {0} rounds")]
    IterationCap(usize),
    #[error("weight LP is infeasible")]
    Infeasible(Box<crate::weights::FarkasCertificate>),
    #[error("terminal order mismatch: {0}")]
    OrderMismatch(String),
    #[error("negative triangle capacity {0}")]
    NegativeTriangleCapacity(String),
    #[error("instance spec infeasible: {0}")]
    SpecInfeasible(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_)
            | Error::Json(_)
            | Error::Io(_)
            | Error::SpecInfeasible(_)
            | Error::NegativeTriangleCapacity(_)
            | Error::NotClosed
            | Error::InconsistentRotation(_)
            | Error::Unreachable(..) => 2,
            _ => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "Input",
            Error::InconsistentRotation(_) => "InconsistentRotation",
            Error::NotClosed => "NotClosed",
            Error::Unreachable(..) => "Unreachable",
            Error::NonPlanarRotation(_) => "NonPlanarRotation",
            Error::NonTermination(_) => "NonTermination",
            Error::NoBend(..) => "NoBend",
            Error::ConvergenceCapExceeded(_) => "ConvergenceCapExceeded",
            Error::IterationCap(_) => "IterationCap",
            Error::Infeasible(_) => "Infeasible",
            Error::OrderMismatch(_) => "OrderMismatch",
            Error::NegativeTriangleCapacity(_) => "NegativeTriangleCapacity",
            Error::SpecInfeasible(_) => "SpecInfeasible",
            Error::Internal(_) => "Internal",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err($crate::error::Error::Internal(format!($($arg)*)));
        }
    };
}
pub(crate) use ensure;
