use thiserror::Error;

use northcott_lab::curve::CurveError;
use northcott_lab::dynamics::DynamicsError;
use northcott_lab::galois::GaloisError;
use northcott_lab::heights::HeightError;
use northcott_lab::nf::NfError;
use northcott_lab::northcott::NorthcottError;

/// Exit status 2 for bad invocations, 1 for computations that could not be completed.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<NfError> for CliError {
    fn from(e: NfError) -> Self {
        match e {
            NfError::Unsupported(_) | NfError::PrecisionExhausted { .. } => CliError::Failure(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::Nf(n) => n.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<HeightError> for CliError {
    fn from(e: HeightError) -> Self {
        match e {
            HeightError::Curve(c) => c.into(),
            HeightError::InvalidTolerance(_) => CliError::Usage(e.to_string()),
            HeightError::BudgetExhausted { .. } => CliError::Failure(e.to_string()),
        }
    }
}

impl From<GaloisError> for CliError {
    fn from(e: GaloisError) -> Self {
        match e {
            GaloisError::Curve(c) => c.into(),
            GaloisError::Nf(n) => n.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<NorthcottError> for CliError {
    fn from(e: NorthcottError) -> Self {
        match e {
            NorthcottError::Curve(c) => c.into(),
            NorthcottError::Nf(n) => n.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Curve(c) => c.into(),
            DynamicsError::Height(h) => h.into(),
            DynamicsError::Nf(n) => n.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}
