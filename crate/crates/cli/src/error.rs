use thiserror::Error;
use worldlens_core::extraction::ExtractionError;
use worldlens_core::mdp::io::ParseError;
use worldlens_core::{AgentError, GoalError, WorldError};

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Goal(#[from] GoalError),
    #[error("invalid world:\n{0}")]
    Invalid(String),
    #[error("precondition not met: {0}")]
    Refused(String),
    #[error(transparent)]
    Extraction(ExtractionError),
    #[error("{count} run(s) exceeded their error bound")]
    BoundViolation { count: usize },
    #[error("thread pool: {0}")]
    Pool(String),
}

impl From<ExtractionError> for HarnessError {
    fn from(e: ExtractionError) -> Self {
        match e {
            ExtractionError::DeltaTooLarge(_)
            | ExtractionError::BadDelta(_)
            | ExtractionError::TooFewVisits { .. }
            | ExtractionError::BadMarkers => HarnessError::Refused(e.to_string()),
            ExtractionError::Agent(AgentError::BadDelta(_)) => HarnessError::Refused(e.to_string()),
            other => HarnessError::Extraction(other),
        }
    }
}

impl From<AgentError> for HarnessError {
    fn from(e: AgentError) -> Self {
        ExtractionError::Agent(e).into()
    }
}

impl HarnessError {
    /// 1 validation failure, 2 precondition refusal, 3 bound violation.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Refused(_) => 2,
            HarnessError::BoundViolation { .. } => 3,
            _ => 1,
        }
    }
}
