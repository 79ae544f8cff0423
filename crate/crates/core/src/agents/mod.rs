//! Goal-conditioned agents answered as black boxes.

pub mod delta;
pub mod family;
pub mod probe;

use thiserror::Error;

use crate::goal::GoalError;
use crate::mdp::{FiniteHistory, ObservationHistory, WorldError};
use crate::prob::ProbError;

pub use delta::{choose_split, feasible_interval, is_feasible, AnswerStyle, DeltaConfig, DeltaMode};
pub use family::{
    branch_values, delta_agent, family_optimal_agent, random_walk_agent, Continuation, FamilyAgent, WitnessAgent,
};
pub use probe::{probe_first_action, ProbeStart, QueryRecord};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AgentError {
    #[error("this agent only answers extraction family goals")]
    UnsupportedGoal,
    #[error("this agent does not accept {0} histories")]
    UnsupportedHistory(&'static str),
    #[error("delta must lie in [0, 1), got {0}")]
    BadDelta(f64),
    #[error(transparent)]
    Goal(#[from] GoalError),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Prob(#[from] ProbError),
}

/// What an agent is shown: a state history, or an observation history in a
/// partially observable world.
#[derive(Debug, Clone, Copy)]
pub enum HistoryView<'a> {
    States(&'a FiniteHistory),
    Observations(&'a ObservationHistory),
}

impl HistoryView<'_> {
    pub fn len(&self) -> usize {
        match self {
            HistoryView::States(h) => h.len(),
            HistoryView::Observations(h) => h.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A goal-conditioned policy `π(h, ψ) ∈ Δ(A)`. Answers are exact
/// distributions and depend only on the arguments.
pub trait Agent: Send + Sync {
    fn n_actions(&self) -> usize;

    fn query(&self, goal: &crate::goal::Goal, history: HistoryView<'_>) -> Result<Vec<f64>, AgentError>;
}
