//! Exact, optimal and sampled goal-success probabilities.

pub mod automaton;
pub mod binomial;
pub mod chain;
pub mod montecarlo;
pub mod optimal;
pub mod pomdp;

use thiserror::Error;

use crate::goal::GoalError;
use crate::mdp::WorldError;

pub use automaton::GoalAutomaton;
pub use binomial::{family_value, phi_value, pmf_all, rho_value, tail_gt, tail_le, tails};
pub use chain::{
    controller_success_prob, exact_success_prob, Controller, ObservationController, ProductChain, StateController,
};
pub use montecarlo::{default_horizon, monte_carlo_prob};
pub use optimal::{optimal_success_prob, OptimalResult, OptimalWitness};
pub use pomdp::{
    joint_enumeration, pomdp_policy_success_prob, pomdp_success_prob_obs_independent, state_enumeration,
    BoundedProbability,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbError {
    #[error(transparent)]
    Goal(#[from] GoalError),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error("product chain system is singular")]
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    LinearSolve,
    ValueIteration,
    MonteCarlo,
}

/// A success probability and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessProbability {
    pub value: f64,
    pub method: Method,
    /// 99% half-width for sampled values.
    pub half_width: Option<f64>,
    /// Mass still undecided at the simulation horizon.
    pub pending: f64,
}

impl SuccessProbability {
    pub fn exact(value: f64, method: Method) -> Self {
        Self { value: value.clamp(0.0, 1.0), method, half_width: None, pending: 0.0 }
    }
}
