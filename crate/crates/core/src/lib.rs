//! Extracting a world model from goal-conditioned agents.
//!
//! A controlled Markov process is queried only through an agent's answers to
//! goals built from binomial families; the transition kernel is recovered
//! with guaranteed error bounds.

pub mod agents;
pub mod extraction;
pub mod goal;
pub mod mdp;
pub mod prob;
pub mod rng;

pub use agents::{
    delta_agent, family_optimal_agent, probe_first_action, random_walk_agent, Agent, AgentError, AnswerStyle,
    DeltaConfig, DeltaMode, FamilyAgent, HistoryView, ProbeStart, QueryRecord, WitnessAgent,
};
pub use extraction::{extract, reconstruct_world, Branch, Estimate, ExtractionError, KernelEstimate, Method, Probe};
pub use goal::{
    make_family, parse_goal, BasicGoal, CountedFamily, FamilyKind, Goal, GoalError, SequentialGoal, Triple,
};
pub use mdp::{FiniteHistory, ObservableWorld, ObservationHistory, Policy, StationaryPolicy, World, WorldError};
pub use prob::{exact_success_prob, optimal_success_prob, ProbError, SuccessProbability};
