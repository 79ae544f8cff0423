//! Worlds, histories, policies and reachability synthesis.

pub mod builtin;
pub mod generate;
pub mod history;
pub mod io;
pub mod observable;
pub mod policy;
pub mod reach;
pub mod validate;
pub mod world;

pub use history::{FiniteHistory, HistoryError, ObservationHistory};
pub use observable::{MarkovObservationPolicy, ObservableWorld, ObservationMemoryPolicy, ObservationPolicy};
pub use policy::{
    history_probability, FirstActionThen, MemoryPolicy, ObliviousPolicy, Policy, PolicyError, ReplayMemory,
    StationaryPolicy,
};
pub use reach::{almost_sure_reach_policy, pair_hit_probabilities};
pub use validate::{validate_world, RowDefect, RowRef, ValidationReport};
pub use world::{World, WorldError};
