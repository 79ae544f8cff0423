//! The goal language: syntax, families, and finite-prefix monitors.

pub mod ast;
pub mod family;
pub mod monitor;
pub mod parse;

pub use ast::{Atom, BasicGoal, Goal, GoalError, Operator, Predicate, SequentialGoal};
pub use family::{make_family, phi, words_with_weight, CountedFamily, FamilyKind, Triple, MATERIALIZE_LIMIT};
pub use monitor::{declarative_verdict, monitor_step, run_monitor, satisfies_prefix, MonitorState, Verdict};
pub use parse::{format_goal, format_sequential, parse_goal, Names};
