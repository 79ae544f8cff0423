use rand::Rng;
use thiserror::Error;

use super::validate::{self, ValidationReport};

/// Largest row-sum defect a constructor will silently renormalize.
pub const ROW_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorldError {
    #[error("a world needs at least one state and one action")]
    Empty,
    #[error("kernel has {got} entries, expected {expected}")]
    Shape { expected: usize, got: usize },
    #[error("probability {value} in row {row} is outside [0, 1]")]
    OutOfRange { row: String, value: f64 },
    #[error("row {row} sums to {sum}")]
    RowSum { row: String, sum: f64 },
    #[error("unknown state {0}")]
    UnknownState(usize),
    #[error("unknown action {0}")]
    UnknownAction(usize),
    #[error("unknown observation {0}")]
    UnknownObservation(usize),
    #[error("name table has {got} names, expected {expected}")]
    NameCount { expected: usize, got: usize },
    #[error("duplicate or empty name {0:?}")]
    BadName(String),
    #[error("world is not communicating")]
    NotCommunicating,
    #[error("reachability target is empty")]
    EmptyTarget,
}

/// A finite controlled Markov decision process `(S, A, P)`.
///
/// States and actions are dense indices; the kernel is stored row-major as
/// `P(s' | s, a) = kernel[(s * |A| + a) * |S| + s']`.
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    n_states: usize,
    n_actions: usize,
    kernel: Vec<f64>,
    state_names: Vec<String>,
    action_names: Vec<String>,
}

impl World {
    /// Builds a world from a dense kernel. Rows whose sum is within
    /// [`ROW_TOLERANCE`] of one are renormalized; anything else is rejected.
    pub fn new(n_states: usize, n_actions: usize, mut kernel: Vec<f64>) -> Result<Self, WorldError> {
        if n_states == 0 || n_actions == 0 {
            return Err(WorldError::Empty);
        }
        let expected = n_states * n_actions * n_states;
        if kernel.len() != expected {
            return Err(WorldError::Shape { expected, got: kernel.len() });
        }
        for s in 0..n_states {
            for a in 0..n_actions {
                let start = (s * n_actions + a) * n_states;
                normalize_row(&mut kernel[start..start + n_states], || format!("({s}, {a})"))?;
            }
        }
        Ok(Self {
            n_states,
            n_actions,
            kernel,
            state_names: (0..n_states).map(|s| format!("s{s}")).collect(),
            action_names: (0..n_actions).map(|a| format!("a{a}")).collect(),
        })
    }

    pub fn from_fn(
        n_states: usize,
        n_actions: usize,
        f: impl Fn(usize, usize, usize) -> f64,
    ) -> Result<Self, WorldError> {
        let mut kernel = Vec::with_capacity(n_states * n_actions * n_states);
        for s in 0..n_states {
            for a in 0..n_actions {
                for t in 0..n_states {
                    kernel.push(f(s, a, t));
                }
            }
        }
        Self::new(n_states, n_actions, kernel)
    }

    pub fn with_names(mut self, states: Vec<String>, actions: Vec<String>) -> Result<Self, WorldError> {
        check_names(&states, self.n_states)?;
        check_names(&actions, self.n_actions)?;
        self.state_names = states;
        self.action_names = actions;
        Ok(self)
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    pub fn prob(&self, s: usize, a: usize, next: usize) -> f64 {
        self.kernel[(s * self.n_actions + a) * self.n_states + next]
    }

    pub fn row(&self, s: usize, a: usize) -> &[f64] {
        let start = (s * self.n_actions + a) * self.n_states;
        &self.kernel[start..start + self.n_states]
    }

    /// Successors of `(s, a)` with positive probability.
    pub fn successors(&self, s: usize, a: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.row(s, a).iter().copied().enumerate().filter(|&(_, p)| p > 0.0)
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn action_names(&self) -> &[String] {
        &self.action_names
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.state_names[s]
    }

    pub fn action_name(&self, a: usize) -> &str {
        &self.action_names[a]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.action_names.iter().position(|n| n == name)
    }

    pub fn check_state(&self, s: usize) -> Result<(), WorldError> {
        if s < self.n_states {
            Ok(())
        } else {
            Err(WorldError::UnknownState(s))
        }
    }

    pub fn check_action(&self, a: usize) -> Result<(), WorldError> {
        if a < self.n_actions {
            Ok(())
        } else {
            Err(WorldError::UnknownAction(a))
        }
    }

    /// Samples `s' ~ P(. | s, a)`.
    pub fn step<R: Rng + ?Sized>(&self, s: usize, a: usize, rng: &mut R) -> Result<usize, WorldError> {
        self.check_state(s)?;
        self.check_action(a)?;
        Ok(sample_index(self.row(s, a), rng))
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate_world(self)
    }

    /// The positive-probability graph is strongly connected.
    pub fn is_communicating(&self) -> bool {
        validate::positive_graph_strongly_connected(self.n_states, self.n_actions, &self.kernel)
    }
}

/// Draws an index from a probability vector. Falls back to the last index
/// with positive mass when rounding leaves the cumulative sum short of `u`.
pub fn sample_index<R: Rng + ?Sized>(dist: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in dist.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = i;
            if u < acc {
                return i;
            }
        }
    }
    last
}

pub(crate) fn normalize_row(row: &mut [f64], label: impl Fn() -> String) -> Result<(), WorldError> {
    let mut sum = 0.0;
    for &p in row.iter() {
        if !(0.0..=1.0).contains(&p) {
            return Err(WorldError::OutOfRange { row: label(), value: p });
        }
        sum += p;
    }
    if (sum - 1.0).abs() > ROW_TOLERANCE {
        return Err(WorldError::RowSum { row: label(), sum });
    }
    if (sum - 1.0).abs() > f64::EPSILON * row.len() as f64 {
        row.iter_mut().for_each(|p| *p /= sum);
    }
    Ok(())
}

pub(crate) fn check_names(names: &[String], expected: usize) -> Result<(), WorldError> {
    if names.len() != expected {
        return Err(WorldError::NameCount { expected, got: names.len() });
    }
    for (i, name) in names.iter().enumerate() {
        if name.is_empty() || name.chars().any(char::is_whitespace) || names[..i].contains(name) {
            return Err(WorldError::BadName(name.clone()));
        }
    }
    Ok(())
}
