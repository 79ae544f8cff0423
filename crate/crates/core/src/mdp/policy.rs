use thiserror::Error;

use super::history::{FiniteHistory, HistoryError};
use super::world::{World, ROW_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("distribution for {0} does not sum to 1")]
    NotDistribution(String),
    #[error("policy has {got} rows, expected {expected}")]
    Shape { expected: usize, got: usize },
    #[error(transparent)]
    History(#[from] HistoryError),
}

/// A general (history-dependent) policy `H_F -> Δ(A)`.
pub trait Policy {
    fn distribution(&self, history: &FiniteHistory) -> Vec<f64>;
}

/// A policy with finite memory. Memory `m_i` summarizes the pairs before
/// step `i`; the action at step `i` is drawn from
/// `action_distribution(m_i, s_i)` and `m_{i+1} = next_memory(m_i, s_i, a_i)`.
pub trait MemoryPolicy {
    fn memory_size(&self) -> usize;

    fn initial_memory(&self) -> usize {
        0
    }

    fn action_distribution(&self, memory: usize, state: usize) -> Vec<f64>;

    fn next_memory(&self, memory: usize, state: usize, action: usize) -> usize;
}

pub(crate) fn check_distribution(dist: &[f64], label: impl Fn() -> String) -> Result<(), PolicyError> {
    let sum: f64 = dist.iter().sum();
    if dist.iter().any(|p| !(0.0..=1.0).contains(p)) || (sum - 1.0).abs() > ROW_TOLERANCE {
        return Err(PolicyError::NotDistribution(label()));
    }
    Ok(())
}

/// A Markov policy `s -> Δ(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryPolicy {
    n_actions: usize,
    rows: Vec<Vec<f64>>,
}

impl StationaryPolicy {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, PolicyError> {
        let n_actions = rows.first().map_or(0, Vec::len);
        for (s, row) in rows.iter().enumerate() {
            if row.len() != n_actions {
                return Err(PolicyError::Shape { expected: n_actions, got: row.len() });
            }
            check_distribution(row, || format!("state {s}"))?;
        }
        Ok(Self { n_actions, rows })
    }

    /// Point mass on `actions[s]` in every state `s`.
    pub fn deterministic(actions: &[usize], n_actions: usize) -> Self {
        let rows = actions
            .iter()
            .map(|&a| {
                let mut row = vec![0.0; n_actions];
                row[a] = 1.0;
                row
            })
            .collect();
        Self { n_actions, rows }
    }

    pub fn uniform(n_states: usize, n_actions: usize) -> Self {
        Self { n_actions, rows: vec![vec![1.0 / n_actions as f64; n_actions]; n_states] }
    }

    pub fn n_states(&self) -> usize {
        self.rows.len()
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn row(&self, state: usize) -> &[f64] {
        &self.rows[state]
    }

    /// The action played in `state` if the row is a point mass.
    pub fn action(&self, state: usize) -> Option<usize> {
        self.rows[state].iter().position(|&p| p == 1.0)
    }

    pub fn is_deterministic(&self) -> bool {
        (0..self.rows.len()).all(|s| self.action(s).is_some())
    }
}

impl Policy for StationaryPolicy {
    fn distribution(&self, history: &FiniteHistory) -> Vec<f64> {
        self.rows[history.last_state()].clone()
    }
}

impl MemoryPolicy for StationaryPolicy {
    fn memory_size(&self) -> usize {
        1
    }

    fn action_distribution(&self, _memory: usize, state: usize) -> Vec<f64> {
        self.rows[state].clone()
    }

    fn next_memory(&self, _memory: usize, _state: usize, _action: usize) -> usize {
        0
    }
}

/// Plays `first` at the empty history, then follows `then`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstActionThen<P> {
    pub first: Vec<f64>,
    pub then: P,
}

impl<P> FirstActionThen<P> {
    pub fn new(first: Vec<f64>, then: P) -> Self {
        Self { first, then }
    }

    pub fn point(action: usize, n_actions: usize, then: P) -> Self {
        let mut first = vec![0.0; n_actions];
        first[action] = 1.0;
        Self { first, then }
    }
}

impl<P: MemoryPolicy> MemoryPolicy for FirstActionThen<P> {
    // memory 0 is the first step; memory 1 + m is the inner policy's m.
    fn memory_size(&self) -> usize {
        1 + self.then.memory_size()
    }

    fn action_distribution(&self, memory: usize, state: usize) -> Vec<f64> {
        if memory == 0 {
            self.first.clone()
        } else {
            self.then.action_distribution(memory - 1, state)
        }
    }

    fn next_memory(&self, memory: usize, state: usize, action: usize) -> usize {
        if memory == 0 {
            1 + self.then.initial_memory()
        } else {
            1 + self.then.next_memory(memory - 1, state, action)
        }
    }
}

impl Policy for FirstActionThen<StationaryPolicy> {
    fn distribution(&self, history: &FiniteHistory) -> Vec<f64> {
        if history.is_empty() {
            self.first.clone()
        } else {
            self.then.row(history.last_state()).to_vec()
        }
    }
}

/// A policy that never looks at states or observations: an optional first
/// distribution followed by a fixed one.
#[derive(Debug, Clone, PartialEq)]
pub struct ObliviousPolicy {
    pub first: Option<Vec<f64>>,
    pub rest: Vec<f64>,
}

impl ObliviousPolicy {
    pub fn uniform(n_actions: usize) -> Self {
        Self { first: None, rest: vec![1.0 / n_actions as f64; n_actions] }
    }

    /// First plays `action`, then uniform.
    pub fn first_then_uniform(action: usize, n_actions: usize) -> Self {
        let mut first = vec![0.0; n_actions];
        first[action] = 1.0;
        Self { first: Some(first), rest: vec![1.0 / n_actions as f64; n_actions] }
    }

    pub fn at_step(&self, step: usize) -> &[f64] {
        match (&self.first, step) {
            (Some(first), 0) => first,
            _ => &self.rest,
        }
    }
}

impl MemoryPolicy for ObliviousPolicy {
    fn memory_size(&self) -> usize {
        2
    }

    fn action_distribution(&self, memory: usize, _state: usize) -> Vec<f64> {
        self.at_step(memory).to_vec()
    }

    fn next_memory(&self, _memory: usize, _state: usize, _action: usize) -> usize {
        1
    }
}

impl Policy for ObliviousPolicy {
    fn distribution(&self, history: &FiniteHistory) -> Vec<f64> {
        self.at_step(history.len()).to_vec()
    }
}

/// Runs a [`MemoryPolicy`] as a history policy by replaying its memory.
pub struct ReplayMemory<'a, M: ?Sized>(pub &'a M);

impl<M: MemoryPolicy + ?Sized> Policy for ReplayMemory<'_, M> {
    fn distribution(&self, history: &FiniteHistory) -> Vec<f64> {
        let memory = history.pairs().fold(self.0.initial_memory(), |m, (s, a)| self.0.next_memory(m, s, a));
        self.0.action_distribution(memory, history.last_state())
    }
}

/// `Pr(h | π, start)`: the product of action and transition probabilities
/// along `h`, or 0 when `h` does not begin at `start`.
pub fn history_probability(world: &World, policy: &dyn Policy, history: &FiniteHistory, start: usize) -> f64 {
    if history.first_state() != start {
        return 0.0;
    }
    let states = history.states();
    let mut prob = 1.0;
    for (i, (s, a)) in history.pairs().enumerate() {
        let dist = policy.distribution(&history.prefix(i));
        prob *= dist[a] * world.prob(s, a, states[i + 1]);
        if prob == 0.0 {
            break;
        }
    }
    prob
}
