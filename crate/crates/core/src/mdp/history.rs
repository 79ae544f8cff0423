use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HistoryError {
    #[error("history needs one more state than actions (got {states} states, {actions} actions)")]
    Malformed { states: usize, actions: usize },
    #[error("histories do not meet at a shared state")]
    Disjoint,
}

/// A finite history `s0 a0 s1 a1 ... sk`, starting and ending with a state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteHistory {
    states: Vec<usize>,
    actions: Vec<usize>,
}

impl FiniteHistory {
    pub fn start(state: usize) -> Self {
        Self { states: vec![state], actions: Vec::new() }
    }

    pub fn new(states: Vec<usize>, actions: Vec<usize>) -> Result<Self, HistoryError> {
        if states.len() != actions.len() + 1 {
            return Err(HistoryError::Malformed { states: states.len(), actions: actions.len() });
        }
        Ok(Self { states, actions })
    }

    pub fn push(&mut self, action: usize, next: usize) {
        self.actions.push(action);
        self.states.push(next);
    }

    /// Number of actions taken.
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn first_state(&self) -> usize {
        self.states[0]
    }

    pub fn last_state(&self) -> usize {
        *self.states.last().expect("history has a state")
    }

    /// The completed state-action pairs `(s_i, a_i)`, `i < len`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.states.iter().copied().zip(self.actions.iter().copied())
    }

    /// `s0 a0 ... s_k`.
    pub fn prefix(&self, k: usize) -> Self {
        Self { states: self.states[..=k].to_vec(), actions: self.actions[..k].to_vec() }
    }

    /// Joins two histories where `other` starts at this history's last state.
    pub fn concat(&self, other: &Self) -> Result<Self, HistoryError> {
        if other.first_state() != self.last_state() {
            return Err(HistoryError::Disjoint);
        }
        let mut out = self.clone();
        out.actions.extend_from_slice(&other.actions);
        out.states.extend_from_slice(&other.states[1..]);
        Ok(out)
    }
}

/// A finite observation history `o0 a0 ... ok`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObservationHistory {
    observations: Vec<usize>,
    actions: Vec<usize>,
}

impl ObservationHistory {
    pub fn start(observation: usize) -> Self {
        Self { observations: vec![observation], actions: Vec::new() }
    }

    pub fn new(observations: Vec<usize>, actions: Vec<usize>) -> Result<Self, HistoryError> {
        if observations.len() != actions.len() + 1 {
            return Err(HistoryError::Malformed { states: observations.len(), actions: actions.len() });
        }
        Ok(Self { observations, actions })
    }

    pub fn push(&mut self, action: usize, observation: usize) {
        self.actions.push(action);
        self.observations.push(observation);
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn observations(&self) -> &[usize] {
        &self.observations
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn last_observation(&self) -> usize {
        *self.observations.last().expect("history has an observation")
    }
}
