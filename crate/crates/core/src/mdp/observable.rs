use rand::Rng;

use super::history::ObservationHistory;
use super::world::{check_names, normalize_row, sample_index, World, WorldError};

/// A partially observable world: a [`World`] plus an observation kernel
/// `Ω(o | s)` stored row-major by state.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableWorld {
    base: World,
    n_observations: usize,
    obs_kernel: Vec<f64>,
    observation_names: Vec<String>,
}

impl ObservableWorld {
    pub fn new(base: World, n_observations: usize, mut obs_kernel: Vec<f64>) -> Result<Self, WorldError> {
        if n_observations == 0 {
            return Err(WorldError::Empty);
        }
        let expected = base.n_states() * n_observations;
        if obs_kernel.len() != expected {
            return Err(WorldError::Shape { expected, got: obs_kernel.len() });
        }
        for s in 0..base.n_states() {
            normalize_row(&mut obs_kernel[s * n_observations..(s + 1) * n_observations], || format!("Ω(· | {s})"))?;
        }
        Ok(Self {
            base,
            n_observations,
            obs_kernel,
            observation_names: (0..n_observations).map(|o| format!("o{o}")).collect(),
        })
    }

    /// Every state observes itself.
    pub fn fully_observable(base: World) -> Self {
        let n = base.n_states();
        let obs_kernel = (0..n * n).map(|i| if i / n == i % n { 1.0 } else { 0.0 }).collect();
        let observation_names = base.state_names().to_vec();
        Self { base, n_observations: n, obs_kernel, observation_names }
    }

    pub fn with_observation_names(mut self, names: Vec<String>) -> Result<Self, WorldError> {
        check_names(&names, self.n_observations)?;
        self.observation_names = names;
        Ok(self)
    }

    pub fn base(&self) -> &World {
        &self.base
    }

    pub fn n_observations(&self) -> usize {
        self.n_observations
    }

    pub fn obs_kernel(&self) -> &[f64] {
        &self.obs_kernel
    }

    pub fn obs_prob(&self, s: usize, o: usize) -> f64 {
        self.obs_kernel[s * self.n_observations + o]
    }

    pub fn obs_row(&self, s: usize) -> &[f64] {
        &self.obs_kernel[s * self.n_observations..(s + 1) * self.n_observations]
    }

    pub fn observation_names(&self) -> &[String] {
        &self.observation_names
    }

    pub fn observation_name(&self, o: usize) -> &str {
        &self.observation_names[o]
    }

    pub fn observation_index(&self, name: &str) -> Option<usize> {
        self.observation_names.iter().position(|n| n == name)
    }

    /// Samples `o ~ Ω(· | s)`.
    pub fn observe<R: Rng + ?Sized>(&self, s: usize, rng: &mut R) -> Result<usize, WorldError> {
        self.base.check_state(s)?;
        Ok(sample_index(self.obs_row(s), rng))
    }

    /// Replaces the observation kernel, keeping the base world.
    pub fn with_obs_kernel(&self, n_observations: usize, obs_kernel: Vec<f64>) -> Result<Self, WorldError> {
        Self::new(self.base.clone(), n_observations, obs_kernel)
    }
}

/// An observation-based policy `H_{O,F} -> Δ(A)`.
pub trait ObservationPolicy {
    fn distribution(&self, history: &ObservationHistory) -> Vec<f64>;
}

/// An observation-based policy with finite memory over observations.
pub trait ObservationMemoryPolicy {
    fn memory_size(&self) -> usize;

    fn initial_memory(&self) -> usize {
        0
    }

    fn action_distribution(&self, memory: usize, observation: usize) -> Vec<f64>;

    fn next_memory(&self, memory: usize, observation: usize, action: usize) -> usize;
}

/// A Markov observation policy `o -> Δ(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovObservationPolicy {
    rows: Vec<Vec<f64>>,
}

impl MarkovObservationPolicy {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, super::policy::PolicyError> {
        let n_actions = rows.first().map_or(0, Vec::len);
        for (o, row) in rows.iter().enumerate() {
            if row.len() != n_actions {
                return Err(super::policy::PolicyError::Shape { expected: n_actions, got: row.len() });
            }
            super::policy::check_distribution(row, || format!("observation {o}"))?;
        }
        Ok(Self { rows })
    }

    /// Point mass on `actions[o]` for each observation `o`.
    pub fn deterministic(actions: &[usize], n_actions: usize) -> Self {
        let rows = actions
            .iter()
            .map(|&a| {
                let mut row = vec![0.0; n_actions];
                row[a] = 1.0;
                row
            })
            .collect();
        Self { rows }
    }

    pub fn uniform(n_observations: usize, n_actions: usize) -> Self {
        Self { rows: vec![vec![1.0 / n_actions as f64; n_actions]; n_observations] }
    }

    pub fn row(&self, observation: usize) -> &[f64] {
        &self.rows[observation]
    }
}

impl ObservationPolicy for MarkovObservationPolicy {
    fn distribution(&self, history: &ObservationHistory) -> Vec<f64> {
        self.rows[history.last_observation()].clone()
    }
}

impl ObservationMemoryPolicy for MarkovObservationPolicy {
    fn memory_size(&self) -> usize {
        1
    }

    fn action_distribution(&self, _memory: usize, observation: usize) -> Vec<f64> {
        self.rows[observation].clone()
    }

    fn next_memory(&self, _memory: usize, _observation: usize, _action: usize) -> usize {
        0
    }
}

impl ObservationPolicy for super::policy::ObliviousPolicy {
    fn distribution(&self, history: &ObservationHistory) -> Vec<f64> {
        self.at_step(history.len()).to_vec()
    }
}

impl ObservationMemoryPolicy for super::policy::ObliviousPolicy {
    fn memory_size(&self) -> usize {
        2
    }

    fn action_distribution(&self, memory: usize, _observation: usize) -> Vec<f64> {
        self.at_step(memory).to_vec()
    }

    fn next_memory(&self, _memory: usize, _observation: usize, _action: usize) -> usize {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn two_state() -> World {
        World::new(2, 1, vec![0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn rejects_bad_observation_rows() {
        assert!(ObservableWorld::new(two_state(), 2, vec![0.5, 0.4, 1.0, 0.0]).is_err());
        assert!(ObservableWorld::new(two_state(), 2, vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn identity_observation_reveals_state() {
        let w = ObservableWorld::fully_observable(two_state());
        let mut rng = stream(1);
        for _ in 0..100 {
            assert_eq!(w.observe(1, &mut rng).unwrap(), 1);
        }
        assert_eq!(w.observe(2, &mut rng), Err(WorldError::UnknownState(2)));
    }
}
