//! Whole-kernel reconstruction, one estimate per transition.

use std::collections::BTreeMap;

use super::{extract, Estimate, ExtractionError, Method, Probe};
use crate::agents::{Agent, ProbeStart};
use crate::goal::Triple;
use crate::mdp::{World, WorldError};

#[derive(Debug, Clone, PartialEq)]
pub struct KernelEstimate {
    n_states: usize,
    n_actions: usize,
    estimates: BTreeMap<Triple, Estimate>,
    normalized: Option<Vec<f64>>,
}

impl KernelEstimate {
    pub fn from_estimates(
        n_states: usize,
        n_actions: usize,
        estimates: impl IntoIterator<Item = (Triple, Estimate)>,
    ) -> Self {
        Self { n_states, n_actions, estimates: estimates.into_iter().collect(), normalized: None }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn get(&self, s: usize, a: usize, t: usize) -> Option<&Estimate> {
        self.estimates.get(&Triple::new(s, a, t))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Triple, &Estimate)> {
        self.estimates.iter()
    }

    pub fn len(&self) -> usize {
        self.estimates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.estimates.is_empty()
    }

    /// Raw estimates as a dense kernel; missing triples are zero.
    pub fn raw_kernel(&self) -> Vec<f64> {
        let n_s = self.n_states;
        let mut kernel = vec![0.0; n_s * self.n_actions * n_s];
        for (t, e) in &self.estimates {
            kernel[(t.state * self.n_actions + t.action) * n_s + t.next] = e.p_hat;
        }
        kernel
    }

    /// Computes the normalized copy: each row clipped and rescaled onto the simplex.
    pub fn normalize(&mut self) -> &[f64] {
        let n_s = self.n_states;
        let mut kernel = self.raw_kernel();
        for row in kernel.chunks_mut(n_s.max(1)) {
            let projected = project_to_simplex(row);
            row.copy_from_slice(&projected);
        }
        self.normalized.insert(kernel)
    }

    pub fn normalized(&self) -> Option<&[f64]> {
        self.normalized.as_deref()
    }

    /// The normalized copy as a world.
    pub fn to_world(&mut self) -> Result<World, WorldError> {
        let kernel = match &self.normalized {
            Some(k) => k.clone(),
            None => self.normalize().to_vec(),
        };
        World::new(self.n_states, self.n_actions, kernel)
    }
}

/// Maps a row onto the simplex: negatives clipped, then rescaled to sum
/// to 1; an all-zero row becomes uniform.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let clipped: Vec<f64> = v.iter().map(|&x| x.max(0.0)).collect();
    let sum: f64 = clipped.iter().sum();
    if sum == 0.0 {
        return vec![1.0 / v.len() as f64; v.len()];
    }
    clipped.iter().map(|x| x / sum).collect()
}

/// Extracts every `P(t | s, a)` with `method`, markers `(0, 1)` and the
/// start chosen by `start(s)`.
pub fn reconstruct_world(
    agent: &dyn Agent,
    n_states: usize,
    method: Method,
    n: usize,
    delta: f64,
    start: &dyn Fn(usize) -> ProbeStart,
) -> Result<KernelEstimate, ExtractionError> {
    let n_actions = agent.n_actions();
    let mut estimates = Vec::with_capacity(n_states * n_actions * n_states);
    for s in 0..n_states {
        for a in 0..n_actions {
            for t in 0..n_states {
                let triple = Triple::new(s, a, t);
                let probe = Probe::new(triple).with_start(start(s));
                estimates.push((triple, extract(agent, &probe, method, n, delta)?));
            }
        }
    }
    Ok(KernelEstimate::from_estimates(n_states, n_actions, estimates))
}
