//! Maximal success probability over all policies.

use std::collections::HashMap;

use super::automaton::{GoalAutomaton, ACCEPT, REJECT};
use super::chain::exact_success_prob;
use super::{Method, ProbError, SuccessProbability};
use crate::goal::Goal;
use crate::mdp::{MemoryPolicy, World};

const CONVERGED: f64 = 1e-12;
const SNAP: f64 = 1e-9;
const MAX_SWEEPS: usize = 1_000_000;

/// A deterministic policy whose memory is the goal automaton's state.
#[derive(Debug, Clone)]
pub struct OptimalWitness {
    automaton: GoalAutomaton,
    n_states: usize,
    n_actions: usize,
    /// `actions[q * |S| + s]`.
    actions: Vec<usize>,
}

impl OptimalWitness {
    pub fn action(&self, automaton_state: usize, state: usize) -> usize {
        self.actions[automaton_state * self.n_states + state]
    }

    pub fn automaton(&self) -> &GoalAutomaton {
        &self.automaton
    }
}

impl MemoryPolicy for OptimalWitness {
    fn memory_size(&self) -> usize {
        self.automaton.len()
    }

    fn initial_memory(&self) -> usize {
        self.automaton.initial()
    }

    fn action_distribution(&self, memory: usize, state: usize) -> Vec<f64> {
        let mut dist = vec![0.0; self.n_actions];
        dist[self.action(memory, state)] = 1.0;
        dist
    }

    fn next_memory(&self, memory: usize, state: usize, action: usize) -> usize {
        self.automaton.step(memory, state, action)
    }
}

#[derive(Debug, Clone)]
pub struct OptimalResult {
    /// Value of the witness, solved exactly.
    pub value: SuccessProbability,
    /// The value-iteration estimate before certification.
    pub iterate: f64,
    pub sweeps: usize,
    pub witness: OptimalWitness,
}

/// Outgoing edges of one (node, action): `Err(verdict sink)` or `Ok((node, p))` pairs.
type Successors = Result<Vec<(usize, f64)>, usize>;

/// `max_π Pr(goal | π, s0)` by value iteration on `(state, automaton state)`,
/// followed by exact evaluation of the greedy witness.
pub fn optimal_success_prob(world: &World, goal: &Goal, s0: usize) -> Result<OptimalResult, ProbError> {
    world.check_state(s0)?;
    let (n_s, n_a) = (world.n_states(), world.n_actions());
    let automaton = GoalAutomaton::new(goal, n_s, n_a)?;

    // Reachable (state, automaton) nodes under any action.
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    // succ[node][a] = Err(verdict sink) or Ok(list of (node, p)).
    let mut succ: Vec<Vec<Successors>> = Vec::new();
    if automaton.initial() != ACCEPT && automaton.initial() != REJECT {
        index.insert((s0, automaton.initial()), 0);
        nodes.push((s0, automaton.initial()));
    }
    let mut i = 0;
    while i < nodes.len() {
        let (s, q) = nodes[i];
        let mut row = Vec::with_capacity(n_a);
        for a in 0..n_a {
            let q2 = automaton.step(q, s, a);
            if q2 == ACCEPT || q2 == REJECT {
                row.push(Err(q2));
                continue;
            }
            let list = world
                .successors(s, a)
                .map(|(t, p)| {
                    let j = *index.entry((t, q2)).or_insert_with(|| {
                        nodes.push((t, q2));
                        nodes.len() - 1
                    });
                    (j, p)
                })
                .collect();
            row.push(Ok(list));
        }
        succ.push(row);
        i += 1;
    }

    let q_value = |values: &[f64], node: usize, a: usize| -> f64 {
        match &succ[node][a] {
            Err(ACCEPT) => 1.0,
            Err(_) => 0.0,
            Ok(list) => list.iter().map(|&(j, p)| p * values[j]).sum(),
        }
    };

    let mut values = vec![0.0; nodes.len()];
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut change: f64 = 0.0;
        for node in 0..nodes.len() {
            let best = (0..n_a).map(|a| q_value(&values, node, a)).fold(0.0, f64::max);
            change = change.max((best - values[node]).abs());
            values[node] = best;
        }
        if change < CONVERGED {
            break;
        }
    }
    for v in &mut values {
        if *v < SNAP {
            *v = 0.0;
        } else if *v > 1.0 - SNAP {
            *v = 1.0;
        }
    }

    // Among near-optimal actions, prefer those closest to ACCEPT.
    let optimal = |node: usize, a: usize| q_value(&values, node, a) >= values[node] - SNAP;
    let mut rank = vec![usize::MAX; nodes.len()];
    let mut choice = vec![0; nodes.len()];
    let mut changed = true;
    while changed {
        changed = false;
        for node in 0..nodes.len() {
            if values[node] == 0.0 {
                continue;
            }
            for a in (0..n_a).filter(|&a| optimal(node, a)) {
                let r = match &succ[node][a] {
                    Err(ACCEPT) => 0,
                    Err(_) => continue,
                    Ok(list) => match list.iter().map(|&(j, _)| rank[j]).min() {
                        Some(r) if r != usize::MAX => r + 1,
                        _ => continue,
                    },
                };
                if r < rank[node] {
                    rank[node] = r;
                    choice[node] = a;
                    changed = true;
                }
            }
        }
    }

    let mut actions = vec![0; automaton.len() * n_s];
    for (node, &(s, q)) in nodes.iter().enumerate() {
        actions[q * n_s + s] = choice[node];
    }
    let iterate = values.first().copied().unwrap_or(if automaton.initial() == ACCEPT { 1.0 } else { 0.0 });
    let witness = OptimalWitness { automaton, n_states: n_s, n_actions: n_a, actions };
    let exact = exact_success_prob(world, &witness, goal, s0)?;
    Ok(OptimalResult {
        value: SuccessProbability::exact(exact.value, Method::ValueIteration),
        iterate,
        sweeps,
        witness,
    })
}
