use std::collections::HashMap;

use crate::goal::{monitor_step, Goal, GoalError, MonitorState, SequentialGoal, Verdict};

/// A deterministic automaton over state-action pairs deciding a goal: the
/// product of the per-disjunct monitors, restricted to reachable tuples.
///
/// States [`ACCEPT`] and [`REJECT`] are absorbing sinks; every other state
/// is pending.
#[derive(Debug, Clone, PartialEq)]
pub struct GoalAutomaton {
    n_states: usize,
    n_actions: usize,
    initial: usize,
    delta: Vec<usize>,
}

pub const ACCEPT: usize = 0;
pub const REJECT: usize = 1;

impl GoalAutomaton {
    pub fn new(goal: &Goal, n_states: usize, n_actions: usize) -> Result<Self, GoalError> {
        Ok(Self::from_disjuncts(&goal.disjuncts()?, n_states, n_actions))
    }

    pub fn from_disjuncts(disjuncts: &[SequentialGoal], n_states: usize, n_actions: usize) -> Self {
        let pairs = n_states * n_actions;
        let mut index: HashMap<Vec<MonitorState>, usize> = HashMap::new();
        let mut tuples: Vec<Vec<MonitorState>> = Vec::new();
        let mut intern = |tuple: Vec<MonitorState>, tuples: &mut Vec<Vec<MonitorState>>| -> usize {
            if tuple.iter().any(|m| m.verdict == Verdict::Accepted) {
                return ACCEPT;
            }
            if tuple.iter().all(|m| m.verdict == Verdict::Rejected) {
                return REJECT;
            }
            *index.entry(tuple.clone()).or_insert_with(|| {
                tuples.push(tuple);
                tuples.len() + 1
            })
        };

        let initial = intern(vec![MonitorState::initial(); disjuncts.len()], &mut tuples);
        let mut delta = vec![ACCEPT; 2 * pairs];
        delta[pairs..].fill(REJECT);
        let mut q = 2;
        while q < tuples.len() + 2 {
            let current = tuples[q - 2].clone();
            for s in 0..n_states {
                for a in 0..n_actions {
                    let next: Vec<MonitorState> =
                        disjuncts.iter().zip(&current).map(|(d, &m)| monitor_step(d, m, s, a)).collect();
                    let id = intern(next, &mut tuples);
                    delta.push(id);
                }
            }
            q += 1;
        }
        Self { n_states, n_actions, initial, delta }
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Number of automaton states, sinks included.
    pub fn len(&self) -> usize {
        self.delta.len() / (self.n_states * self.n_actions)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self, q: usize, s: usize, a: usize) -> usize {
        self.delta[(q * self.n_states + s) * self.n_actions + a]
    }

    pub fn verdict(&self, q: usize) -> Verdict {
        match q {
            ACCEPT => Verdict::Accepted,
            REJECT => Verdict::Rejected,
            _ => Verdict::Pending,
        }
    }

    /// Runs the automaton over a sequence of pairs.
    pub fn run(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Verdict {
        let q = pairs.into_iter().fold(self.initial, |q, (s, a)| self.step(q, s, a));
        self.verdict(q)
    }
}
