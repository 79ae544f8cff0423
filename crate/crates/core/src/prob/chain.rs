//! Product of world, policy memory and goal automaton, solved as an
//! absorbing Markov chain.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use super::automaton::{GoalAutomaton, ACCEPT, REJECT};
use super::{Method, ProbError, SuccessProbability};
use crate::goal::Goal;
use crate::mdp::{MemoryPolicy, ObservableWorld, ObservationMemoryPolicy, World};

/// What a finite-memory controller does at `(memory, state)`: a list of
/// `(probability, action, next memory)` branches.
pub trait Controller {
    fn initial_memory(&self) -> usize;
    fn branches(&self, memory: usize, state: usize) -> Vec<(f64, usize, usize)>;
}

/// A state-based memory policy as a controller.
pub struct StateController<'a, P: ?Sized>(pub &'a P);

impl<P: MemoryPolicy + ?Sized> Controller for StateController<'_, P> {
    fn initial_memory(&self) -> usize {
        self.0.initial_memory()
    }

    fn branches(&self, memory: usize, state: usize) -> Vec<(f64, usize, usize)> {
        self.0
            .action_distribution(memory, state)
            .into_iter()
            .enumerate()
            .filter(|&(_, p)| p > 0.0)
            .map(|(a, p)| (p, a, self.0.next_memory(memory, state, a)))
            .collect()
    }
}

/// An observation-based memory policy as a controller: the observation is
/// drawn from `Ω(· | state)` and summed out.
pub struct ObservationController<'a, P: ?Sized> {
    pub world: &'a ObservableWorld,
    pub policy: &'a P,
}

impl<P: ObservationMemoryPolicy + ?Sized> Controller for ObservationController<'_, P> {
    fn initial_memory(&self) -> usize {
        self.policy.initial_memory()
    }

    fn branches(&self, memory: usize, state: usize) -> Vec<(f64, usize, usize)> {
        let mut merged: Vec<(f64, usize, usize)> = Vec::new();
        for (o, &po) in self.world.obs_row(state).iter().enumerate() {
            if po == 0.0 {
                continue;
            }
            for (a, pa) in self.policy.action_distribution(memory, o).into_iter().enumerate() {
                if pa == 0.0 {
                    continue;
                }
                let m = self.policy.next_memory(memory, o, a);
                match merged.iter_mut().find(|(_, b, n)| *b == a && *n == m) {
                    Some(entry) => entry.0 += po * pa,
                    None => merged.push((po * pa, a, m)),
                }
            }
        }
        merged
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Node {
    pub state: usize,
    pub memory: usize,
    pub automaton: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Target {
    Accept,
    Reject,
    Node(usize),
}

/// The reachable part of the product chain from a start node.
#[derive(Debug, Clone)]
pub struct ProductChain {
    nodes: Vec<Node>,
    edges: Vec<Vec<(Target, f64)>>,
}

impl ProductChain {
    pub fn build(world: &World, controller: &dyn Controller, automaton: &GoalAutomaton, s0: usize) -> Self {
        let start = Node { state: s0, memory: controller.initial_memory(), automaton: automaton.initial() };
        let mut chain = Self { nodes: Vec::new(), edges: Vec::new() };
        if automaton.initial() == ACCEPT || automaton.initial() == REJECT {
            return chain;
        }
        let mut index: HashMap<Node, usize> = HashMap::new();
        index.insert(start, 0);
        chain.nodes.push(start);
        let mut i = 0;
        while i < chain.nodes.len() {
            let node = chain.nodes[i];
            let mut out: Vec<(Target, f64)> = Vec::new();
            for (pa, a, m) in controller.branches(node.memory, node.state) {
                match automaton.step(node.automaton, node.state, a) {
                    ACCEPT => push(&mut out, Target::Accept, pa),
                    REJECT => push(&mut out, Target::Reject, pa),
                    q => {
                        for (t, pt) in world.successors(node.state, a) {
                            let next = Node { state: t, memory: m, automaton: q };
                            let j = *index.entry(next).or_insert_with(|| {
                                chain.nodes.push(next);
                                chain.nodes.len() - 1
                            });
                            push(&mut out, Target::Node(j), pa * pt);
                        }
                    }
                }
            }
            chain.edges.push(out);
            i += 1;
        }
        chain
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Absorption probability into ACCEPT from every node.
    pub fn acceptance(&self) -> Result<Vec<f64>, ProbError> {
        let n = self.nodes.len();
        // Nodes with a positive path to ACCEPT; the rest are worth zero.
        let mut live = vec![false; n];
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                if !live[i]
                    && self.edges[i].iter().any(|&(t, _)| match t {
                        Target::Accept => true,
                        Target::Node(j) => live[j],
                        Target::Reject => false,
                    })
                {
                    live[i] = true;
                    changed = true;
                }
            }
        }
        let mut compact = vec![usize::MAX; n];
        let mut m = 0;
        for i in 0..n {
            if live[i] {
                compact[i] = m;
                m += 1;
            }
        }
        if m == 0 {
            return Ok(vec![0.0; n]);
        }
        let mut matrix = DMatrix::<f64>::identity(m, m);
        let mut rhs = DVector::<f64>::zeros(m);
        for i in (0..n).filter(|&i| live[i]) {
            for &(t, p) in &self.edges[i] {
                match t {
                    Target::Accept => rhs[compact[i]] += p,
                    Target::Node(j) if live[j] => matrix[(compact[i], compact[j])] -= p,
                    _ => {}
                }
            }
        }
        let solution = matrix.lu().solve(&rhs).ok_or(ProbError::Singular)?;
        Ok((0..n).map(|i| if live[i] { solution[compact[i]].clamp(0.0, 1.0) } else { 0.0 }).collect())
    }
}

fn push(out: &mut Vec<(Target, f64)>, target: Target, p: f64) {
    match out.iter_mut().find(|(t, _)| *t == target) {
        Some(entry) => entry.1 += p,
        None => out.push((target, p)),
    }
}

/// `Pr(goal | π, s0)` for a finite-memory controller.
pub fn controller_success_prob(
    world: &World,
    controller: &dyn Controller,
    goal: &Goal,
    s0: usize,
) -> Result<SuccessProbability, ProbError> {
    world.check_state(s0)?;
    let automaton = GoalAutomaton::new(goal, world.n_states(), world.n_actions())?;
    let chain = ProductChain::build(world, controller, &automaton, s0);
    let value = if chain.is_empty() {
        if automaton.initial() == ACCEPT {
            1.0
        } else {
            0.0
        }
    } else {
        chain.acceptance()?[0]
    };
    Ok(SuccessProbability::exact(value, Method::LinearSolve))
}

/// `Pr(goal | π, s0)` for a finite-memory state-based policy.
pub fn exact_success_prob(
    world: &World,
    policy: &dyn MemoryPolicy,
    goal: &Goal,
    s0: usize,
) -> Result<SuccessProbability, ProbError> {
    controller_success_prob(world, &StateController(policy), goal, s0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goal::parse_goal;
    use crate::mdp::builtin::{make_chain_world, LEFT, RIGHT};
    use crate::mdp::StationaryPolicy;

    // Moves toward s0 from either side; stays put at s0 by pushing right.
    fn keep_center() -> StationaryPolicy {
        StationaryPolicy::deterministic(&[RIGHT, RIGHT, RIGHT, LEFT, LEFT], 2)
    }

    #[test]
    fn always_left_hits_wrap() {
        let w = make_chain_world(0.3, 0.6).unwrap();
        let goal = parse_goal("<EV[{(s-2,L), (s-2,R), (s2,L), (s2,R)}], NEXT[S=s0]>", &w).unwrap();
        let left = StationaryPolicy::deterministic(&[LEFT; 5], 2);
        let v = exact_success_prob(&w, &left, &goal, 2).unwrap();
        assert!((v.value - 0.6).abs() < 1e-12, "{}", v.value);
    }

    #[test]
    fn reaching_origin_is_certain() {
        let w = make_chain_world(0.3, 0.6).unwrap();
        let goal = parse_goal("<EV[S=s0]>", &w).unwrap();
        for s in 0..5 {
            let v = exact_success_prob(&w, &keep_center(), &goal, s).unwrap();
            assert!((v.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trivial_goals() {
        let w = make_chain_world(0.3, 0.6).unwrap();
        let v = exact_success_prob(&w, &keep_center(), &Goal::never(), 2).unwrap();
        assert_eq!(v.value, 0.0);
        let goal = parse_goal("<NOW[A=R]>", &w).unwrap();
        assert_eq!(exact_success_prob(&w, &keep_center(), &goal, 2).unwrap().value, 1.0);
        assert_eq!(exact_success_prob(&w, &keep_center(), &goal, 4).unwrap().value, 0.0);
    }
}
