//! Success probabilities in partially observable worlds.

use super::chain::{controller_success_prob, exact_success_prob, ObservationController};
use super::{ProbError, SuccessProbability};
use crate::goal::{monitor_step, Goal, MonitorState, SequentialGoal, Verdict};
use crate::mdp::{
    FiniteHistory, MemoryPolicy, ObservableWorld, ObservationHistory, ObservationMemoryPolicy, ObservationPolicy,
    Policy, World,
};

/// For a policy that never reads observations (its `state` argument is
/// ignored), the observation kernel cancels out and the value equals the
/// value on the underlying world.
pub fn pomdp_success_prob_obs_independent(
    world: &ObservableWorld,
    policy: &dyn MemoryPolicy,
    goal: &Goal,
    s0: usize,
) -> Result<SuccessProbability, ProbError> {
    exact_success_prob(world.base(), policy, goal, s0)
}

/// Exact value of a finite-memory observation-based policy, solved on the
/// product of state, policy memory and goal automaton with observations
/// summed out at every step.
pub fn pomdp_policy_success_prob(
    world: &ObservableWorld,
    policy: &dyn ObservationMemoryPolicy,
    goal: &Goal,
    s0: usize,
) -> Result<SuccessProbability, ProbError> {
    controller_success_prob(world.base(), &ObservationController { world, policy }, goal, s0)
}

/// Probability mass of histories up to a horizon: accepted within the
/// horizon, and still undecided at it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedProbability {
    pub accepted: f64,
    pub pending: f64,
}

/// Sums `Pr(h, h_O | π, s0)` over every joint state/observation history of
/// at most `horizon` steps, following the joint product formula literally.
pub fn joint_enumeration(
    world: &ObservableWorld,
    policy: &dyn ObservationPolicy,
    goal: &Goal,
    s0: usize,
    horizon: usize,
) -> Result<BoundedProbability, ProbError> {
    world.base().check_state(s0)?;
    let disjuncts = goal.disjuncts()?;
    let mut out = BoundedProbability { accepted: 0.0, pending: 0.0 };
    let monitors = vec![MonitorState::initial(); disjuncts.len()];
    for (o, &po) in world.obs_row(s0).iter().enumerate() {
        if po > 0.0 {
            joint_dfs(world, policy, &disjuncts, s0, ObservationHistory::start(o), &monitors, po, horizon, &mut out);
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn joint_dfs(
    world: &ObservableWorld,
    policy: &dyn ObservationPolicy,
    disjuncts: &[SequentialGoal],
    s: usize,
    h_obs: ObservationHistory,
    monitors: &[MonitorState],
    weight: f64,
    remaining: usize,
    out: &mut BoundedProbability,
) {
    if remaining == 0 {
        out.pending += weight;
        return;
    }
    for (a, pa) in policy.distribution(&h_obs).into_iter().enumerate() {
        if pa == 0.0 {
            continue;
        }
        let next: Vec<MonitorState> = disjuncts.iter().zip(monitors).map(|(d, &m)| monitor_step(d, m, s, a)).collect();
        match overall(&next) {
            Verdict::Accepted => out.accepted += weight * pa,
            Verdict::Rejected => {}
            Verdict::Pending => {
                for (t, pt) in world.base().successors(s, a) {
                    for (o, &po) in world.obs_row(t).iter().enumerate() {
                        if po == 0.0 {
                            continue;
                        }
                        let mut h = h_obs.clone();
                        h.push(a, o);
                        joint_dfs(world, policy, disjuncts, t, h, &next, weight * pa * pt * po, remaining - 1, out);
                    }
                }
            }
        }
    }
}

/// The fully observable counterpart of [`joint_enumeration`]: sums
/// `Pr(h | π, s0)` over state histories of at most `horizon` steps.
pub fn state_enumeration(
    world: &World,
    policy: &dyn Policy,
    goal: &Goal,
    s0: usize,
    horizon: usize,
) -> Result<BoundedProbability, ProbError> {
    world.check_state(s0)?;
    let disjuncts = goal.disjuncts()?;
    let mut out = BoundedProbability { accepted: 0.0, pending: 0.0 };
    let monitors = vec![MonitorState::initial(); disjuncts.len()];
    state_dfs(world, policy, &disjuncts, FiniteHistory::start(s0), &monitors, 1.0, horizon, &mut out);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn state_dfs(
    world: &World,
    policy: &dyn Policy,
    disjuncts: &[SequentialGoal],
    h: FiniteHistory,
    monitors: &[MonitorState],
    weight: f64,
    remaining: usize,
    out: &mut BoundedProbability,
) {
    if remaining == 0 {
        out.pending += weight;
        return;
    }
    let s = h.last_state();
    for (a, pa) in policy.distribution(&h).into_iter().enumerate() {
        if pa == 0.0 {
            continue;
        }
        let next: Vec<MonitorState> = disjuncts.iter().zip(monitors).map(|(d, &m)| monitor_step(d, m, s, a)).collect();
        match overall(&next) {
            Verdict::Accepted => out.accepted += weight * pa,
            Verdict::Rejected => {}
            Verdict::Pending => {
                for (t, pt) in world.successors(s, a) {
                    let mut h2 = h.clone();
                    h2.push(a, t);
                    state_dfs(world, policy, disjuncts, h2, &next, weight * pa * pt, remaining - 1, out);
                }
            }
        }
    }
}

fn overall(monitors: &[MonitorState]) -> Verdict {
    monitors.iter().map(|m| m.verdict).fold(Verdict::Rejected, Verdict::or)
}
