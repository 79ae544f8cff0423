use rand::Rng;

use super::chain::Controller;
use super::{Method, ProbError, SuccessProbability};
use crate::goal::{monitor_step, Goal, MonitorState, Verdict};
use crate::mdp::world::sample_index;
use crate::mdp::World;
use crate::rng::stream;

/// Two-sided 99% normal quantile.
const Z99: f64 = 2.575829303549;

/// `50 · |S| · (depth + 1)`.
pub fn default_horizon(world: &World, goal: &Goal) -> usize {
    50 * world.n_states() * (goal.depth() + 1)
}

/// Simulates `samples` runs of at most `horizon` steps. The true value lies
/// in `[value, value + pending]` up to sampling error.
pub fn monte_carlo_prob(
    world: &World,
    controller: &dyn Controller,
    goal: &Goal,
    s0: usize,
    horizon: usize,
    samples: usize,
    seed: u64,
) -> Result<SuccessProbability, ProbError> {
    world.check_state(s0)?;
    let disjuncts = goal.disjuncts()?;
    let mut rng = stream(seed);
    let (mut accepted, mut pending) = (0usize, 0usize);
    for _ in 0..samples {
        match simulate(world, controller, &disjuncts, s0, horizon, &mut rng) {
            Verdict::Accepted => accepted += 1,
            Verdict::Pending => pending += 1,
            Verdict::Rejected => {}
        }
    }
    let n = samples.max(1) as f64;
    let value = accepted as f64 / n;
    Ok(SuccessProbability {
        value,
        method: Method::MonteCarlo,
        half_width: Some(Z99 * (value * (1.0 - value) / n).sqrt()),
        pending: pending as f64 / n,
    })
}

fn simulate<R: Rng + ?Sized>(
    world: &World,
    controller: &dyn Controller,
    disjuncts: &[crate::goal::SequentialGoal],
    s0: usize,
    horizon: usize,
    rng: &mut R,
) -> Verdict {
    let mut monitors = vec![MonitorState::initial(); disjuncts.len()];
    let verdict = |monitors: &[MonitorState]| monitors.iter().map(|m| m.verdict).fold(Verdict::Rejected, Verdict::or);
    let (mut s, mut memory) = (s0, controller.initial_memory());
    for _ in 0..horizon {
        let current = verdict(&monitors);
        if current.is_final() {
            return current;
        }
        let branches = controller.branches(memory, s);
        let weights: Vec<f64> = branches.iter().map(|b| b.0).collect();
        let (_, a, next_memory) = branches[sample_index(&weights, rng)];
        for (m, d) in monitors.iter_mut().zip(disjuncts) {
            *m = monitor_step(d, *m, s, a);
        }
        s = sample_index(world.row(s, a), rng);
        memory = next_memory;
    }
    verdict(&monitors)
}
