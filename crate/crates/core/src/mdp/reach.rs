use nalgebra::{DMatrix, DVector};

use super::policy::StationaryPolicy;
use super::world::{World, WorldError};

/// Synthesizes a deterministic stationary policy that, from every state,
/// visits some pair of `target` with probability 1.
///
/// Computes the almost-sure attractor as a greatest fixpoint, layers it by
/// positive-graph distance to the target, and lets each state play the
/// smallest-index action that keeps the play inside the attractor and has a
/// successor one layer closer. Target states play their smallest target action.
pub fn almost_sure_reach_policy(world: &World, target: &[(usize, usize)]) -> Result<StationaryPolicy, WorldError> {
    if target.is_empty() {
        return Err(WorldError::EmptyTarget);
    }
    for &(s, a) in target {
        world.check_state(s)?;
        world.check_action(a)?;
    }
    if !world.is_communicating() {
        return Err(WorldError::NotCommunicating);
    }
    let (n_s, n_a) = (world.n_states(), world.n_actions());
    let mut target_action: Vec<Option<usize>> = vec![None; n_s];
    for &(s, a) in target {
        target_action[s] = Some(target_action[s].map_or(a, |b: usize| b.min(a)));
    }

    let mut alive = vec![true; n_s];
    let (dist, choice) = loop {
        let (dist, choice) = layer(world, &alive, &target_action);
        let next: Vec<bool> = dist.iter().map(Option::is_some).collect();
        if next == alive {
            break (dist, choice);
        }
        alive = next;
    };
    if dist.iter().any(Option::is_none) {
        return Err(WorldError::NotCommunicating);
    }
    debug_assert!(choice.iter().all(|c| *c < n_a));
    Ok(StationaryPolicy::deterministic(&choice, n_a))
}

// Distance layers from the target states, using only actions whose
// successors all stay in `alive`.
fn layer(world: &World, alive: &[bool], target_action: &[Option<usize>]) -> (Vec<Option<usize>>, Vec<usize>) {
    let n_s = world.n_states();
    let mut dist = vec![None; n_s];
    let mut choice = vec![0; n_s];
    for s in 0..n_s {
        if let (true, Some(a)) = (alive[s], target_action[s]) {
            dist[s] = Some(0);
            choice[s] = a;
        }
    }
    let safe = |s: usize, a: usize| world.successors(s, a).all(|(t, _)| alive[t]);
    for d in 0.. {
        let mut grew = false;
        for s in 0..n_s {
            if dist[s].is_some() || !alive[s] {
                continue;
            }
            let pick =
                (0..world.n_actions()).find(|&a| safe(s, a) && world.successors(s, a).any(|(t, _)| dist[t] == Some(d)));
            if let Some(a) = pick {
                dist[s] = Some(d + 1);
                choice[s] = a;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    (dist, choice)
}

/// Probability, from each start state, that the chain induced by `policy`
/// eventually plays a pair in `target`. Solved as an absorbing linear system.
pub fn pair_hit_probabilities(world: &World, policy: &StationaryPolicy, target: &[(usize, usize)]) -> Vec<f64> {
    let n_s = world.n_states();
    let hit_mass = |s: usize| -> f64 { target.iter().filter(|&&(t, _)| t == s).map(|&(_, a)| policy.row(s)[a]).sum() };

    // States from which a target pair is possible under the policy.
    let mut live = vec![false; n_s];
    let mut changed = true;
    while changed {
        changed = false;
        for s in 0..n_s {
            if live[s] {
                continue;
            }
            let reaches = hit_mass(s) > 0.0
                || (0..world.n_actions()).any(|a| {
                    policy.row(s)[a] > 0.0 && !target.contains(&(s, a)) && world.successors(s, a).any(|(t, _)| live[t])
                });
            if reaches {
                live[s] = true;
                changed = true;
            }
        }
    }

    let index: Vec<Option<usize>> = {
        let mut next = 0;
        live.iter()
            .map(|&l| {
                l.then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let m = live.iter().filter(|&&l| l).count();
    if m == 0 {
        return vec![0.0; n_s];
    }
    let mut matrix = DMatrix::<f64>::identity(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    for s in 0..n_s {
        let Some(i) = index[s] else { continue };
        for a in 0..world.n_actions() {
            let pa = policy.row(s)[a];
            if pa == 0.0 {
                continue;
            }
            if target.contains(&(s, a)) {
                rhs[i] += pa;
                continue;
            }
            for (t, p) in world.successors(s, a) {
                if let Some(j) = index[t] {
                    matrix[(i, j)] -= pa * p;
                }
            }
        }
    }
    let solution = matrix.lu().solve(&rhs).unwrap_or_else(|| DVector::zeros(m));
    (0..n_s).map(|s| index[s].map_or(0.0, |i| solution[i].clamp(0.0, 1.0))).collect()
}
