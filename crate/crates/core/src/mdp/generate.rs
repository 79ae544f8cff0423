use rand::seq::SliceRandom;
use rand::Rng;

use super::world::{World, WorldError};
use crate::rng::stream;

/// A random communicating world.
///
/// Rows are random sparse distributions; a random Hamiltonian cycle is then
/// forced into action 0 so the positive graph is strongly connected. Probabilities
/// are rounded to multiples of 1/1000 so they survive a text round trip exactly.
pub fn random_communicating_world(n_states: usize, n_actions: usize, seed: u64) -> Result<World, WorldError> {
    if n_states == 0 || n_actions == 0 {
        return Err(WorldError::Empty);
    }
    let mut rng = stream(seed);
    let mut cycle: Vec<usize> = (0..n_states).collect();
    cycle.shuffle(&mut rng);
    let mut successor = vec![0; n_states];
    for i in 0..n_states {
        successor[cycle[i]] = cycle[(i + 1) % n_states];
    }

    let mut kernel = Vec::with_capacity(n_states * n_actions * n_states);
    for &next in &successor {
        for a in 0..n_actions {
            let forced = (a == 0).then_some(next);
            kernel.extend(random_row(n_states, forced, &mut rng));
        }
    }
    World::new(n_states, n_actions, kernel)
}

// Integer weights in thousandths. Weights total at most 40, so every
// positive weight keeps at least one unit.
fn random_row<R: Rng + ?Sized>(n: usize, forced: Option<usize>, rng: &mut R) -> Vec<f64> {
    const TOTAL: u32 = 1000;
    let mut weights = vec![0u32; n];
    let support = rng.gen_range(1..=n.min(3));
    for _ in 0..support {
        weights[rng.gen_range(0..n)] += rng.gen_range(1..=10);
    }
    if let Some(t) = forced {
        weights[t] += rng.gen_range(1..=10);
    }
    let sum: u32 = weights.iter().sum();
    let mut units: Vec<u32> = weights.iter().map(|&w| w * TOTAL / sum).collect();
    let assigned: u32 = units.iter().sum();
    let largest = (0..n).max_by_key(|&i| (units[i], std::cmp::Reverse(i))).expect("row is non-empty");
    units[largest] += TOTAL - assigned;
    units.into_iter().map(|u| f64::from(u) / f64::from(TOTAL)).collect()
}
