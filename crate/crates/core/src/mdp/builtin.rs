//! The small worlds used throughout the tests and examples.

use super::observable::ObservableWorld;
use super::world::{World, WorldError};

pub const CHAIN_STATES: [&str; 5] = ["s-2", "s-1", "s0", "s1", "s2"];
pub const LEFT: usize = 0;
pub const RIGHT: usize = 1;
/// Index of `s0` in the chain world.
pub const ORIGIN: usize = 2;

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Five states `s-2 … s2` on a line with actions `L`, `R`. Each move
/// succeeds with `p_L` / `p_R` and otherwise stays put; `L` at `s-2` and
/// `R` at `s2` wrap to `s0`.
pub fn make_chain_world(p_r: f64, p_l: f64) -> Result<World, WorldError> {
    for p in [p_r, p_l] {
        if !(0.0..=1.0).contains(&p) {
            return Err(WorldError::OutOfRange { row: "chain parameter".into(), value: p });
        }
    }
    let mut kernel = vec![0.0; 5 * 2 * 5];
    for s in 0..5 {
        let left = if s == 0 { ORIGIN } else { s - 1 };
        let right = if s == 4 { ORIGIN } else { s + 1 };
        for (a, target, p) in [(LEFT, left, p_l), (RIGHT, right, p_r)] {
            let row = &mut kernel[(s * 2 + a) * 5..(s * 2 + a + 1) * 5];
            row[target] += p;
            row[s] += 1.0 - p;
        }
    }
    World::new(5, 2, kernel)?.with_names(names(&CHAIN_STATES), names(&["L", "R"]))
}

/// The chain world observed through a noisy sensor: each state reports
/// itself with probability `1 - p_F` and `FAIL` otherwise.
pub fn make_fail_world(p_f: f64, p_r: f64, p_l: f64) -> Result<ObservableWorld, WorldError> {
    if !(0.0..=1.0).contains(&p_f) {
        return Err(WorldError::OutOfRange { row: "fail parameter".into(), value: p_f });
    }
    let base = make_chain_world(p_r, p_l)?;
    let mut obs = vec![0.0; 5 * 6];
    for s in 0..5 {
        obs[s * 6 + s] = 1.0 - p_f;
        obs[s * 6 + 5] = p_f;
    }
    let mut observation_names = names(&CHAIN_STATES);
    observation_names.push("FAIL".into());
    ObservableWorld::new(base, 6, obs)?.with_observation_names(observation_names)
}

pub const FAIL: usize = 5;

/// Three states, two deterministic actions. `a` swaps `s1` and `s2` and sends
/// `s3` to `s1`; `b` stays at `s1` and `s3` and sends `s2` to `s3`. `s1` and
/// `s2` share observation `o1`, `s3` emits `o2`.
pub fn make_three_state_world() -> ObservableWorld {
    // (state, action) -> next
    let next = [[1, 0], [0, 2], [0, 2]];
    let base = World::from_fn(3, 2, |s, a, t| if next[s][a] == t { 1.0 } else { 0.0 })
        .and_then(|w| w.with_names(names(&["s1", "s2", "s3"]), names(&["a", "b"])))
        .expect("three-state world is well formed");
    ObservableWorld::new(base, 2, vec![1.0, 0.0, 1.0, 0.0, 0.0, 1.0])
        .and_then(|w| w.with_observation_names(names(&["o1", "o2"])))
        .expect("three-state observations are well formed")
}

/// A builtin world by name: `chain`, `fail` or `three-state`. Missing
/// parameters default to `p_R = 0.35`, `p_L = 0.5`, `p_F = 0.3`.
pub fn builtin(name: &str, params: &[f64]) -> Result<ObservableWorld, WorldError> {
    let get = |i: usize, default: f64| params.get(i).copied().unwrap_or(default);
    match name {
        "chain" => Ok(ObservableWorld::fully_observable(make_chain_world(get(0, 0.35), get(1, 0.5))?)),
        "fail" => make_fail_world(get(0, 0.3), get(1, 0.35), get(2, 0.5)),
        "three-state" => Ok(make_three_state_world()),
        _ => Err(WorldError::BadName(name.to_string())),
    }
}
