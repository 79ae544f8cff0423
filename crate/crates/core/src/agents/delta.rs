//! First-action choices of δ-optimal agents on two-branch goals.

use rand::Rng;

use crate::rng::keyed_stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeltaMode {
    /// The best branch.
    Optimal,
    /// A uniform draw from the feasible set, keyed by the goal.
    RandomFeasible,
    /// The least informative feasible answer.
    Adversarial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnswerStyle {
    /// Any split `(p_a, 1 - p_a)` between the two markers.
    Mixed,
    /// A point mass on one marker.
    PointMass,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaConfig {
    pub delta: f64,
    pub mode: DeltaMode,
    pub style: AnswerStyle,
    pub seed: u64,
    /// Move slack mass from the worse marker onto non-marker actions.
    pub residual: bool,
}

impl DeltaConfig {
    pub fn optimal() -> Self {
        Self { delta: 0.0, mode: DeltaMode::Optimal, style: AnswerStyle::PointMass, seed: 0, residual: false }
    }

    pub fn mixed(delta: f64, mode: DeltaMode, seed: u64) -> Self {
        Self { delta, mode, style: AnswerStyle::Mixed, seed, residual: false }
    }

    pub fn point_mass(delta: f64, mode: DeltaMode, seed: u64) -> Self {
        Self { delta, mode, style: AnswerStyle::PointMass, seed, residual: false }
    }
}

/// Interval of `p_a` (with `p_b = 1 - p_a`) satisfying
/// `(1-δ) max(V_a, V_b) ≤ p_a V_a + p_b V_b`.
pub fn feasible_interval(v_a: f64, v_b: f64, delta: f64) -> (f64, f64) {
    if v_a > v_b {
        ((((1.0 - delta) * v_a - v_b) / (v_a - v_b)).max(0.0), 1.0)
    } else if v_b > v_a {
        (0.0, (delta * v_b / (v_b - v_a)).min(1.0))
    } else {
        (0.0, 1.0)
    }
}

/// Relative rounding slack in feasibility checks.
const SLACK: f64 = 1e-12;

/// Whether a split meets the δ-optimality inequality (with rounding slack).
pub fn is_feasible(p_a: f64, p_b: f64, v_a: f64, v_b: f64, delta: f64) -> bool {
    p_a * v_a + p_b * v_b >= (1.0 - delta) * v_a.max(v_b) * (1.0 - SLACK)
}

/// The `(p_a, p_b)` a δ-agent answers with; `key` identifies the goal for
/// keyed randomness.
pub fn choose_split(v_a: f64, v_b: f64, config: &DeltaConfig, key: &[i64]) -> (f64, f64) {
    let p_a = match config.style {
        AnswerStyle::Mixed => {
            let (lo, hi) = feasible_interval(v_a, v_b, config.delta);
            match config.mode {
                DeltaMode::Optimal if v_a > v_b => 1.0,
                DeltaMode::Optimal if v_b > v_a => 0.0,
                DeltaMode::Optimal => 0.5,
                DeltaMode::Adversarial => 0.5_f64.clamp(lo, hi),
                DeltaMode::RandomFeasible => {
                    let u: f64 = keyed_stream(config.seed, key).gen();
                    lo + u * (hi - lo)
                }
            }
        }
        AnswerStyle::PointMass => {
            let threshold = (1.0 - config.delta) * v_a.max(v_b) * (1.0 - SLACK);
            let (a_ok, b_ok) = (v_a >= threshold, v_b >= threshold);
            let pick_a = match config.mode {
                DeltaMode::Optimal => v_a >= v_b,
                DeltaMode::Adversarial => {
                    if a_ok && b_ok {
                        v_a < v_b
                    } else {
                        a_ok
                    }
                }
                DeltaMode::RandomFeasible => {
                    if a_ok && b_ok {
                        keyed_stream(config.seed, key).gen::<bool>()
                    } else {
                        a_ok
                    }
                }
            };
            if pick_a {
                1.0
            } else {
                0.0
            }
        }
    };
    (p_a, 1.0 - p_a)
}

/// Takes mass off the lower-valued marker while keeping the split feasible.
/// Returns the new `(p_a, p_b)` and the mass removed.
pub fn shed_residual(p_a: f64, p_b: f64, v_a: f64, v_b: f64, delta: f64) -> (f64, f64, f64) {
    let slack = p_a * v_a + p_b * v_b - (1.0 - delta) * v_a.max(v_b);
    if slack <= 0.0 {
        return (p_a, p_b, 0.0);
    }
    let (low_mass, low_value) = if v_a < v_b { (p_a, v_a) } else { (p_b, v_b) };
    let shed = if low_value == 0.0 { low_mass } else { low_mass.min(slack / low_value) };
    if v_a < v_b {
        (p_a - shed, p_b, shed)
    } else {
        (p_a, p_b - shed, shed)
    }
}
