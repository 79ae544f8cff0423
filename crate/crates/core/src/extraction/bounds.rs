//! Guaranteed error bounds of the extraction methods, in natural logs.

use super::scalar::lambert_w_upper;

/// Deterministic crossover bound `√(2p(1-p) / ((n-1)(1-δ)))`.
pub fn deterministic_bound(p: f64, n: usize, delta: f64) -> f64 {
    (2.0 * p * (1.0 - p) / ((n as f64 - 1.0) * (1.0 - delta))).sqrt()
}

/// `L = log(2(1-δ) / (1-2δ))`.
pub fn log_term(delta: f64) -> f64 {
    (2.0 * (1.0 - delta) / (1.0 - 2.0 * delta)).ln()
}

/// Stochastic crossover bound `√(2p(1-p)L/n) + 2L/(3n) + 1/n`.
pub fn stochastic_bound(p: f64, n: usize, delta: f64) -> f64 {
    let (l, n) = (log_term(delta), n as f64);
    (2.0 * p * (1.0 - p) * l / n).sqrt() + 2.0 * l / (3.0 * n) + 1.0 / n
}

/// Width-2 optimal agent, interior branch: `2 log(n+1) / n`.
pub fn width2_interior_bound(n: usize) -> f64 {
    let n = n as f64;
    2.0 * (n + 1.0).ln() / n
}

/// Width-2 optimal agent, zero branch: `(log n - log log n + 1) / n`.
pub fn width2_zero_bound(n: usize) -> f64 {
    let n = n as f64;
    (n.ln() - n.ln().ln() + 1.0) / n
}

/// Width-2 δ-optimal agent: `3 log((1 + n(1-δ))/(1-δ)) (1 + |log(1-δ)|/n) / n`.
pub fn width2_delta_bound(n: usize, delta: f64) -> f64 {
    let n = n as f64;
    let keep = 1.0 - delta;
    3.0 * ((1.0 + n * keep) / keep).ln() * (1.0 + keep.ln().abs() / n) / n
}

/// Width-2 δ-optimal agent, zero branch: `W(n/(1-δ)) / n`.
pub fn width2_delta_zero_bound(n: usize, delta: f64) -> f64 {
    lambert_w_upper(n as f64 / (1.0 - delta)) / n as f64
}

/// Margin `ε` beyond which a δ-optimal agent must favor the better branch
/// of a complementary pair worth `1/2 ± ε`.
pub fn forced_margin(delta: f64) -> f64 {
    delta / (2.0 * (1.0 - delta))
}

/// Quantities of the Bernstein-Freedman step behind the stochastic bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinDiagnostics {
    pub mu: f64,
    pub sigma2: f64,
    pub l: f64,
    pub t_star: f64,
    pub epsilon: f64,
}

impl BernsteinDiagnostics {
    pub fn new(p: f64, n: usize, delta: f64) -> Self {
        let nf = n as f64;
        let (mu, sigma2, l) = (p * nf, nf * p * (1.0 - p), log_term(delta));
        let t_star = (2.0 * sigma2 * l).sqrt() + 2.0 * l / 3.0;
        Self { mu, sigma2, l, t_star, epsilon: t_star / nf }
    }
}

/// `t⋆² / (2σ² + 2t⋆/3) > L` with `t⋆ = √(2σ²L) + 2L/3`.
pub fn freedman_exceeds(sigma2: f64, l: f64) -> bool {
    let t = (2.0 * sigma2 * l).sqrt() + 2.0 * l / 3.0;
    t * t / (2.0 * sigma2 + 2.0 * t / 3.0) > l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoted_values() {
        assert!((deterministic_bound(0.5, 40, 0.0) - 0.1132).abs() < 1e-4);
        assert!((log_term(0.2) - 0.980829).abs() < 1e-6);
        assert!((stochastic_bound(0.35, 20, 0.2) - 0.232073).abs() < 1e-6);
        assert!((width2_interior_bound(200) - 0.05303).abs() < 1e-5);
        assert!((width2_delta_bound(200, 0.2) - 0.0797).abs() < 1e-4);
        assert_eq!(forced_margin(0.2), 0.125);
    }

    #[test]
    fn freedman_inequality_on_a_grid() {
        for i in -8..=8 {
            for j in -8..=8 {
                let (sigma2, l) = (10f64.powi(i), 10f64.powi(j));
                assert!(freedman_exceeds(sigma2, l), "σ² = {sigma2}, L = {l}");
            }
        }
        let d = BernsteinDiagnostics::new(0.35, 20, 0.2);
        assert!((d.sigma2 - 4.55).abs() < 1e-12);
        assert!(freedman_exceeds(d.sigma2, d.l));
    }
}
