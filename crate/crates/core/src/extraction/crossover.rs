//! Crossover estimators: probe `ξ_k` for `k = -1..=n` and locate where the
//! agent switches from the `> k` marker to the `≤ k` marker.

use super::{check_delta, point_choice, Branch, Estimate, ExtractionError, Method, Probe};
use crate::agents::{Agent, ProbeStart, QueryRecord};
use crate::goal::FamilyKind;

fn sweep(agent: &dyn Agent, probe: &Probe, n: usize) -> Result<Vec<QueryRecord>, ExtractionError> {
    probe.check(agent)?;
    let (a, b) = probe.markers;
    (-1..=n as i64).map(|k| probe.ask(agent, FamilyKind::XiK { a, b, n, k })).collect()
}

fn is_monotone(picks_b: &[bool]) -> bool {
    picks_b.windows(2).all(|w| w[0] || !w[1])
}

fn estimate(method: Method, n: usize, delta: f64, x: i64, p_hat: f64, monotone: bool, t: Vec<QueryRecord>) -> Estimate {
    Estimate {
        p_hat,
        bound: 0.0,
        method,
        branch: Branch::Crossover,
        n,
        delta,
        crossover: Some(x),
        r0: None,
        reflected: false,
        monotone,
        transcript: t,
    }
    .finish()
}

/// Deterministic δ-optimal agent: `x` is the last `k` answered with the
/// `> k` marker and `p̂ = (x + 1)/n`.
pub fn extract_deterministic(
    agent: &dyn Agent,
    probe: &Probe,
    n: usize,
    delta: f64,
) -> Result<Estimate, ExtractionError> {
    check_delta(delta, false)?;
    if n < 2 {
        return Err(ExtractionError::TooFewVisits { n, min: 2 });
    }
    let transcript = sweep(agent, probe, n)?;
    let picks_b =
        transcript.iter().enumerate().map(|(i, r)| point_choice(r, i).map(|a| !a)).collect::<Result<Vec<_>, _>>()?;
    if !picks_b[0] {
        return Err(ExtractionError::Inconsistent("chose the empty branch at k = -1".into()));
    }
    if picks_b[n + 1] {
        return Err(ExtractionError::Inconsistent(format!("chose the empty branch at k = {n}")));
    }
    let x = picks_b.iter().rposition(|&b| b).expect("k = -1 picks b") as i64 - 1;
    let p_hat = ((x + 1) as f64 / n as f64).clamp(0.0, 1.0);
    Ok(estimate(Method::Deterministic, n, delta, x, p_hat, is_monotone(&picks_b), transcript))
}

fn stochastic(
    agent: &dyn Agent,
    probe: &Probe,
    n: usize,
    delta: f64,
    method: Method,
) -> Result<Estimate, ExtractionError> {
    check_delta(delta, true)?;
    if n < 1 {
        return Err(ExtractionError::TooFewVisits { n, min: 1 });
    }
    let transcript = sweep(agent, probe, n)?;
    if transcript.is_empty() {
        return Err(ExtractionError::EmptyTranscript);
    }
    let picks_b: Vec<bool> = transcript.iter().map(|r| r.p_b >= r.p_a).collect();
    let x = picks_b
        .iter()
        .rposition(|&b| b)
        .ok_or_else(|| ExtractionError::Inconsistent("never favored the > k marker".into()))? as i64
        - 1;
    let p_hat = (x as f64 / n as f64).clamp(0.0, 1.0);
    Ok(estimate(method, n, delta, x, p_hat, is_monotone(&picks_b), transcript))
}

/// Stochastic δ-optimal agent, `δ < 1/2`: `x = max{k : p_b ≥ p_a}` and
/// `p̂ = x/n`.
pub fn extract_stochastic(agent: &dyn Agent, probe: &Probe, n: usize, delta: f64) -> Result<Estimate, ExtractionError> {
    stochastic(agent, probe, n, delta, Method::Stochastic)
}

/// The stochastic protocol against an observation-based agent. The probe
/// must start from an observation.
pub fn extract_pomdp(agent: &dyn Agent, probe: &Probe, n: usize, delta: f64) -> Result<Estimate, ExtractionError> {
    if !matches!(probe.start, ProbeStart::Observation(_)) {
        return Err(ExtractionError::Agent(crate::agents::AgentError::UnsupportedHistory("state")));
    }
    stochastic(agent, probe, n, delta, Method::Pomdp)
}
