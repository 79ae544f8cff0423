//! Width-2 estimators: compare `q^r` against `(1-q)^s` for `q` the smaller
//! of `p` and `1 - p`, which locates `α = f(q) = log(1-q)/log(q)`.

use super::scalar::{f_inverse, F_INVERSE_TOL};
use super::{check_delta, point_choice, Branch, Estimate, ExtractionError, Method, Probe};
use crate::agents::{Agent, QueryRecord};
use crate::goal::FamilyKind;

struct Session<'a> {
    agent: &'a dyn Agent,
    probe: &'a Probe,
    transcript: Vec<QueryRecord>,
}

impl Session<'_> {
    /// Asks `q^r` (marker a) against `(1-q)^s` (marker b); returns whether a
    /// was chosen.
    fn ask(&mut self, r: usize, s: usize, complement: bool) -> Result<bool, ExtractionError> {
        let (a, b) = self.probe.markers;
        let record = self.probe.ask(self.agent, FamilyKind::XiRs { a, b, r, s, complement })?;
        let pick = point_choice(&record, self.transcript.len())?;
        self.transcript.push(record);
        Ok(pick)
    }

    /// Asks `1-p` against `p`; returns whether to work with `q = 1 - p`.
    fn reflect(&mut self) -> Result<bool, ExtractionError> {
        Ok(!self.ask(1, 1, true)?)
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    method: Method,
    branch: Branch,
    n: usize,
    delta: f64,
    q_hat: f64,
    reflected: bool,
    r0: Option<usize>,
    monotone: bool,
    transcript: Vec<QueryRecord>,
) -> Estimate {
    Estimate {
        p_hat: if reflected { 1.0 - q_hat } else { q_hat },
        bound: 0.0,
        method,
        branch,
        n,
        delta,
        crossover: None,
        r0,
        reflected,
        monotone,
        transcript,
    }
    .finish()
}

/// Optimal deterministic agent on width-2 goals.
pub fn extract_width2_exact(agent: &dyn Agent, probe: &Probe, n: usize) -> Result<Estimate, ExtractionError> {
    if n < 2 {
        return Err(ExtractionError::TooFewVisits { n, min: 2 });
    }
    probe.check(agent)?;
    let mut session = Session { agent, probe, transcript: Vec::new() };
    let reflected = session.reflect()?;
    let method = Method::Width2Exact;
    if !session.ask(1, n, reflected)? {
        return Ok(finish(method, Branch::Zero, n, 0.0, 0.0, reflected, None, true, session.transcript));
    }
    let picks_a = (0..=n).map(|r| session.ask(r, n, reflected)).collect::<Result<Vec<_>, _>>()?;
    if !picks_a[0] {
        return Err(ExtractionError::Inconsistent("preferred (1-q)^n over certainty at r = 0".into()));
    }
    if !picks_a.windows(2).all(|w| w[0] || !w[1]) {
        return Err(ExtractionError::Inconsistent("branch answers are not monotone in r".into()));
    }
    let last = picks_a.iter().rposition(|&a| a).expect("r = 0 picks a");
    let alpha = (last as f64 + 0.5) / n as f64;
    let q_hat = f_inverse(alpha, 1.0 / (n as f64 + 1.0), 0.5, F_INVERSE_TOL);
    Ok(finish(method, Branch::Interior, n, 0.0, q_hat, reflected, Some(last), true, session.transcript))
}

/// δ-optimal deterministic agent on width-2 goals, `δ < 1/2`.
pub fn extract_width2_delta(
    agent: &dyn Agent,
    probe: &Probe,
    n: usize,
    delta: f64,
) -> Result<Estimate, ExtractionError> {
    check_delta(delta, true)?;
    if n < 1 {
        return Err(ExtractionError::TooFewVisits { n, min: 1 });
    }
    probe.check(agent)?;
    let mut session = Session { agent, probe, transcript: Vec::new() };
    let reflected = session.reflect()?;
    let method = Method::Width2Delta;
    if !session.ask(1, n, reflected)? {
        return Ok(finish(method, Branch::Zero, n, delta, 0.0, reflected, None, true, session.transcript));
    }
    let mut r0 = None;
    for r in 0..=3 * n {
        if !session.ask(r, n, reflected)? {
            r0 = Some(r);
            break;
        }
    }
    let alpha = r0.map_or(3.0, |r| r as f64 / n as f64);
    let keep = 1.0 - delta;
    let q_hat = f_inverse(alpha, keep / (1.0 + n as f64 * keep), 2.0 / 3.0, F_INVERSE_TOL);
    Ok(finish(method, Branch::Interior, n, delta, q_hat, reflected, r0, true, session.transcript))
}
