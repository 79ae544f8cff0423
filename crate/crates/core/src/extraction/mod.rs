//! Recovering transition probabilities from an agent's first actions.

pub mod bounds;
pub mod crossover;
pub mod kernel;
pub mod scalar;
pub mod width2;

use std::fmt;

use thiserror::Error;

use crate::agents::{probe_first_action, Agent, AgentError, ProbeStart, QueryRecord};
use crate::goal::{make_family, FamilyKind, GoalError, Triple};

pub use bounds::{
    deterministic_bound, forced_margin, freedman_exceeds, log_term, stochastic_bound, width2_delta_bound,
    width2_delta_zero_bound, width2_interior_bound, width2_zero_bound, BernsteinDiagnostics,
};
pub use crossover::{extract_deterministic, extract_pomdp, extract_stochastic};
pub use kernel::{project_to_simplex, reconstruct_world, KernelEstimate};
pub use scalar::{f_inverse, f_log_ratio, f_prime_lower, lambert_w_upper, F_INVERSE_TOL};
pub use width2::{extract_width2_delta, extract_width2_exact};

/// Factor applied to bounds evaluated at `p̂` when reporting to users.
pub const REPORT_INFLATION: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Crossover with a deterministic δ-optimal agent.
    Deterministic,
    /// Crossover with a stochastic δ-optimal agent.
    Stochastic,
    /// Crossover with an observation-based agent.
    Pomdp,
    /// Width-2 goals, optimal deterministic agent.
    Width2Exact,
    /// Width-2 goals, δ-optimal deterministic agent.
    Width2Delta,
}

impl Method {
    pub const ALL: [Method; 5] =
        [Method::Deterministic, Method::Stochastic, Method::Pomdp, Method::Width2Exact, Method::Width2Delta];

    pub fn name(self) -> &'static str {
        match self {
            Method::Deterministic => "t1",
            Method::Stochastic => "t2",
            Method::Pomdp => "t3",
            Method::Width2Exact => "t4",
            Method::Width2Delta => "t4d",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Method::ALL.into_iter().find(|m| m.name() == name)
    }

    /// Most probes the method issues for a given `n`.
    pub fn query_budget(self, n: usize) -> usize {
        match self {
            Method::Deterministic | Method::Stochastic | Method::Pomdp => n + 2,
            Method::Width2Exact => n + 3,
            Method::Width2Delta => 3 * n + 3,
        }
    }

    /// Whether the method needs `δ < 1/2`.
    pub fn needs_small_delta(self) -> bool {
        matches!(self, Method::Stochastic | Method::Pomdp | Method::Width2Delta)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which case of its protocol an estimate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Crossover,
    /// The probability was found to be near zero.
    Zero,
    /// The probability was located on the `α` grid.
    Interior,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub p_hat: f64,
    /// Reported bound: evaluated at `p̂`, inflated by [`REPORT_INFLATION`]
    /// when it depends on `p`.
    pub bound: f64,
    pub method: Method,
    pub branch: Branch,
    pub n: usize,
    pub delta: f64,
    pub crossover: Option<i64>,
    pub r0: Option<usize>,
    /// Estimate was made for `1 - p` and reflected back.
    pub reflected: bool,
    /// Crossover answers switched exactly once.
    pub monotone: bool,
    pub transcript: Vec<QueryRecord>,
}

impl Estimate {
    /// The guaranteed error bound evaluated at the true probability.
    pub fn bound_at(&self, p: f64) -> f64 {
        match (self.method, self.branch) {
            (Method::Deterministic, _) => deterministic_bound(p, self.n, self.delta),
            (Method::Stochastic | Method::Pomdp, _) => stochastic_bound(p, self.n, self.delta),
            (Method::Width2Exact, Branch::Zero) => width2_zero_bound(self.n),
            (Method::Width2Exact, _) => width2_interior_bound(self.n),
            (Method::Width2Delta, Branch::Zero) => width2_delta_zero_bound(self.n, self.delta),
            (Method::Width2Delta, _) => width2_delta_bound(self.n, self.delta),
        }
    }

    /// Whether `|p̂ - p| ≤ bound_at(p)`.
    pub fn holds_at(&self, p: f64) -> bool {
        (self.p_hat - p).abs() <= self.bound_at(p)
    }

    pub(crate) fn finish(mut self) -> Self {
        self.bound = match self.method {
            Method::Deterministic | Method::Stochastic | Method::Pomdp => self.bound_at(self.p_hat) * REPORT_INFLATION,
            _ => self.bound_at(self.p_hat),
        };
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtractionError {
    #[error("delta = {0} is at least 1/2: a 1/2-optimal agent may answer every dichotomy with (1/2, 1/2)")]
    DeltaTooLarge(f64),
    #[error("delta must lie in [0, 1), got {0}")]
    BadDelta(f64),
    #[error("n = {n} is too small, need at least {min}")]
    TooFewVisits { n: usize, min: usize },
    #[error("the agent's answer to query {index} is not a point mass on a marker")]
    NotPointMass { index: usize },
    #[error("the agent answered inconsistently: {0}")]
    Inconsistent(String),
    #[error("no queries were answered")]
    EmptyTranscript,
    #[error("markers must be two distinct actions")]
    BadMarkers,
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Goal(#[from] GoalError),
}

/// What to probe: the transition, the two marker actions, and where the
/// agent starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Probe {
    pub triple: Triple,
    pub markers: (usize, usize),
    pub start: ProbeStart,
}

impl Probe {
    /// Markers `(0, 1)`, starting from the probed state.
    pub fn new(triple: Triple) -> Self {
        Self { triple, markers: (0, 1), start: ProbeStart::State(triple.state) }
    }

    pub fn with_markers(mut self, a: usize, b: usize) -> Self {
        self.markers = (a, b);
        self
    }

    pub fn with_start(mut self, start: ProbeStart) -> Self {
        self.start = start;
        self
    }

    pub(crate) fn ask(&self, agent: &dyn Agent, kind: FamilyKind) -> Result<QueryRecord, ExtractionError> {
        let family = make_family(self.triple, kind, agent.n_actions())?;
        Ok(probe_first_action(agent, &family, self.start)?)
    }

    pub(crate) fn check(&self, agent: &dyn Agent) -> Result<(), ExtractionError> {
        let (a, b) = self.markers;
        if a == b || a >= agent.n_actions() || b >= agent.n_actions() {
            return Err(ExtractionError::BadMarkers);
        }
        Ok(())
    }
}

/// Which marker a point-mass answer picked: `true` for `a`.
pub(crate) fn point_choice(record: &QueryRecord, index: usize) -> Result<bool, ExtractionError> {
    match (record.p_a, record.p_b) {
        (1.0, _) => Ok(true),
        (_, 1.0) => Ok(false),
        _ => Err(ExtractionError::NotPointMass { index }),
    }
}

pub(crate) fn check_delta(delta: f64, strict_half: bool) -> Result<(), ExtractionError> {
    if !(0.0..1.0).contains(&delta) {
        return Err(ExtractionError::BadDelta(delta));
    }
    if strict_half && delta >= 0.5 {
        return Err(ExtractionError::DeltaTooLarge(delta));
    }
    Ok(())
}

/// Runs `method` on one probe.
pub fn extract(
    agent: &dyn Agent,
    probe: &Probe,
    method: Method,
    n: usize,
    delta: f64,
) -> Result<Estimate, ExtractionError> {
    match method {
        Method::Deterministic => extract_deterministic(agent, probe, n, delta),
        Method::Stochastic => extract_stochastic(agent, probe, n, delta),
        Method::Pomdp => extract_pomdp(agent, probe, n, delta),
        Method::Width2Exact => extract_width2_exact(agent, probe, n),
        Method::Width2Delta => extract_width2_delta(agent, probe, n, delta),
    }
}
