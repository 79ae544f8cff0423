use super::delta::{choose_split, shed_residual, AnswerStyle, DeltaConfig};
use super::{Agent, AgentError, HistoryView};
use crate::goal::{CountedFamily, FamilyKind, Goal};
use crate::mdp::{almost_sure_reach_policy, FirstActionThen, ObservableWorld, ReplayMemory, StationaryPolicy, World};
use crate::prob::{optimal_success_prob, phi_value, tails};

/// How a family agent plays after its first action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Continuation {
    /// Steer to the probed pair, play it, repeat.
    ReachLoop,
    /// Uniform over actions, ignoring everything.
    RandomWalk,
}

/// Optimal values `(V_a, V_b)` of the two branches of a dichotomy family
/// when the probed transition has probability `p`.
pub fn branch_values(kind: &FamilyKind, p: f64) -> Option<(f64, f64)> {
    match *kind {
        FamilyKind::XiK { n, k, .. } => Some(tails(p, n, k)),
        FamilyKind::XiRs { r, s, complement, .. } => {
            let q = if complement { 1.0 - p } else { p };
            Some((phi_value(q, &vec![true; r]), phi_value(1.0 - q, &vec![true; s])))
        }
        _ => None,
    }
}

/// Integer key identifying a family member, for keyed randomness.
pub(crate) fn family_key(family: &CountedFamily) -> Vec<i64> {
    let t = family.triple;
    let mut key = vec![t.state as i64, t.action as i64, t.next as i64];
    match &family.kind {
        FamilyKind::PhiW { marker, word } => {
            key.extend([0, *marker as i64]);
            key.extend(word.iter().map(|&b| i64::from(b)));
        }
        FamilyKind::Rho { marker, n, r } => key.extend([1, *marker as i64, *n as i64, *r as i64]),
        FamilyKind::PsiLe { marker, n, k } => key.extend([2, *marker as i64, *n as i64, *k]),
        FamilyKind::ChiGt { marker, n, k } => key.extend([3, *marker as i64, *n as i64, *k]),
        FamilyKind::XiK { a, b, n, k } => key.extend([4, *a as i64, *b as i64, *n as i64, *k]),
        FamilyKind::XiRs { a, b, r, s, complement } => {
            key.extend([5, *a as i64, *b as i64, *r as i64, *s as i64, i64::from(*complement)])
        }
    }
    key
}

/// An agent synthesized from the true world that answers the extraction
/// families: a first action chosen from the closed-form branch values, then
/// a continuation that visits the probed pair infinitely often.
#[derive(Debug, Clone)]
pub struct FamilyAgent {
    world: World,
    observations: Option<ObservableWorld>,
    config: DeltaConfig,
    continuation: Continuation,
}

pub fn family_optimal_agent(world: &World) -> FamilyAgent {
    FamilyAgent::new(world.clone(), DeltaConfig::optimal(), Continuation::ReachLoop).expect("optimal config is valid")
}

pub fn delta_agent(world: &World, config: DeltaConfig) -> Result<FamilyAgent, AgentError> {
    FamilyAgent::new(world.clone(), config, Continuation::ReachLoop)
}

/// An observation-based agent: δ-rule first action, then a uniform random walk.
pub fn random_walk_agent(world: &ObservableWorld, config: DeltaConfig) -> Result<FamilyAgent, AgentError> {
    let mut agent = FamilyAgent::new(world.base().clone(), config, Continuation::RandomWalk)?;
    agent.observations = Some(world.clone());
    Ok(agent)
}

impl FamilyAgent {
    pub fn new(world: World, config: DeltaConfig, continuation: Continuation) -> Result<Self, AgentError> {
        if !(0.0..1.0).contains(&config.delta) {
            return Err(AgentError::BadDelta(config.delta));
        }
        Ok(Self { world, observations: None, config, continuation })
    }

    pub fn config(&self) -> &DeltaConfig {
        &self.config
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    /// The first-action distribution for a family goal.
    pub fn first_action(&self, family: &CountedFamily) -> Result<Vec<f64>, AgentError> {
        let n_a = self.world.n_actions();
        let t = family.triple;
        self.world.check_state(t.state)?;
        self.world.check_action(t.action)?;
        self.world.check_state(t.next)?;
        let mut dist = vec![0.0; n_a];
        let Some((a, b)) = family.markers() else {
            let marker = match family.kind {
                FamilyKind::PhiW { marker, .. }
                | FamilyKind::Rho { marker, .. }
                | FamilyKind::PsiLe { marker, .. }
                | FamilyKind::ChiGt { marker, .. } => marker,
                _ => unreachable!("dichotomy families have markers"),
            };
            self.world.check_action(marker)?;
            dist[marker] = 1.0;
            return Ok(dist);
        };
        self.world.check_action(a)?;
        self.world.check_action(b)?;
        let p = self.world.prob(t.state, t.action, t.next);
        let (v_a, v_b) = branch_values(&family.kind, p).expect("dichotomy family");
        // Point-mass optimal ties go to the lower action index.
        let (v_lo, v_hi, lo_is_a) = if a < b { (v_a, v_b, true) } else { (v_b, v_a, false) };
        let (p_lo, p_hi) = if self.config.style == AnswerStyle::PointMass && v_lo == v_hi {
            let (x, y) = choose_split(v_lo, v_hi, &self.config, &family_key(family));
            (x, y)
        } else {
            let (p_a, p_b) = choose_split(v_a, v_b, &self.config, &family_key(family));
            if lo_is_a {
                (p_a, p_b)
            } else {
                (p_b, p_a)
            }
        };
        let (mut p_a, mut p_b) = if lo_is_a { (p_lo, p_hi) } else { (p_hi, p_lo) };
        if self.config.residual && n_a > 2 {
            let (x, y, shed) = shed_residual(p_a, p_b, v_a, v_b, self.config.delta);
            (p_a, p_b) = (x, y);
            let others = (n_a - 2) as f64;
            for (c, slot) in dist.iter_mut().enumerate() {
                if c != a && c != b {
                    *slot = shed / others;
                }
            }
        }
        dist[a] += p_a;
        dist[b] += p_b;
        Ok(dist)
    }

    fn continuation_policy(&self, family: &CountedFamily) -> Result<StationaryPolicy, AgentError> {
        match self.continuation {
            Continuation::ReachLoop => {
                let t = family.triple;
                Ok(almost_sure_reach_policy(&self.world, &[(t.state, t.action)])?)
            }
            Continuation::RandomWalk => Ok(StationaryPolicy::uniform(self.world.n_states(), self.world.n_actions())),
        }
    }

    /// The whole policy this agent runs for a family goal.
    pub fn policy_for(&self, family: &CountedFamily) -> Result<FirstActionThen<StationaryPolicy>, AgentError> {
        Ok(FirstActionThen::new(self.first_action(family)?, self.continuation_policy(family)?))
    }
}

impl Agent for FamilyAgent {
    fn n_actions(&self) -> usize {
        self.world.n_actions()
    }

    fn query(&self, goal: &Goal, history: HistoryView<'_>) -> Result<Vec<f64>, AgentError> {
        let Goal::Family(family) = goal else {
            return Err(AgentError::UnsupportedGoal);
        };
        match (history, self.continuation, &self.observations) {
            (HistoryView::Observations(_), Continuation::ReachLoop, _) => {
                return Err(AgentError::UnsupportedHistory("observation"))
            }
            (HistoryView::States(_), Continuation::RandomWalk, Some(_)) => {
                return Err(AgentError::UnsupportedHistory("state"))
            }
            _ => {}
        }
        if history.is_empty() {
            return self.first_action(family);
        }
        match history {
            HistoryView::States(h) => Ok(self.continuation_policy(family)?.row(h.last_state()).to_vec()),
            HistoryView::Observations(_) => {
                let n_a = self.world.n_actions();
                Ok(vec![1.0 / n_a as f64; n_a])
            }
        }
    }
}

/// Answers explicit goals with the value-iteration witness from the
/// history's first state.
#[derive(Debug, Clone)]
pub struct WitnessAgent {
    world: World,
}

impl WitnessAgent {
    pub fn new(world: &World) -> Self {
        Self { world: world.clone() }
    }
}

impl Agent for WitnessAgent {
    fn n_actions(&self) -> usize {
        self.world.n_actions()
    }

    fn query(&self, goal: &Goal, history: HistoryView<'_>) -> Result<Vec<f64>, AgentError> {
        let HistoryView::States(h) = history else {
            return Err(AgentError::UnsupportedHistory("observation"));
        };
        let result = optimal_success_prob(&self.world, goal, h.first_state())?;
        Ok(crate::mdp::Policy::distribution(&ReplayMemory(&result.witness), h))
    }
}
