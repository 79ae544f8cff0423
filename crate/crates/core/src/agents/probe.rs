use super::{Agent, AgentError, HistoryView};
use crate::goal::{CountedFamily, FamilyKind, Goal};
use crate::mdp::{FiniteHistory, ObservationHistory};

/// Where a probe starts: a state, or an initial observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeStart {
    State(usize),
    Observation(usize),
}

/// One first-action query: the mass on each marker and the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryRecord {
    pub kind: FamilyKind,
    pub p_a: f64,
    pub p_b: f64,
    pub remainder: f64,
}

/// Asks the agent for its first action on a dichotomy family goal and reads
/// off the mass it puts on each marker.
pub fn probe_first_action(
    agent: &dyn Agent,
    family: &CountedFamily,
    start: ProbeStart,
) -> Result<QueryRecord, AgentError> {
    let (a, b) = family.markers().ok_or(AgentError::UnsupportedGoal)?;
    let goal = Goal::Family(family.clone());
    let dist = match start {
        ProbeStart::State(s) => agent.query(&goal, HistoryView::States(&FiniteHistory::start(s)))?,
        ProbeStart::Observation(o) => agent.query(&goal, HistoryView::Observations(&ObservationHistory::start(o)))?,
    };
    let (p_a, p_b) = (dist[a], dist[b]);
    Ok(QueryRecord { kind: family.kind.clone(), p_a, p_b, remainder: (1.0 - p_a - p_b).max(0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::family_optimal_agent;
    use crate::goal::{make_family, FamilyKind, Triple};
    use crate::mdp::builtin::{make_chain_world, LEFT, ORIGIN, RIGHT};

    #[test]
    fn reads_marker_mass() {
        let w = make_chain_world(0.35, 0.5).unwrap();
        let agent = family_optimal_agent(&w);
        let f =
            make_family(Triple::new(ORIGIN, RIGHT, 3), FamilyKind::XiK { a: LEFT, b: RIGHT, n: 4, k: 0 }, 2).unwrap();
        let rec = probe_first_action(&agent, &f, ProbeStart::State(ORIGIN)).unwrap();
        assert_eq!((rec.p_a, rec.p_b, rec.remainder), (0.0, 1.0, 0.0));
        assert_eq!(rec.kind, f.kind);
        let single =
            make_family(Triple::new(ORIGIN, RIGHT, 3), FamilyKind::Rho { marker: LEFT, n: 2, r: 1 }, 2).unwrap();
        assert_eq!(probe_first_action(&agent, &single, ProbeStart::State(ORIGIN)), Err(AgentError::UnsupportedGoal));
    }
}
