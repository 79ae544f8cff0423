//! Online and declarative satisfaction of goals on finite prefixes.

use super::ast::{Goal, GoalError, Operator, SequentialGoal};
use crate::mdp::FiniteHistory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Pending,
    Accepted,
    Rejected,
}

impl Verdict {
    pub fn is_final(self) -> bool {
        self != Verdict::Pending
    }

    /// Three-valued disjunction.
    pub fn or(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Accepted, _) | (_, Verdict::Accepted) => Verdict::Accepted,
            (Verdict::Rejected, Verdict::Rejected) => Verdict::Rejected,
            _ => Verdict::Pending,
        }
    }
}

/// Progress of one sequential goal over a stream of state-action pairs.
///
/// `next_part` indexes the first basic goal not yet discharged. When
/// `awaiting_next` is set that goal is a `NEXT` whose check applies to the
/// incoming pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonitorState {
    pub next_part: usize,
    pub awaiting_next: bool,
    pub verdict: Verdict,
}

impl MonitorState {
    pub fn initial() -> Self {
        Self { next_part: 0, awaiting_next: false, verdict: Verdict::Pending }
    }

    pub fn accepted() -> Self {
        Self { next_part: 0, awaiting_next: false, verdict: Verdict::Accepted }
    }

    pub fn rejected() -> Self {
        Self { next_part: 0, awaiting_next: false, verdict: Verdict::Rejected }
    }
}

/// Advances `m` over the pair `(s, a)`. Final verdicts are absorbing.
pub fn monitor_step(goal: &SequentialGoal, m: MonitorState, s: usize, a: usize) -> MonitorState {
    if m.verdict.is_final() {
        return m;
    }
    let parts = goal.parts();
    let mut idx = m.next_part;
    if m.awaiting_next {
        if !parts[idx].target.contains(s, a) {
            return MonitorState::rejected();
        }
        idx += 1;
    }
    while let Some(part) = parts.get(idx) {
        let hit = part.target.contains(s, a);
        match part.op {
            Operator::Now if !hit => return MonitorState::rejected(),
            Operator::Now => idx += 1,
            Operator::Eventually if hit => idx += 1,
            Operator::Eventually => {
                return MonitorState { next_part: idx, awaiting_next: false, verdict: Verdict::Pending }
            }
            Operator::Next => return MonitorState { next_part: idx, awaiting_next: true, verdict: Verdict::Pending },
        }
    }
    MonitorState::accepted()
}

/// Runs the monitor over a sequence of pairs.
pub fn run_monitor(goal: &SequentialGoal, pairs: impl IntoIterator<Item = (usize, usize)>) -> Verdict {
    let mut m = MonitorState::initial();
    for (s, a) in pairs {
        m = monitor_step(goal, m, s, a);
        if m.verdict.is_final() {
            break;
        }
    }
    m.verdict
}

/// Verdict of a goal on the completed pairs of a finite history: accepted if
/// some disjunct accepts, rejected if all reject, pending otherwise.
pub fn satisfies_prefix(goal: &Goal, history: &FiniteHistory) -> Result<Verdict, GoalError> {
    Ok(goal.disjuncts()?.iter().map(|d| run_monitor(d, history.pairs())).fold(Verdict::Rejected, Verdict::or))
}

/// Direct transcription of the recursive shift semantics, three-valued on a
/// finite prefix: `Pending` whenever the answer depends on a pair at or
/// beyond `pairs.len()`.
pub fn declarative_verdict(goal: &SequentialGoal, pairs: &[(usize, usize)]) -> Verdict {
    fn sat(parts: &[super::ast::BasicGoal], pairs: &[(usize, usize)], i: usize) -> Verdict {
        let Some((first, rest)) = parts.split_first() else {
            return Verdict::Accepted;
        };
        let in_v = |j: usize| first.target.contains(pairs[j].0, pairs[j].1);
        let (check, shift) = match first.op {
            Operator::Now => (i, i),
            Operator::Next => (i + 1, i + 1),
            Operator::Eventually => match (i..pairs.len()).find(|&j| in_v(j)) {
                Some(j) => (j, j),
                None => return Verdict::Pending,
            },
        };
        if check >= pairs.len() {
            Verdict::Pending
        } else if !in_v(check) {
            Verdict::Rejected
        } else {
            sat(rest, pairs, shift)
        }
    }
    sat(goal.parts(), pairs, 0)
}
