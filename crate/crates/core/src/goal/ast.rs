use std::collections::BTreeSet;

use num_bigint::BigUint;
use thiserror::Error;

use super::family::CountedFamily;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoalError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown state name `{0}`")]
    UnknownState(String),
    #[error("unknown action name `{0}`")]
    UnknownAction(String),
    #[error("a sequential goal needs at least one basic goal")]
    EmptySequence,
    #[error("family too large to materialize (n = {n}, limit {limit})")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid family parameters: {0}")]
    Parameters(String),
    #[error("dichotomy families need two distinct marker actions")]
    NeedsTwoActions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operator {
    /// `⊤[V]`: the current pair is in `V`.
    Now,
    /// `○[V]`: the next pair is in `V`.
    Next,
    /// `◇[V]`: some pair from here on is in `V`.
    Eventually,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    StateIs(usize),
    StateIsNot(usize),
    ActionIs(usize),
    ActionIsNot(usize),
}

impl Atom {
    pub fn holds(self, s: usize, a: usize) -> bool {
        match self {
            Atom::StateIs(x) => s == x,
            Atom::StateIsNot(x) => s != x,
            Atom::ActionIs(x) => a == x,
            Atom::ActionIsNot(x) => a != x,
        }
    }
}

/// The target set `V ⊆ S × A` of a basic goal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Predicate {
    /// Conjunction of atoms; empty means every pair.
    All(Vec<Atom>),
    /// An explicit pair set.
    Pairs(BTreeSet<(usize, usize)>),
}

impl Predicate {
    pub fn contains(&self, s: usize, a: usize) -> bool {
        match self {
            Predicate::All(atoms) => atoms.iter().all(|atom| atom.holds(s, a)),
            Predicate::Pairs(pairs) => pairs.contains(&(s, a)),
        }
    }

    pub fn state(s: usize) -> Self {
        Predicate::All(vec![Atom::StateIs(s)])
    }

    pub fn not_state(s: usize) -> Self {
        Predicate::All(vec![Atom::StateIsNot(s)])
    }

    pub fn action(a: usize) -> Self {
        Predicate::All(vec![Atom::ActionIs(a)])
    }

    pub fn pair(s: usize, a: usize) -> Self {
        Predicate::All(vec![Atom::StateIs(s), Atom::ActionIs(a)])
    }

    /// The explicit pair set over a world with the given sizes.
    pub fn to_pairs(&self, n_states: usize, n_actions: usize) -> BTreeSet<(usize, usize)> {
        (0..n_states).flat_map(|s| (0..n_actions).map(move |a| (s, a))).filter(|&(s, a)| self.contains(s, a)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasicGoal {
    pub op: Operator,
    pub target: Predicate,
}

impl BasicGoal {
    pub fn now(target: Predicate) -> Self {
        Self { op: Operator::Now, target }
    }

    pub fn next(target: Predicate) -> Self {
        Self { op: Operator::Next, target }
    }

    pub fn eventually(target: Predicate) -> Self {
        Self { op: Operator::Eventually, target }
    }
}

/// `⟨φ1, …, φn⟩`, evaluated left to right with the shift semantics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequentialGoal {
    parts: Vec<BasicGoal>,
}

impl SequentialGoal {
    pub fn new(parts: Vec<BasicGoal>) -> Result<Self, GoalError> {
        if parts.is_empty() {
            return Err(GoalError::EmptySequence);
        }
        Ok(Self { parts })
    }

    pub fn single(goal: BasicGoal) -> Self {
        Self { parts: vec![goal] }
    }

    pub fn parts(&self) -> &[BasicGoal] {
        &self.parts
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }
}

/// A finite disjunction of sequential goals, or a counted family that
/// stands for one.
#[derive(Debug, Clone, PartialEq)]
pub enum Goal {
    /// The empty disjunction never holds.
    Disjunction(Vec<SequentialGoal>),
    Family(CountedFamily),
}

impl Goal {
    pub fn never() -> Self {
        Goal::Disjunction(Vec::new())
    }

    pub fn depth(&self) -> usize {
        match self {
            Goal::Disjunction(ds) => ds.iter().map(SequentialGoal::depth).max().unwrap_or(0),
            Goal::Family(f) => f.depth(),
        }
    }

    pub fn width(&self) -> BigUint {
        match self {
            Goal::Disjunction(ds) => BigUint::from(ds.len()),
            Goal::Family(f) => f.width(),
        }
    }

    /// The explicit disjuncts (families are expanded, subject to the size guard).
    pub fn disjuncts(&self) -> Result<Vec<SequentialGoal>, GoalError> {
        match self {
            Goal::Disjunction(ds) => Ok(ds.clone()),
            Goal::Family(f) => f.materialize(),
        }
    }
}

impl From<SequentialGoal> for Goal {
    fn from(goal: SequentialGoal) -> Self {
        Goal::Disjunction(vec![goal])
    }
}

impl From<BasicGoal> for Goal {
    fn from(goal: BasicGoal) -> Self {
        Goal::Disjunction(vec![SequentialGoal::single(goal)])
    }
}
