//! The binomial goal families used by the extraction protocols.
//!
//! Every family member starts with `NOW[A=marker]` and then, for each bit of
//! a word `w`, waits for the probed pair `(s, a)` and checks whether the next
//! state is `s'` (bit 1) or not (bit 0).

use num_bigint::BigUint;

use super::ast::{Atom, BasicGoal, GoalError, Predicate, SequentialGoal};

/// Largest `n` for which families are expanded into explicit disjunctions.
pub const MATERIALIZE_LIMIT: usize = 12;

/// The transition `(s, a, s')` a family probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub state: usize,
    pub action: usize,
    pub next: usize,
}

impl Triple {
    pub fn new(state: usize, action: usize, next: usize) -> Self {
        Self { state, action, next }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `φ_{b,w}`: one word.
    PhiW { marker: usize, word: Vec<bool> },
    /// `ρ_{b,r}`: all words of length `n` with `r` ones.
    Rho { marker: usize, n: usize, r: usize },
    /// `ψ_{b,k}`: all words with at most `k` ones (`k = -1` is empty).
    PsiLe { marker: usize, n: usize, k: i64 },
    /// `χ_{b,k}`: all words with more than `k` ones (`k = n` is empty).
    ChiGt { marker: usize, n: usize, k: i64 },
    /// `ξ_k = ψ_{a,k} ∨ χ_{b,k}`.
    XiK { a: usize, b: usize, n: usize, k: i64 },
    /// Width-2 dichotomy `φ_{a,1^r} ∨ φ_{b,0^s}`, worth `p^r` against
    /// `(1-p)^s`. With `complement` the roles of `s'` flip: `φ_{a,0^r} ∨
    /// φ_{b,1^s}`, worth `(1-p)^r` against `p^s`.
    XiRs { a: usize, b: usize, r: usize, s: usize, complement: bool },
}

/// A family member described by its parameters rather than its disjuncts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountedFamily {
    pub triple: Triple,
    pub kind: FamilyKind,
}

fn check_k(n: usize, k: i64) -> Result<(), GoalError> {
    if k < -1 || k > n as i64 {
        return Err(GoalError::Parameters(format!("k = {k} outside [-1, {n}]")));
    }
    Ok(())
}

/// Validates family parameters against a world with `n_actions` actions.
pub fn make_family(triple: Triple, kind: FamilyKind, n_actions: usize) -> Result<CountedFamily, GoalError> {
    match &kind {
        FamilyKind::PhiW { .. } => {}
        FamilyKind::Rho { n, r, .. } if r > n => {
            return Err(GoalError::Parameters(format!("r = {r} exceeds n = {n}")));
        }
        FamilyKind::Rho { .. } => {}
        FamilyKind::PsiLe { n, k, .. } | FamilyKind::ChiGt { n, k, .. } => check_k(*n, *k)?,
        FamilyKind::XiK { a, b, n, k } => {
            if a == b || n_actions < 2 {
                return Err(GoalError::NeedsTwoActions);
            }
            check_k(*n, *k)?;
        }
        FamilyKind::XiRs { a, b, .. } => {
            if a == b || n_actions < 2 {
                return Err(GoalError::NeedsTwoActions);
            }
        }
    }
    Ok(CountedFamily { triple, kind })
}

fn binomial(n: usize, r: usize) -> BigUint {
    (0..r).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

fn range_sum(n: usize, lo: i64, hi: i64) -> BigUint {
    (lo.max(0)..=hi.min(n as i64)).map(|r| binomial(n, r as usize)).sum()
}

impl CountedFamily {
    /// The marker actions `(a, b)` of a dichotomy family.
    pub fn markers(&self) -> Option<(usize, usize)> {
        match self.kind {
            FamilyKind::XiK { a, b, .. } | FamilyKind::XiRs { a, b, .. } => Some((a, b)),
            _ => None,
        }
    }

    /// Number of probe visits `n` of the longest disjunct.
    pub fn visits(&self) -> usize {
        match &self.kind {
            FamilyKind::PhiW { word, .. } => word.len(),
            FamilyKind::Rho { n, .. }
            | FamilyKind::PsiLe { n, .. }
            | FamilyKind::ChiGt { n, .. }
            | FamilyKind::XiK { n, .. } => *n,
            FamilyKind::XiRs { r, s, .. } => (*r).max(*s),
        }
    }

    pub fn width(&self) -> BigUint {
        match &self.kind {
            FamilyKind::PhiW { .. } => BigUint::from(1u32),
            FamilyKind::Rho { n, r, .. } => binomial(*n, *r),
            FamilyKind::PsiLe { n, k, .. } => range_sum(*n, 0, *k),
            FamilyKind::ChiGt { n, k, .. } => range_sum(*n, k + 1, *n as i64),
            FamilyKind::XiK { n, .. } => BigUint::from(2u32).pow(*n as u32),
            FamilyKind::XiRs { .. } => BigUint::from(2u32),
        }
    }

    pub fn depth(&self) -> usize {
        let empty = match &self.kind {
            FamilyKind::PsiLe { k, .. } => *k < 0,
            FamilyKind::ChiGt { n, k, .. } => *k >= *n as i64,
            _ => false,
        };
        if empty {
            0
        } else {
            2 * self.visits() + 1
        }
    }

    /// The explicit disjuncts, in order of increasing weight then
    /// lexicographic word.
    pub fn materialize(&self) -> Result<Vec<SequentialGoal>, GoalError> {
        let n = self.visits();
        if n > MATERIALIZE_LIMIT {
            return Err(GoalError::TooLarge { n, limit: MATERIALIZE_LIMIT });
        }
        let t = self.triple;
        let words = |marker: usize, lo: i64, hi: i64| -> Vec<SequentialGoal> {
            (lo.max(0)..=hi.min(n as i64))
                .flat_map(|r| words_with_weight(n, r as usize))
                .map(|w| phi(t, marker, &w))
                .collect()
        };
        Ok(match &self.kind {
            FamilyKind::PhiW { marker, word } => vec![phi(t, *marker, word)],
            FamilyKind::Rho { marker, r, .. } => words(*marker, *r as i64, *r as i64),
            FamilyKind::PsiLe { marker, k, .. } => words(*marker, 0, *k),
            FamilyKind::ChiGt { marker, k, .. } => words(*marker, k + 1, n as i64),
            FamilyKind::XiK { a, b, k, .. } => {
                let mut out = words(*a, 0, *k);
                out.extend(words(*b, k + 1, n as i64));
                out
            }
            FamilyKind::XiRs { a, b, r, s, complement } => {
                vec![phi(t, *a, &vec![!complement; *r]), phi(t, *b, &vec![*complement; *s])]
            }
        })
    }
}

/// `φ_{b,w}` as an explicit sequential goal.
pub fn phi(triple: Triple, marker: usize, word: &[bool]) -> SequentialGoal {
    let mut parts = Vec::with_capacity(2 * word.len() + 1);
    parts.push(BasicGoal::now(Predicate::action(marker)));
    for &bit in word {
        parts.push(BasicGoal::eventually(Predicate::pair(triple.state, triple.action)));
        let atom = if bit { Atom::StateIs(triple.next) } else { Atom::StateIsNot(triple.next) };
        parts.push(BasicGoal::next(Predicate::All(vec![atom])));
    }
    SequentialGoal::new(parts).expect("marker goal is present")
}

/// All words of length `n` with exactly `r` ones, lexicographic with 0 < 1.
pub fn words_with_weight(n: usize, r: usize) -> Vec<Vec<bool>> {
    fn go(n: usize, r: usize, prefix: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        let remaining = n - prefix.len();
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        let ones = prefix.iter().filter(|&&b| b).count();
        for bit in [false, true] {
            let ones_after = ones + usize::from(bit);
            if ones_after <= r && r - ones_after < remaining {
                prefix.push(bit);
                go(n, r, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    if r <= n {
        go(n, r, &mut Vec::with_capacity(n), &mut out);
    }
    out
}
