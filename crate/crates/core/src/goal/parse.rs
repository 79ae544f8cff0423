//! Concrete syntax for goals.
//!
//! ```text
//! goal  := "FALSE" | seq ("|" seq)*
//! seq   := "<" basic ("," basic)* ">"
//! basic := ("NOW" | "NEXT" | "EV") "[" pred "]"
//! pred  := "*" | "{" [pair ("," pair)*] "}" | atom (("&" | ",") atom)*
//! atom  := ("S" | "A") ("=" | "!=") name
//! pair  := "(" state "," action ")"
//! ```
//!
//! Whitespace is insignificant. Names resolve against a world's name tables.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::ast::{Atom, BasicGoal, Goal, GoalError, Operator, Predicate, SequentialGoal};
use crate::mdp::World;

/// The name tables goals are written against.
#[derive(Debug, Clone, Copy)]
pub struct Names<'a> {
    pub states: &'a [String],
    pub actions: &'a [String],
}

impl<'a> From<&'a World> for Names<'a> {
    fn from(world: &'a World) -> Self {
        Names { states: world.state_names(), actions: world.action_names() }
    }
}

const RESERVED: &[char] = &['<', '>', '[', ']', '{', '}', '(', ')', ',', '|', '&', '=', '!', '*'];

struct Parser<'s, 'n> {
    text: &'s str,
    pos: usize,
    names: Names<'n>,
}

impl Parser<'_, '_> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, GoalError> {
        Err(GoalError::Syntax { pos: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), GoalError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.error(format!("expected `{token}`"))
        }
    }

    fn name(&mut self) -> Result<&str, GoalError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest.find(|c: char| c.is_whitespace() || RESERVED.contains(&c)).unwrap_or(rest.len());
        if len == 0 {
            return self.error("expected a name");
        }
        let start = self.pos;
        self.pos += len;
        Ok(&self.text[start..start + len])
    }

    fn state(&mut self) -> Result<usize, GoalError> {
        let states = self.names.states;
        let name = self.name()?;
        states.iter().position(|n| n == name).ok_or_else(|| GoalError::UnknownState(name.to_string()))
    }

    fn action(&mut self) -> Result<usize, GoalError> {
        let actions = self.names.actions;
        let name = self.name()?;
        actions.iter().position(|n| n == name).ok_or_else(|| GoalError::UnknownAction(name.to_string()))
    }

    fn goal(&mut self) -> Result<Goal, GoalError> {
        if self.eat("FALSE") {
            return Ok(Goal::never());
        }
        let mut disjuncts = vec![self.sequential()?];
        while self.eat("|") {
            disjuncts.push(self.sequential()?);
        }
        Ok(Goal::Disjunction(disjuncts))
    }

    fn sequential(&mut self) -> Result<SequentialGoal, GoalError> {
        self.expect("<")?;
        let mut parts = vec![self.basic()?];
        while self.eat(",") {
            parts.push(self.basic()?);
        }
        self.expect(">")?;
        SequentialGoal::new(parts)
    }

    fn basic(&mut self) -> Result<BasicGoal, GoalError> {
        // NEXT before NOW: both start with "N".
        let op = if self.eat("NEXT") {
            Operator::Next
        } else if self.eat("NOW") {
            Operator::Now
        } else if self.eat("EV") {
            Operator::Eventually
        } else {
            return self.error("expected NOW, NEXT or EV");
        };
        self.expect("[")?;
        let target = self.predicate()?;
        self.expect("]")?;
        Ok(BasicGoal { op, target })
    }

    fn predicate(&mut self) -> Result<Predicate, GoalError> {
        if self.eat("*") {
            return Ok(Predicate::All(Vec::new()));
        }
        if self.eat("{") {
            let mut pairs = BTreeSet::new();
            if !self.eat("}") {
                loop {
                    self.expect("(")?;
                    let s = self.state()?;
                    self.expect(",")?;
                    let a = self.action()?;
                    self.expect(")")?;
                    pairs.insert((s, a));
                    if self.eat("}") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            return Ok(Predicate::Pairs(pairs));
        }
        let mut atoms = vec![self.atom()?];
        while self.peek() == Some('&') || self.peek() == Some(',') {
            self.pos += 1;
            atoms.push(self.atom()?);
        }
        Ok(Predicate::All(atoms))
    }

    fn atom(&mut self) -> Result<Atom, GoalError> {
        let on_state = if self.eat("S") {
            true
        } else if self.eat("A") {
            false
        } else {
            return self.error("expected `S` or `A`");
        };
        let negated = if self.eat("!=") {
            true
        } else {
            self.expect("=")?;
            false
        };
        Ok(match (on_state, negated) {
            (true, false) => Atom::StateIs(self.state()?),
            (true, true) => Atom::StateIsNot(self.state()?),
            (false, false) => Atom::ActionIs(self.action()?),
            (false, true) => Atom::ActionIsNot(self.action()?),
        })
    }
}

pub fn parse_goal<'n>(text: &str, names: impl Into<Names<'n>>) -> Result<Goal, GoalError> {
    let mut parser = Parser { text, pos: 0, names: names.into() };
    let goal = parser.goal()?;
    parser.skip_ws();
    if parser.pos != text.len() {
        return parser.error("trailing input");
    }
    Ok(goal)
}

fn write_predicate(out: &mut String, pred: &Predicate, names: Names) {
    match pred {
        Predicate::All(atoms) if atoms.is_empty() => out.push('*'),
        Predicate::All(atoms) => {
            for (i, atom) in atoms.iter().enumerate() {
                if i > 0 {
                    out.push_str(" & ");
                }
                let _ = match *atom {
                    Atom::StateIs(s) => write!(out, "S={}", names.states[s]),
                    Atom::StateIsNot(s) => write!(out, "S!={}", names.states[s]),
                    Atom::ActionIs(a) => write!(out, "A={}", names.actions[a]),
                    Atom::ActionIsNot(a) => write!(out, "A!={}", names.actions[a]),
                };
            }
        }
        Predicate::Pairs(pairs) => {
            out.push('{');
            for (i, &(s, a)) in pairs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "({},{})", names.states[s], names.actions[a]);
            }
            out.push('}');
        }
    }
}

pub fn format_sequential<'n>(goal: &SequentialGoal, names: impl Into<Names<'n>>) -> String {
    let names = names.into();
    let mut out = String::from("<");
    for (i, part) in goal.parts().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(match part.op {
            Operator::Now => "NOW[",
            Operator::Next => "NEXT[",
            Operator::Eventually => "EV[",
        });
        write_predicate(&mut out, &part.target, names);
        out.push(']');
    }
    out.push('>');
    out
}

/// Formats a goal; families are written out in full, subject to the size guard.
pub fn format_goal<'n>(goal: &Goal, names: impl Into<Names<'n>>) -> Result<String, GoalError> {
    let names = names.into();
    let disjuncts = goal.disjuncts()?;
    if disjuncts.is_empty() {
        return Ok("FALSE".into());
    }
    Ok(disjuncts.iter().map(|d| format_sequential(d, names)).collect::<Vec<_>>().join(" | "))
}
