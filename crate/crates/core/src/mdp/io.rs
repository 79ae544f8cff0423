//! Line-oriented world files.
//!
//! ```text
//! # comment
//! states 3 x y z
//! actions 2 go stay
//! observations 2 near far
//! t x go y 1.0
//! o x near 0.5
//! ```
//!
//! Names after a count are optional and default to `s0…`, `a0…`, `o0…`.
//! Transition and observation lines accept names or indices. Unlisted
//! entries are zero.

use std::fmt::Write as _;

use thiserror::Error;

use super::observable::ObservableWorld;
use super::validate::{validate_kernel, ValidationReport};
use super::world::{World, WorldError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
    #[error(transparent)]
    World(#[from] WorldError),
}

/// A world file as read, before any stochasticity checks.
#[derive(Debug, Clone, PartialEq)]
pub struct RawWorld {
    pub state_names: Vec<String>,
    pub action_names: Vec<String>,
    pub kernel: Vec<f64>,
    pub observations: Option<RawObservations>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawObservations {
    pub names: Vec<String>,
    pub kernel: Vec<f64>,
}

impl RawWorld {
    pub fn n_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn n_actions(&self) -> usize {
        self.action_names.len()
    }

    pub fn validate(&self) -> ValidationReport {
        let obs = self.observations.as_ref().map(|o| (o.names.len(), o.kernel.as_slice()));
        validate_kernel(self.n_states(), self.n_actions(), &self.kernel, obs)
    }

    pub fn to_world(&self) -> Result<World, WorldError> {
        World::new(self.n_states(), self.n_actions(), self.kernel.clone())?
            .with_names(self.state_names.clone(), self.action_names.clone())
    }

    /// The world with its observation kernel, or the fully observable
    /// version when the file declares none.
    pub fn to_observable(&self) -> Result<ObservableWorld, WorldError> {
        let base = self.to_world()?;
        match &self.observations {
            None => Ok(ObservableWorld::fully_observable(base)),
            Some(o) => {
                ObservableWorld::new(base, o.names.len(), o.kernel.clone())?.with_observation_names(o.names.clone())
            }
        }
    }
}

fn resolve(token: &str, names: &[String], what: &str, line: usize) -> Result<usize, ParseError> {
    names
        .iter()
        .position(|n| n == token)
        .or_else(|| token.parse::<usize>().ok().filter(|&i| i < names.len()))
        .ok_or_else(|| ParseError::Syntax { line, message: format!("unknown {what} `{token}`") })
}

fn parse_prob(token: &str, line: usize) -> Result<f64, ParseError> {
    token
        .parse::<f64>()
        .ok()
        .filter(|p| p.is_finite())
        .ok_or_else(|| ParseError::Syntax { line, message: format!("bad probability `{token}`") })
}

fn header(rest: &[&str], default_prefix: &str, line: usize) -> Result<Vec<String>, ParseError> {
    let syntax = |message: String| ParseError::Syntax { line, message };
    let count: usize = rest.first().and_then(|c| c.parse().ok()).ok_or_else(|| syntax("expected a count".into()))?;
    let names = &rest[1..];
    if names.is_empty() {
        return Ok((0..count).map(|i| format!("{default_prefix}{i}")).collect());
    }
    if names.len() != count {
        return Err(syntax(format!("expected {count} names, got {}", names.len())));
    }
    Ok(names.iter().map(|s| s.to_string()).collect())
}

pub fn parse_world(text: &str) -> Result<RawWorld, ParseError> {
    let mut states: Option<Vec<String>> = None;
    let mut actions: Option<Vec<String>> = None;
    let mut observations: Option<Vec<String>> = None;
    let mut transitions = Vec::new();
    let mut emissions = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&keyword, rest)) = tokens.split_first() else {
            continue;
        };
        let syntax = |message: String| ParseError::Syntax { line, message };
        match keyword {
            "states" => states = Some(header(rest, "s", line)?),
            "actions" => actions = Some(header(rest, "a", line)?),
            "observations" => observations = Some(header(rest, "o", line)?),
            "t" if rest.len() == 4 => transitions.push((line, [rest[0], rest[1], rest[2]], rest[3])),
            "o" if rest.len() == 3 => emissions.push((line, [rest[0], rest[1]], rest[2])),
            "t" | "o" => return Err(syntax(format!("wrong number of fields for `{keyword}`"))),
            other => return Err(syntax(format!("unknown directive `{other}`"))),
        }
    }

    let states = states.ok_or(ParseError::MissingHeader("states"))?;
    let actions = actions.ok_or(ParseError::MissingHeader("actions"))?;
    if states.is_empty() || actions.is_empty() {
        return Err(WorldError::Empty.into());
    }
    let (n_s, n_a) = (states.len(), actions.len());
    let mut kernel = vec![0.0; n_s * n_a * n_s];
    for (line, [s, a, t], p) in transitions {
        let s = resolve(s, &states, "state", line)?;
        let a = resolve(a, &actions, "action", line)?;
        let t = resolve(t, &states, "state", line)?;
        kernel[(s * n_a + a) * n_s + t] += parse_prob(p, line)?;
    }

    let observations = match observations {
        None if emissions.is_empty() => None,
        None => return Err(ParseError::MissingHeader("observations")),
        Some(names) => {
            let n_o = names.len();
            let mut obs = vec![0.0; n_s * n_o];
            for (line, [s, o], p) in emissions {
                let s = resolve(s, &states, "state", line)?;
                let o = resolve(o, &names, "observation", line)?;
                obs[s * n_o + o] += parse_prob(p, line)?;
            }
            Some(RawObservations { names, kernel: obs })
        }
    };

    Ok(RawWorld { state_names: states, action_names: actions, kernel, observations })
}

fn write_header(out: &mut String, world: &World) {
    let _ = writeln!(out, "states {} {}", world.n_states(), world.state_names().join(" "));
    let _ = writeln!(out, "actions {} {}", world.n_actions(), world.action_names().join(" "));
}

fn write_transitions(out: &mut String, world: &World) {
    for s in 0..world.n_states() {
        for a in 0..world.n_actions() {
            for (t, p) in world.successors(s, a) {
                let _ =
                    writeln!(out, "t {} {} {} {}", world.state_name(s), world.action_name(a), world.state_name(t), p);
            }
        }
    }
}

pub fn format_world(world: &World) -> String {
    let mut out = String::new();
    write_header(&mut out, world);
    write_transitions(&mut out, world);
    out
}

pub fn format_observable_world(world: &ObservableWorld) -> String {
    let base = world.base();
    let mut out = String::new();
    write_header(&mut out, base);
    let _ = writeln!(out, "observations {} {}", world.n_observations(), world.observation_names().join(" "));
    write_transitions(&mut out, base);
    for s in 0..base.n_states() {
        for (o, &p) in world.obs_row(s).iter().enumerate() {
            if p > 0.0 {
                let _ = writeln!(out, "o {} {} {}", base.state_name(s), world.observation_name(o), p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::builtin::{make_chain_world, make_three_state_world};

    #[test]
    fn chain_round_trip() {
        let w = make_chain_world(0.35, 0.5).unwrap();
        let text = format_world(&w);
        let back = parse_world(&text).unwrap().to_world().unwrap();
        assert_eq!(back, w);
        assert_eq!(format_world(&back), text);
    }

    #[test]
    fn observable_round_trip() {
        let w = make_three_state_world();
        let back = parse_world(&format_observable_world(&w)).unwrap().to_observable().unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn default_names_and_indices() {
        let raw = parse_world("states 2\nactions 1 # one action\nt 0 0 1 1\nt s1 a0 0 1.0\n").unwrap();
        assert_eq!(raw.state_names, vec!["s0", "s1"]);
        assert!(raw.validate().is_valid());
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_world("states 2\nactions 1\nt 0 0 5 1\n").unwrap_err();
        assert_eq!(err, ParseError::Syntax { line: 3, message: "unknown state `5`".into() });
        assert_eq!(parse_world("actions 1\n").unwrap_err(), ParseError::MissingHeader("states"));
        assert!(matches!(parse_world("states 1\nactions 1\nq\n"), Err(ParseError::Syntax { line: 3, .. })));
    }

    #[test]
    fn defective_rows_survive_parsing_for_validation() {
        let raw = parse_world("states 2\nactions 1\nt 0 0 1 0.5\nt 1 0 0 1\n").unwrap();
        assert!(!raw.validate().is_valid());
        assert!(raw.to_world().is_err());
    }
}
