use std::fmt::Write;

use worldlens_core::mdp::builtin::builtin;
use worldlens_core::mdp::generate::random_communicating_world;
use worldlens_core::mdp::io::parse_world;
use worldlens_core::mdp::{RowRef, ValidationReport};
use worldlens_core::{ObservableWorld, Triple, World};

use crate::config::WorldSource;
use crate::error::HarnessError;

#[derive(Debug, Clone)]
pub struct LoadedWorld {
    /// Short identifier written into every output row.
    pub id: String,
    pub world: ObservableWorld,
}

impl LoadedWorld {
    pub fn base(&self) -> &World {
        self.world.base()
    }
}

fn join(params: &[f64]) -> String {
    params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
}

/// Loads and validates a world; invalid or non-communicating worlds are
/// rejected with the validation report.
pub fn load_world(source: &WorldSource) -> Result<LoadedWorld, HarnessError> {
    let (id, world) = match source {
        WorldSource::File(path) => {
            let raw = parse_world(&std::fs::read_to_string(path)?)?;
            let report = raw.validate();
            if !report.is_valid() {
                return Err(HarnessError::Invalid(format_report(&report, &raw.state_names, &raw.action_names)));
            }
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            (stem, raw.to_observable()?)
        }
        WorldSource::Builtin { name, params } => (format!("{name}({})", join(params)), builtin(name, params)?),
        WorldSource::Random { seed, states, actions } => (
            format!("random({seed};{states}x{actions})"),
            ObservableWorld::fully_observable(random_communicating_world(*states, *actions, *seed)?),
        ),
    };
    if !world.base().is_communicating() {
        let report = ValidationReport { defects: Vec::new(), communicating: false };
        return Err(HarnessError::Invalid(format_report(
            &report,
            world.base().state_names(),
            world.base().action_names(),
        )));
    }
    Ok(LoadedWorld { id, world })
}

pub fn format_report(report: &ValidationReport, states: &[String], actions: &[String]) -> String {
    let mut out = String::new();
    for d in &report.defects {
        let row = match d.row {
            RowRef::Transition { state, action } => {
                format!("P(. | {}, {})", states[state], actions[action])
            }
            RowRef::Observation { state } => format!("O(. | {})", states[state]),
        };
        let range = if d.out_of_range { ", entry outside [0, 1]" } else { "" };
        let _ = writeln!(out, "row {row} sums to {}{range}", d.sum);
    }
    let _ = writeln!(out, "communicating: {}", if report.communicating { "yes" } else { "no" });
    let _ = write!(out, "valid: {}", if report.is_valid() { "yes" } else { "no" });
    out
}

fn lookup(token: &str, names: &[String], what: &str) -> Result<usize, HarnessError> {
    names
        .iter()
        .position(|n| n == token)
        .or_else(|| token.parse::<usize>().ok().filter(|&i| i < names.len()))
        .ok_or_else(|| HarnessError::Refused(format!("unknown {what} `{token}`")))
}

/// Parses `s,a,s'` with names or indices.
pub fn resolve_triple(text: &str, world: &World) -> Result<Triple, HarnessError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [s, a, t] = parts[..] else {
        return Err(HarnessError::Refused(format!("triple `{text}` is not of the form s,a,s'")));
    };
    Ok(Triple::new(
        lookup(s, world.state_names(), "state")?,
        lookup(a, world.action_names(), "action")?,
        lookup(t, world.state_names(), "state")?,
    ))
}

pub fn all_triples(world: &World) -> Vec<Triple> {
    let (n_s, n_a) = (world.n_states(), world.n_actions());
    (0..n_s).flat_map(|s| (0..n_a).flat_map(move |a| (0..n_s).map(move |t| Triple::new(s, a, t)))).collect()
}

pub fn triple_name(triple: &Triple, world: &World) -> String {
    format!("{},{},{}", world.state_name(triple.state), world.action_name(triple.action), world.state_name(triple.next))
}
