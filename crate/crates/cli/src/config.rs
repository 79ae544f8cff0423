//! Flat `key = value` experiment configuration. Grid keys (`n`, `delta`,
//! `agent`, `seed`, `triple`, `param`) may repeat.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;
use worldlens_core::extraction::Method;

use crate::error::HarnessError;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WorldSource {
    File(PathBuf),
    Builtin { name: String, params: Vec<f64> },
    Random { seed: u64, states: usize, actions: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum TripleSelection {
    All,
    /// `s,a,s'` by name or index.
    Listed(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AgentMode {
    Optimal,
    Random,
    Adversarial,
}

impl AgentMode {
    pub fn name(self) -> &'static str {
        match self {
            AgentMode::Optimal => "optimal",
            AgentMode::Random => "random",
            AgentMode::Adversarial => "adversarial",
        }
    }
}

impl FromStr for AgentMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "optimal" => Ok(AgentMode::Optimal),
            "random" => Ok(AgentMode::Random),
            "adversarial" => Ok(AgentMode::Adversarial),
            _ => Err(format!("unknown agent mode `{s}` (optimal, random, adversarial)")),
        }
    }
}

impl fmt::Display for AgentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn parse_method(s: &str) -> Result<Method, String> {
    Method::from_name(s).ok_or_else(|| format!("unknown method `{s}` (t1, t2, t3, t4, t4d)"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub world: WorldSource,
    pub triples: TripleSelection,
    pub method: Method,
    pub n_grid: Vec<usize>,
    pub delta_grid: Vec<f64>,
    pub agents: Vec<AgentMode>,
    /// Seeds for the random agent; other modes use the first.
    pub seeds: Vec<u64>,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub kernel_out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            world: WorldSource::Builtin { name: "chain".into(), params: Vec::new() },
            triples: TripleSelection::All,
            method: Method::Stochastic,
            n_grid: vec![100],
            delta_grid: vec![0.1],
            agents: vec![AgentMode::Optimal],
            seeds: vec![0],
            out: None,
            plot: None,
            kernel_out: None,
        }
    }
}

fn value<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    raw.parse().map_err(|e| ConfigError { line, message: format!("bad value for `{key}`: {e}") })
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut config = Self::default();
        let mut seen: Vec<&str> = Vec::new();
        let mut builtin: Option<String> = None;
        let mut params = Vec::new();
        let mut random: [Option<u64>; 3] = [None; 3];
        let mut triples = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, val) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| ConfigError { line, message: "expected `key = value`".into() })?;
            // Grids given in the file replace the defaults.
            let first = !seen.contains(&key);
            if first {
                seen.push(match key {
                    "n" => "n",
                    "delta" => "delta",
                    "agent" => "agent",
                    "seed" => "seed",
                    _ => "other",
                });
            }
            match key {
                "world" => config.world = WorldSource::File(PathBuf::from(val)),
                "builtin" => builtin = Some(val.to_string()),
                "param" => params.push(value(line, key, val)?),
                "random_seed" => random[0] = Some(value(line, key, val)?),
                "random_states" => random[1] = Some(value(line, key, val)?),
                "random_actions" => random[2] = Some(value(line, key, val)?),
                "triple" if val == "all" => {}
                "triple" => triples.push(val.to_string()),
                "method" => config.method = parse_method(val).map_err(|message| ConfigError { line, message })?,
                "n" | "delta" | "agent" | "seed" => {
                    if first {
                        match key {
                            "n" => config.n_grid.clear(),
                            "delta" => config.delta_grid.clear(),
                            "agent" => config.agents.clear(),
                            _ => config.seeds.clear(),
                        }
                    }
                    match key {
                        "n" => config.n_grid.push(value(line, key, val)?),
                        "delta" => config.delta_grid.push(value(line, key, val)?),
                        "agent" => config.agents.push(value(line, key, val)?),
                        _ => config.seeds.push(value(line, key, val)?),
                    }
                }
                "out" => config.out = Some(PathBuf::from(val)),
                "plot" => config.plot = Some(PathBuf::from(val)),
                "kernel_out" => config.kernel_out = Some(PathBuf::from(val)),
                other => return Err(ConfigError { line, message: format!("unknown key `{other}`") }),
            }
        }

        if let Some(name) = builtin {
            config.world = WorldSource::Builtin { name, params };
        }
        match random {
            [None, None, None] => {}
            [Some(seed), Some(states), Some(actions)] => {
                config.world = WorldSource::Random { seed, states: states as usize, actions: actions as usize }
            }
            _ => {
                return Err(ConfigError {
                    line: 0,
                    message: "random worlds need random_seed, random_states and random_actions".into(),
                })
            }
        }
        if !triples.is_empty() {
            config.triples = TripleSelection::Listed(triples);
        }
        Ok(config)
    }

    /// Grid and precondition checks that do not need the world.
    pub fn check(&self) -> Result<(), HarnessError> {
        let empty = |what: &str| ConfigError { line: 0, message: format!("{what} grid is empty") };
        if self.n_grid.is_empty() {
            return Err(empty("n").into());
        }
        if self.delta_grid.is_empty() {
            return Err(empty("delta").into());
        }
        if self.agents.is_empty() {
            return Err(empty("agent").into());
        }
        if self.seeds.is_empty() {
            return Err(empty("seed").into());
        }
        for &delta in &self.delta_grid {
            check_delta(self.method, delta)?;
        }
        Ok(())
    }
}

/// Refuses deltas a method cannot work with.
pub fn check_delta(method: Method, delta: f64) -> Result<(), HarnessError> {
    if !(0.0..1.0).contains(&delta) {
        return Err(HarnessError::Refused(format!("delta must lie in [0, 1), got {delta}")));
    }
    if method.needs_small_delta() && delta >= 0.5 {
        return Err(HarnessError::Refused(format!(
            "method {method} needs delta < 1/2, got {delta}: a 1/2-optimal agent may answer every dichotomy with (1/2, 1/2)"
        )));
    }
    if method == Method::Width2Exact && delta != 0.0 {
        return Err(HarnessError::Refused(format!("method t4 needs an optimal agent (delta = 0), got {delta}")));
    }
    Ok(())
}
