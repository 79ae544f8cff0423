//! Crossover picture for a stochastic agent on the chain world: the tails
//! `P(X <= k)`, `P(X > k)`, one sampled agent's answers, and which answers
//! the agent is forced into.

use std::collections::BTreeMap;
use std::io::Write;

use worldlens_core::agents::delta_agent;
use worldlens_core::extraction::{extract_stochastic, forced_margin, Probe};
use worldlens_core::mdp::builtin::{make_chain_world, ORIGIN, RIGHT};
use worldlens_core::prob::tails;
use worldlens_core::{DeltaConfig, DeltaMode, FamilyKind, Triple};

use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure4Params {
    pub p: f64,
    pub n: usize,
    pub delta: f64,
    pub draws: u64,
    /// Seed of the agent whose answers are drawn.
    pub seed: u64,
}

impl Default for Figure4Params {
    fn default() -> Self {
        Self { p: 0.35, n: 20, delta: 0.2, draws: 200, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Forced {
    A,
    B,
    Free,
}

impl Forced {
    pub fn name(self) -> &'static str {
        match self {
            Forced::A => "a",
            Forced::B => "b",
            Forced::Free => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure4Row {
    pub k: i64,
    pub p_le: f64,
    pub p_gt: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub epsilon: f64,
    pub forced: Forced,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure4 {
    pub params: Figure4Params,
    pub epsilon: f64,
    pub rows: Vec<Figure4Row>,
    /// Half-way between the last `k` forced to `b` and the next one.
    pub boundary: f64,
    /// Crossover index over all draws.
    pub counts: BTreeMap<i64, usize>,
    pub majority: i64,
}

fn probe() -> Probe {
    Probe::new(Triple::new(ORIGIN, RIGHT, 3))
}

pub fn figure4(params: Figure4Params) -> Result<Figure4, HarnessError> {
    let Figure4Params { p, n, delta, draws, seed } = params;
    let world = make_chain_world(p, 0.5)?;
    let epsilon = forced_margin(delta);
    let run = |seed| {
        let agent = delta_agent(&world, DeltaConfig::mixed(delta, DeltaMode::RandomFeasible, seed))?;
        Ok::<_, HarnessError>(extract_stochastic(&agent, &probe(), n, delta)?)
    };

    let shown = run(seed)?;
    let mut rows = Vec::new();
    for record in &shown.transcript {
        let FamilyKind::XiK { k, .. } = record.kind else {
            continue;
        };
        let (p_le, p_gt) = tails(p, n, k);
        let forced = if p_gt - 0.5 > epsilon {
            Forced::B
        } else if p_le - 0.5 > epsilon {
            Forced::A
        } else {
            Forced::Free
        };
        rows.push(Figure4Row { k, p_le, p_gt, p_a: record.p_a, p_b: record.p_b, epsilon, forced });
    }
    let last_b = rows.iter().filter(|r| r.forced == Forced::B).map(|r| r.k).max().unwrap_or(-1);
    let boundary = last_b as f64 + 0.5;

    let mut counts = BTreeMap::new();
    for s in 0..draws {
        let estimate = run(s)?;
        let x = estimate.crossover.unwrap_or(-1);
        *counts.entry(x).or_insert(0) += 1;
    }
    let majority = counts.iter().max_by_key(|&(x, c)| (*c, -x)).map(|(&x, _)| x).unwrap_or(-1);
    Ok(Figure4 { params, epsilon, rows, boundary, counts, majority })
}

pub fn write_figure4<W: Write>(out: W, fig: &Figure4) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_writer(out);
    let io = |e: csv::Error| HarnessError::Io(std::io::Error::other(e.to_string()));
    writer.write_record(["k", "p_le", "p_gt", "p_a", "p_b", "epsilon", "forced"]).map_err(io)?;
    for r in &fig.rows {
        writer
            .write_record([
                r.k.to_string(),
                r.p_le.to_string(),
                r.p_gt.to_string(),
                r.p_a.to_string(),
                r.p_b.to_string(),
                r.epsilon.to_string(),
                r.forced.name().to_string(),
            ])
            .map_err(io)?;
    }
    let mut out = writer.into_inner().map_err(|e| HarnessError::Io(e.into_error()))?;
    let Figure4Params { p, n, delta, draws, seed } = fig.params;
    writeln!(out, "# p,{p}")?;
    writeln!(out, "# n,{n}")?;
    writeln!(out, "# delta,{delta}")?;
    writeln!(out, "# epsilon,{}", fig.epsilon)?;
    writeln!(out, "# boundary,{}", fig.boundary)?;
    writeln!(out, "# shown_seed,{seed}")?;
    writeln!(out, "# draws,{draws}")?;
    for (x, c) in &fig.counts {
        writeln!(out, "# crossover_{x},{c}")?;
    }
    writeln!(out, "# majority_crossover,{}", fig.majority)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scenario() {
        let fig = figure4(Figure4Params { draws: 40, ..Figure4Params::default() }).unwrap();
        assert_eq!(fig.epsilon, 0.125);
        assert_eq!(fig.boundary, 5.5);
        for r in &fig.rows {
            match r.forced {
                Forced::B => assert!(r.k <= 5 && r.p_b > r.p_a),
                Forced::A => assert!(r.k >= 6 && r.p_a > r.p_b),
                Forced::Free => assert!((6..=7).contains(&r.k)),
            }
        }
        assert!(fig.counts.keys().all(|x| (5..=7).contains(x)));
        assert_eq!(fig.counts.values().sum::<usize>(), 40);
    }

    #[test]
    fn writes_footer() {
        let fig = figure4(Figure4Params { draws: 5, ..Figure4Params::default() }).unwrap();
        let mut buf = Vec::new();
        write_figure4(&mut buf, &fig).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,p_le,p_gt,p_a,p_b,epsilon,forced\n"));
        assert!(text.contains("# epsilon,0.125\n"));
        assert!(text.contains("# boundary,5.5\n"));
    }
}
