//! Runs grids of extraction cells in a work pool.

use std::fmt::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use worldlens_core::agents::{delta_agent, random_walk_agent};
use worldlens_core::extraction::{extract, Estimate, Method, Probe};
use worldlens_core::{Agent, DeltaConfig, DeltaMode, ObservableWorld, ProbeStart, Triple};

use crate::config::{check_delta, AgentMode, ExperimentConfig};
use crate::error::HarnessError;
use crate::worlds::{triple_name, LoadedWorld};

pub const THREADS_VAR: &str = "WORLDLENS_THREADS";

/// One extraction run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub triple: Triple,
    pub method: Method,
    pub n: usize,
    pub delta: f64,
    pub mode: AgentMode,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub world: String,
    pub triple: String,
    pub method: Method,
    pub n: usize,
    pub delta: f64,
    pub agent: AgentMode,
    pub seed: u64,
    pub p_true: f64,
    pub p_hat: f64,
    pub abs_error: f64,
    pub bound_at_true: f64,
    pub bound_holds: bool,
    pub queries: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub cell: Cell,
    pub row: SweepRow,
    pub estimate: Estimate,
}

fn delta_mode(mode: AgentMode) -> DeltaMode {
    match mode {
        AgentMode::Optimal => DeltaMode::Optimal,
        AgentMode::Random => DeltaMode::RandomFeasible,
        AgentMode::Adversarial => DeltaMode::Adversarial,
    }
}

/// The synthesized agent a method is run against: point-mass answers for
/// the deterministic methods, mixed answers for the stochastic ones, and an
/// observation-based agent for the partially observable method.
pub fn build_agent(
    world: &ObservableWorld,
    method: Method,
    mode: AgentMode,
    delta: f64,
    seed: u64,
) -> Result<Box<dyn Agent>, HarnessError> {
    let mode = delta_mode(mode);
    Ok(match method {
        Method::Deterministic | Method::Width2Exact | Method::Width2Delta => {
            Box::new(delta_agent(world.base(), DeltaConfig::point_mass(delta, mode, seed))?)
        }
        Method::Stochastic => Box::new(delta_agent(world.base(), DeltaConfig::mixed(delta, mode, seed))?),
        Method::Pomdp => Box::new(random_walk_agent(world, DeltaConfig::mixed(delta, mode, seed))?),
    })
}

/// Most likely observation of a state; ties go to the lower index.
pub fn likeliest_observation(world: &ObservableWorld, state: usize) -> usize {
    let row = world.obs_row(state);
    (0..row.len()).fold(0, |best, o| if row[o] > row[best] { o } else { best })
}

pub fn probe_for(world: &ObservableWorld, method: Method, triple: Triple) -> Probe {
    let probe = Probe::new(triple);
    match method {
        Method::Pomdp => probe.with_start(ProbeStart::Observation(likeliest_observation(world, triple.state))),
        _ => probe,
    }
}

/// Checks everything a cell needs before any run starts.
pub fn check_cell(world: &ObservableWorld, cell: &Cell) -> Result<(), HarnessError> {
    if world.base().n_actions() < 2 {
        return Err(HarnessError::Refused("dichotomy goals need at least two actions".into()));
    }
    check_delta(cell.method, cell.delta)?;
    let min = if matches!(cell.method, Method::Deterministic | Method::Width2Exact) { 2 } else { 1 };
    if cell.n < min {
        return Err(HarnessError::Refused(format!("method {} needs n >= {min}, got {}", cell.method, cell.n)));
    }
    let (n_s, n_a) = (world.base().n_states(), world.base().n_actions());
    let t = cell.triple;
    if t.state >= n_s || t.next >= n_s || t.action >= n_a {
        return Err(HarnessError::Refused(format!("triple {t:?} outside the world")));
    }
    Ok(())
}

/// Cells in sorted order: triple, n, delta, agent, seed. Only the random
/// agent is repeated over seeds.
pub fn plan_cells(config: &ExperimentConfig, triples: &[Triple]) -> Vec<Cell> {
    let mut triples = triples.to_vec();
    triples.sort();
    let mut cells = Vec::new();
    for &triple in &triples {
        for &n in &config.n_grid {
            for &delta in &config.delta_grid {
                for &mode in &config.agents {
                    let seeds = if mode == AgentMode::Random { &config.seeds[..] } else { &config.seeds[..1] };
                    for &seed in seeds {
                        cells.push(Cell { triple, method: config.method, n, delta, mode, seed });
                    }
                }
            }
        }
    }
    cells
}

pub fn run_cell(world: &LoadedWorld, cell: &Cell) -> Result<CellResult, HarnessError> {
    let agent = build_agent(&world.world, cell.method, cell.mode, cell.delta, cell.seed)?;
    let probe = probe_for(&world.world, cell.method, cell.triple);
    let started = Instant::now();
    let estimate = extract(agent.as_ref(), &probe, cell.method, cell.n, cell.delta)?;
    let wall_time = started.elapsed();
    let t = cell.triple;
    let p_true = world.base().prob(t.state, t.action, t.next);
    let abs_error = (estimate.p_hat - p_true).abs();
    let bound_at_true = estimate.bound_at(p_true);
    let row = SweepRow {
        world: world.id.clone(),
        triple: triple_name(&t, world.base()),
        method: cell.method,
        n: cell.n,
        delta: cell.delta,
        agent: cell.mode,
        seed: cell.seed,
        p_true,
        p_hat: estimate.p_hat,
        abs_error,
        bound_at_true,
        bound_holds: abs_error <= bound_at_true,
        queries: estimate.transcript.len(),
        wall_time,
    };
    Ok(CellResult { cell: *cell, row, estimate })
}

/// A pool sized by `WORLDLENS_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool, HarnessError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_VAR) {
        let threads: usize =
            raw.parse().ok().filter(|&t| t > 0).ok_or_else(|| {
                HarnessError::Refused(format!("{THREADS_VAR} must be a positive integer, got `{raw}`"))
            })?;
        builder = builder.num_threads(threads);
    }
    builder.build().map_err(|e| HarnessError::Pool(e.to_string()))
}

/// Runs every cell; results come back in cell order whatever the
/// completion order.
pub fn run_cells(world: &LoadedWorld, cells: &[Cell]) -> Result<Vec<CellResult>, HarnessError> {
    for cell in cells {
        check_cell(&world.world, cell)?;
    }
    let pool = thread_pool()?;
    pool.install(|| cells.par_iter().map(|cell| run_cell(world, cell)).collect())
}

/// Diagnostic dump of a run: the row and every query answered.
pub fn dump_transcript(result: &CellResult) -> String {
    let r = &result.row;
    let mut out = format!(
        "{} {} method={} n={} delta={} agent={} seed={}: p_true={} p_hat={} error={} bound={}\n",
        r.world, r.triple, r.method, r.n, r.delta, r.agent, r.seed, r.p_true, r.p_hat, r.abs_error, r.bound_at_true
    );
    for (i, q) in result.estimate.transcript.iter().enumerate() {
        let _ = writeln!(out, "  #{i} {:?}: p_a={} p_b={} rest={}", q.kind, q.p_a, q.p_b, q.remainder);
    }
    out
}

/// Largest error at each `n`, in increasing `n`.
pub fn worst_case_by_n(rows: &[SweepRow]) -> Vec<(usize, f64)> {
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    ns.into_iter().map(|n| (n, rows.iter().filter(|r| r.n == n).map(|r| r.abs_error).fold(0.0, f64::max))).collect()
}

/// Least-squares slope of `log y` against `log x`. `None` when fewer than
/// two distinct `x` or some `y` is not positive.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::WorldSource;
    use crate::worlds::load_world;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [25.0, 50.0, 100.0, 200.0].iter().map(|&n: &f64| (n, 3.0 / n.sqrt())).collect();
        assert!((loglog_slope(&pts).unwrap() + 0.5).abs() < 1e-12);
        assert_eq!(loglog_slope(&[(10.0, 0.1), (20.0, 0.0)]), None);
        assert_eq!(loglog_slope(&[(10.0, 0.1)]), None);
    }

    #[test]
    fn plans_in_sorted_order() {
        let config = ExperimentConfig {
            n_grid: vec![20, 40],
            agents: vec![AgentMode::Random, AgentMode::Adversarial],
            seeds: vec![1, 2, 3],
            ..ExperimentConfig::default()
        };
        let cells = plan_cells(&config, &[Triple::new(2, 1, 3), Triple::new(0, 0, 0)]);
        assert_eq!(cells.len(), 2 * 2 * (3 + 1));
        assert_eq!(cells[0].triple, Triple::new(0, 0, 0));
    }

    #[test]
    fn runs_are_deterministic_across_pool_sizes() {
        let world = load_world(&WorldSource::Builtin { name: "chain".into(), params: vec![] }).unwrap();
        let config = ExperimentConfig {
            n_grid: vec![30, 60],
            delta_grid: vec![0.2],
            agents: vec![AgentMode::Random, AgentMode::Adversarial],
            seeds: vec![4, 5],
            ..ExperimentConfig::default()
        };
        let cells = plan_cells(&config, &[Triple::new(2, 1, 3), Triple::new(2, 1, 2)]);
        let serial: Vec<SweepRow> = cells.iter().map(|c| run_cell(&world, c).unwrap().row).collect();
        let parallel = run_cells(&world, &cells).unwrap();
        for (a, b) in serial.iter().zip(&parallel) {
            assert_eq!((a.p_hat, a.bound_holds, &a.triple), (b.row.p_hat, b.row.bound_holds, &b.row.triple));
            assert!(b.row.bound_holds, "{}", dump_transcript(b));
        }
    }

    #[test]
    fn observation_start_is_the_likeliest() {
        let world = load_world(&WorldSource::Builtin { name: "fail".into(), params: vec![0.9] }).unwrap();
        assert_eq!(likeliest_observation(&world.world, 2), 5);
        let world = load_world(&WorldSource::Builtin { name: "fail".into(), params: vec![0.3] }).unwrap();
        assert_eq!(likeliest_observation(&world.world, 2), 2);
    }
}
