//! Subcommand bodies. Each writes its report to `out`, diagnostics to
//! `err`, and signals failures through the returned error.

use std::io::Write;
use std::path::Path;

use worldlens_core::extraction::KernelEstimate;
use worldlens_core::mdp::generate::random_communicating_world;
use worldlens_core::mdp::io::format_world;
use worldlens_core::Triple;

use crate::config::{AgentMode, ExperimentConfig, TripleSelection, WorldSource};
use crate::error::HarnessError;
use crate::figure4::{figure4, write_figure4, Figure4Params};
use crate::output::{write_files, write_rows};
use crate::plot::{loglog_svg, Series};
use crate::sweep::{dump_transcript, loglog_slope, plan_cells, run_cells, worst_case_by_n, CellResult, SweepRow};
use crate::worlds::{all_triples, format_report, load_world, resolve_triple, LoadedWorld};

pub fn cmd_validate(source: &WorldSource, out: &mut dyn Write) -> Result<(), HarnessError> {
    let world = load_world(source)?;
    let report = world.base().validate();
    writeln!(out, "{}", format_report(&report, world.base().state_names(), world.base().action_names()))?;
    Ok(())
}

fn selected_triples(config: &ExperimentConfig, world: &LoadedWorld) -> Result<Vec<Triple>, HarnessError> {
    match &config.triples {
        TripleSelection::All => Ok(all_triples(world.base())),
        TripleSelection::Listed(specs) => specs.iter().map(|s| resolve_triple(s, world.base())).collect(),
    }
}

fn run(config: &ExperimentConfig) -> Result<(LoadedWorld, Vec<CellResult>), HarnessError> {
    config.check()?;
    let world = load_world(&config.world)?;
    let triples = selected_triples(config, &world)?;
    let cells = plan_cells(config, &triples);
    let results = run_cells(&world, &cells)?;
    Ok((world, results))
}

fn emit_rows(
    path: Option<&Path>,
    rows: &[SweepRow],
    summary: &[(String, String)],
    out: &mut dyn Write,
) -> Result<(), HarnessError> {
    match path {
        Some(path) => {
            let timing = write_files(path, rows, summary)?;
            writeln!(out, "wrote {} rows to {} (timing in {})", rows.len(), path.display(), timing.display())?;
        }
        None => write_rows(&mut *out, rows, summary)?,
    }
    Ok(())
}

/// Dumps every violating run and turns them into an error.
fn check_violations(results: &[CellResult], err: &mut dyn Write) -> Result<(), HarnessError> {
    let bad: Vec<&CellResult> = results.iter().filter(|r| !r.row.bound_holds).collect();
    for r in &bad {
        write!(err, "{}", dump_transcript(r))?;
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::BoundViolation { count: bad.len() })
    }
}

fn violation_summary(rows: &[SweepRow]) -> (String, String) {
    ("violations".into(), rows.iter().filter(|r| !r.bound_holds).count().to_string())
}

/// Estimates of the first grid point, as a kernel. Only complete when all
/// triples were extracted.
pub fn kernel_from(config: &ExperimentConfig, world: &LoadedWorld, results: &[CellResult]) -> KernelEstimate {
    let first = |r: &&CellResult| {
        r.cell.n == config.n_grid[0]
            && r.cell.delta == config.delta_grid[0]
            && r.cell.mode == config.agents[0]
            && r.cell.seed == config.seeds[0]
    };
    KernelEstimate::from_estimates(
        world.base().n_states(),
        world.base().n_actions(),
        results.iter().filter(first).map(|r| (r.cell.triple, r.estimate.clone())),
    )
}

pub fn cmd_extract(config: &ExperimentConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), HarnessError> {
    let (world, results) = run(config)?;
    let rows: Vec<SweepRow> = results.iter().map(|r| r.row.clone()).collect();
    let mut kernel = kernel_from(config, &world, &results);
    let complete = kernel.len() == world.base().kernel().len();
    let mut summary = vec![violation_summary(&rows)];
    if complete {
        let within = kernel.iter().filter(|(t, e)| e.holds_at(world.base().prob(t.state, t.action, t.next))).count();
        let normalized = kernel.normalize().to_vec();
        let n_s = world.base().n_states();
        let worst_row = normalized.chunks(n_s).map(|row| (row.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max);
        let worst_entry = normalized.iter().zip(world.base().kernel()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        summary.push(("kernel_entries_within_bound".into(), format!("{within}/{}", kernel.len())));
        summary.push(("kernel_max_row_sum_error".into(), worst_row.to_string()));
        summary.push(("kernel_max_abs_error".into(), worst_entry.to_string()));
        if let Some(path) = &config.kernel_out {
            let names = (world.base().state_names().to_vec(), world.base().action_names().to_vec());
            let estimated = kernel.to_world()?.with_names(names.0, names.1)?;
            std::fs::write(path, format_world(&estimated))?;
        }
    } else if config.kernel_out.is_some() {
        return Err(HarnessError::Refused("kernel output needs every triple extracted (triple = all)".into()));
    }
    emit_rows(config.out.as_deref(), &rows, &summary, out)?;
    check_violations(&results, err)
}

pub fn cmd_sweep(config: &ExperimentConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), HarnessError> {
    let (world, results) = run(config)?;
    let rows: Vec<SweepRow> = results.iter().map(|r| r.row.clone()).collect();
    let mut summary = vec![violation_summary(&rows)];
    let mut curves: Vec<(AgentMode, Vec<(f64, f64)>)> = Vec::new();
    for &mode in &config.agents {
        let own: Vec<SweepRow> = rows.iter().filter(|r| r.agent == mode).cloned().collect();
        let worst: Vec<(f64, f64)> = worst_case_by_n(&own).into_iter().map(|(n, e)| (n as f64, e)).collect();
        let slope = loglog_slope(&worst).map_or_else(|| "none".to_string(), |s| s.to_string());
        summary.push((format!("slope_{mode}"), slope));
        curves.push((mode, worst));
    }
    emit_rows(config.out.as_deref(), &rows, &summary, out)?;
    if let Some(path) = &config.plot {
        let series: Vec<Series> = curves.iter().map(|(m, pts)| Series { label: m.name(), points: pts }).collect();
        let title = format!("{} worst-case |error| on {}", config.method, world.id);
        std::fs::write(path, loglog_svg(&title, &series))?;
    }
    check_violations(&results, err)
}

pub fn cmd_figure4(params: Figure4Params, path: Option<&Path>, out: &mut dyn Write) -> Result<(), HarnessError> {
    let fig = figure4(params)?;
    match path {
        Some(path) => {
            write_figure4(std::fs::File::create(path)?, &fig)?;
            writeln!(out, "wrote {}; crossover counts {:?}", path.display(), fig.counts)?;
        }
        None => write_figure4(&mut *out, &fig)?,
    }
    Ok(())
}

pub fn cmd_gen_world(
    seed: u64,
    states: usize,
    actions: usize,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), HarnessError> {
    let text = format_world(&random_communicating_world(states, actions, seed)?);
    match path {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_config(extra: &str) -> ExperimentConfig {
        ExperimentConfig::parse(&format!("builtin = chain\nmethod = t2\nn = 100\ndelta = 0.1\n{extra}")).unwrap()
    }

    #[test]
    fn extract_prints_kernel_summary() {
        let config = chain_config("");
        let (mut out, mut err) = (Vec::new(), Vec::new());
        cmd_extract(&config, &mut out, &mut err).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 50);
        assert!(text.contains("# kernel_entries_within_bound,50/50\n"));
        assert!(err.is_empty());
    }

    #[test]
    fn sweep_reports_slope() {
        let config = chain_config("triple = s0,R,s1\nn = 200\nagent = adversarial");
        let mut out = Vec::new();
        cmd_sweep(&config, &mut out, &mut Vec::new()).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("# slope_adversarial,"));
    }

    #[test]
    fn validate_rejects_zero_chain() {
        let src = WorldSource::Builtin { name: "chain".into(), params: vec![0.0, 0.0] };
        assert_eq!(cmd_validate(&src, &mut Vec::new()).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn generated_worlds_are_stable() {
        let render = || {
            let mut out = Vec::new();
            cmd_gen_world(7, 6, 2, None, &mut out).unwrap();
            out
        };
        assert_eq!(render(), render());
    }
}
