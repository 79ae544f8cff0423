use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use worldlens_core::extraction::Method;
use worldlens_harness::commands::{cmd_extract, cmd_figure4, cmd_gen_world, cmd_sweep, cmd_validate};
use worldlens_harness::config::parse_method;
use worldlens_harness::figure4::Figure4Params;
use worldlens_harness::{AgentMode, ExperimentConfig, HarnessError, TripleSelection, WorldSource};

/// Recovers transition probabilities of a world by querying goal-conditioned agents.
#[derive(Parser)]
#[command(name = "worldlens", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a world is well formed and communicating.
    Validate(WorldArgs),
    /// Extract transitions and reconstruct the kernel.
    Extract(ExperimentArgs),
    /// Run an error-versus-n grid and fit its log-log slope.
    Sweep(ExperimentArgs),
    /// Tabulate the crossover picture for a stochastic agent.
    Figure4(Figure4Args),
    /// Write a random communicating world.
    GenWorld(GenWorldArgs),
}

#[derive(Args, Default)]
struct WorldArgs {
    /// World file.
    #[arg(long, conflicts_with = "builtin")]
    world: Option<PathBuf>,
    /// Builtin world: chain, fail or three-state.
    #[arg(long)]
    builtin: Option<String>,
    /// Builtin parameter; repeat for several.
    #[arg(long = "param")]
    params: Vec<f64>,
}

impl WorldArgs {
    fn source(&self) -> Option<WorldSource> {
        if let Some(path) = &self.world {
            return Some(WorldSource::File(path.clone()));
        }
        self.builtin.as_ref().map(|name| WorldSource::Builtin { name: name.clone(), params: self.params.clone() })
    }
}

#[derive(Args)]
struct ExperimentArgs {
    /// Config file of `key = value` lines; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    world: WorldArgs,
    /// t1, t2, t3, t4 or t4d.
    #[arg(long, value_parser = parse_method)]
    method: Option<Method>,
    /// Visit count; repeat for a grid.
    #[arg(long)]
    n: Vec<usize>,
    /// Suboptimality; repeat for a grid.
    #[arg(long)]
    delta: Vec<f64>,
    /// optimal, random or adversarial; repeat for several.
    #[arg(long)]
    agent: Vec<AgentMode>,
    /// Agent seed; repeat for several.
    #[arg(long)]
    seed: Vec<u64>,
    /// Transition `s,a,s'` by name or index; repeat for several. Default: all.
    #[arg(long)]
    triple: Vec<String>,
    /// CSV output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG plot output (sweep).
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Reconstructed world output (extract).
    #[arg(long)]
    kernel_out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn config(&self) -> Result<ExperimentConfig, HarnessError> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::parse(&std::fs::read_to_string(path)?)?,
            None => ExperimentConfig::default(),
        };
        if let Some(source) = self.world.source() {
            config.world = source;
        }
        if let Some(method) = self.method {
            config.method = method;
        }
        if !self.n.is_empty() {
            config.n_grid.clone_from(&self.n);
        }
        if !self.delta.is_empty() {
            config.delta_grid.clone_from(&self.delta);
        }
        if !self.agent.is_empty() {
            config.agents.clone_from(&self.agent);
        }
        if !self.seed.is_empty() {
            config.seeds.clone_from(&self.seed);
        }
        if !self.triple.is_empty() {
            config.triples = TripleSelection::Listed(self.triple.clone());
        }
        config.out = self.out.clone().or(config.out);
        config.plot = self.plot.clone().or(config.plot);
        config.kernel_out = self.kernel_out.clone().or(config.kernel_out);
        Ok(config)
    }
}

#[derive(Args)]
struct Figure4Args {
    #[arg(long, default_value_t = 0.35)]
    p: f64,
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long, default_value_t = 0.2)]
    delta: f64,
    /// Number of random feasible agents counted.
    #[arg(long, default_value_t = 200)]
    draws: u64,
    /// Seed of the agent whose answers are tabulated.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenWorldArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    states: usize,
    #[arg(long, default_value_t = 2)]
    actions: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    let (stdout, stderr) = (io::stdout(), io::stderr());
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    match cli.command {
        Command::Validate(args) => {
            let source =
                args.source().ok_or_else(|| HarnessError::Refused("validate needs --world or --builtin".into()))?;
            cmd_validate(&source, &mut out)
        }
        Command::Extract(args) => cmd_extract(&args.config()?, &mut out, &mut err),
        Command::Sweep(args) => cmd_sweep(&args.config()?, &mut out, &mut err),
        Command::Figure4(a) => {
            let params = Figure4Params { p: a.p, n: a.n, delta: a.delta, draws: a.draws, seed: a.seed };
            cmd_figure4(params, a.out.as_deref(), &mut out)
        }
        Command::GenWorld(a) => cmd_gen_world(a.seed, a.states, a.actions, a.out.as_deref(), &mut out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(io::stderr(), "error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
