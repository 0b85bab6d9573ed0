use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use votegame_experiments::config::{parse_grid, ConfigValues, TargetChoice};
use votegame_experiments::sweeps::run_experiment;
use votegame_experiments::{parse_config, ExperimentKind, Request};

/// Voting-game experiments: Monte Carlo sweeps and equilibrium reports.
#[derive(Debug, Parser)]
#[command(name = "votegame", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one configuration; writes the summary row and a per-game file.
    Run(Common),
    /// Per-stage attack probabilities and the voting probability of a fresh game.
    Equilibrium(Common),
    /// Outcomes against the benefit b.
    SweepBenefit(Common),
    /// Outcomes against the attack probability q, one file per mu.
    SweepAttack(Common),
    /// Outcomes against the detection rate alpha, one file per p_m.
    SweepAlpha(Common),
    /// Uncertainty-aware nodes against nodes assuming alpha=1, beta=0, q=1, over mu.
    CompareUncertainty(Common),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Target {
    Malicious,
    Benign,
    Random,
}

#[derive(Debug, Clone)]
struct Grid(Vec<f64>);

fn parse_grid_arg(text: &str) -> Result<Grid, String> {
    parse_grid(text).map(Grid)
}

#[derive(Debug, Args)]
struct Common {
    /// Flat TOML file with parameter values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    iterations: Option<u64>,
    /// Output CSV path; multi-series runs add a suffix per series.
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    /// Comma-separated x-axis values.
    #[arg(long, value_parser = parse_grid_arg)]
    grid: Option<Grid>,
    /// Comma-separated series values (mu for sweep-attack, p_m for sweep-alpha).
    #[arg(long, value_parser = parse_grid_arg)]
    series: Option<Grid>,
    #[arg(long, value_enum)]
    target: Option<Target>,

    #[arg(long)]
    w: Option<f64>,
    #[arg(long)]
    c_a: Option<f64>,
    #[arg(long)]
    c_m: Option<f64>,
    #[arg(long)]
    c_v: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    c_gm: Option<f64>,
    #[arg(long)]
    c_gb: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    p_m: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    n_th: Option<u32>,
    #[arg(long, alias = "q")]
    q_attack: Option<f64>,
}

impl Common {
    fn into_request(self) -> Request {
        Request {
            config_path: self.config,
            overrides: ConfigValues {
                w: self.w,
                c_a: self.c_a,
                c_m: self.c_m,
                c_v: self.c_v,
                b: self.b,
                c_gm: self.c_gm,
                c_gb: self.c_gb,
                alpha: self.alpha,
                beta: self.beta,
                mu: self.mu,
                p_m: self.p_m,
                lambda: self.lambda,
                n: self.n,
                n_th: self.n_th,
                q_attack: self.q_attack,
                target_is_malicious: None,
                seed: self.seed,
            },
            target: self.target.map(|t| match t {
                Target::Malicious => TargetChoice::Malicious,
                Target::Benign => TargetChoice::Benign,
                Target::Random => TargetChoice::Random,
            }),
            iterations: self.iterations,
            grid: self.grid.map(|g| g.0),
            companion_grid: self.series.map(|g| g.0),
            output_path: self.out,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common) = match cli.command {
        Command::Run(c) => (ExperimentKind::SingleRun, c),
        Command::Equilibrium(c) => (ExperimentKind::EquilibriumReport, c),
        Command::SweepBenefit(c) => (ExperimentKind::SweepBenefit, c),
        Command::SweepAttack(c) => (ExperimentKind::SweepAttack, c),
        Command::SweepAlpha(c) => (ExperimentKind::SweepAlpha, c),
        Command::CompareUncertainty(c) => (ExperimentKind::CompareUncertainty, c),
    };
    let result = parse_config(kind, common.into_request()).and_then(|spec| run_experiment(&spec));
    match result {
        Ok(paths) => {
            for path in paths {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
