//! Experiment drivers. Every grid point reuses the base seed, so neighboring
//! points are compared on the same sequence of random draws.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use votegame_core::equilibrium::{
    alpha_lower_bound, attack_probability_stage, attacker_indifference, benefit_upper_bound,
    expected_utility_abstaining, expected_utility_voting, fresh_game_stages, solve,
    EquilibriumResult,
};
use votegame_core::simulator::{monte_carlo, trials, Belief, SweepResult, TrialRecord, VotingGameConfig};
use votegame_core::{payoff_matrix, stage_probability, vote_delta, GameParams};

use crate::config::{ExperimentKind, ExperimentSpec};
use crate::csv::{emit_csv, format_sig6, render_trials, write_file};
use crate::error::{ExperimentError, Result};

/// Runs the sweep at each value of `grid`, applying `set` to a copy of the base.
fn sweep(
    spec: &ExperimentSpec,
    base: &VotingGameConfig,
    name: &str,
    grid: &[f64],
    set: impl Fn(&mut VotingGameConfig, f64),
) -> Result<Vec<SweepResult>> {
    grid.iter()
        .map(|&value| {
            let mut config = *base;
            set(&mut config, value);
            config
                .params
                .validate()
                .and_then(|_| config.validate())
                .map_err(|e| ExperimentError::InvalidGrid(format!("{name} = {value}: {e}")))?;
            let mut result = monte_carlo(&config, spec.iterations)?;
            result.parameter_value = value;
            Ok(result)
        })
        .collect()
}

/// Outcome percentages against the benefit `b`.
pub fn run_benefit_sweep(spec: &ExperimentSpec) -> Result<Vec<SweepResult>> {
    sweep(spec, &spec.base, "b", &spec.sweep_grid, |c, b| c.params.b = b)
}

/// Outcome percentages against the attack probability `q`, one series per `mu`.
pub fn run_attack_sweep(spec: &ExperimentSpec) -> Result<Vec<(f64, Vec<SweepResult>)>> {
    spec.companion_grid
        .iter()
        .map(|&mu| {
            let mut base = spec.base;
            base.params.mu = mu;
            let rows = sweep(spec, &base, "q", &spec.sweep_grid, |c, q| c.q_attack = q)?;
            Ok((mu, rows))
        })
        .collect()
}

/// Outcome percentages against the detection rate `alpha`, one series per `p_m`.
pub fn run_alpha_sweep(spec: &ExperimentSpec) -> Result<Vec<(f64, Vec<SweepResult>)>> {
    spec.companion_grid
        .iter()
        .map(|&p_m| {
            let mut base = spec.base;
            base.params.p_m = p_m;
            let rows = sweep(spec, &base, "alpha", &spec.sweep_grid, |c, a| c.params.alpha = a)?;
            Ok((p_m, rows))
        })
        .collect()
}

/// Paired runs over `mu`: nodes reasoning with the true monitoring accuracy
/// and attack rate, and nodes that assume a perfect detector and
/// always-attacking malicious neighbors.
pub struct UncertaintyComparison {
    pub aware: Vec<SweepResult>,
    pub certain: Vec<SweepResult>,
}

pub fn run_uncertainty_comparison(spec: &ExperimentSpec) -> Result<UncertaintyComparison> {
    let aware = sweep(spec, &spec.base, "mu", &spec.sweep_grid, |c, mu| c.params.mu = mu)?;
    let certain_base = VotingGameConfig { belief: Some(Belief::CERTAIN), ..spec.base };
    let certain = sweep(spec, &certain_base, "mu", &spec.sweep_grid, |c, mu| c.params.mu = mu)?;
    Ok(UncertaintyComparison { aware, certain })
}

/// A single configuration: the summary row and every game.
pub fn run_single(spec: &ExperimentSpec) -> Result<(SweepResult, Vec<TrialRecord>)> {
    let summary = monte_carlo(&spec.base, spec.iterations)?;
    Ok((summary, trials(&spec.base, spec.iterations)))
}

/// One stage of a fresh game as seen by the equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageRow {
    pub stage: u32,
    pub n_l: u32,
    pub n_r: u32,
    pub p_k: f64,
    pub delta: f64,
    pub q_k_raw: f64,
    pub q_k: f64,
    pub interior: bool,
    /// Utilities at `q_k_raw`; equal whenever the stage is interior.
    pub eu_voting: f64,
    pub eu_abstaining: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport {
    pub params: GameParams,
    pub stages: Vec<StageRow>,
    pub result: EquilibriumResult,
    /// Vote impact at the opening stage, which `s*` is evaluated at.
    pub opening_delta: f64,
    pub attacker_residual: f64,
    /// `None` when `mu >= 0.5`.
    pub benefit_bound: Option<f64>,
    pub alpha_bound: f64,
}

/// Equilibrium over the stages of a fresh game, with `s*` taken at the
/// opening stage.
pub fn equilibrium_report(spec: &ExperimentSpec) -> Result<EquilibriumReport> {
    let params = spec.base.params;
    let stages = fresh_game_stages(&params, spec.base.n, spec.base.n_th)?;
    let opening = stages[0];
    let result = solve(&params, &stages, &opening)?;
    let mut rows = Vec::with_capacity(stages.len());
    for (i, stage) in stages.iter().enumerate() {
        let p_k = stage_probability(stage)?;
        let q = attack_probability_stage(&params, p_k)?;
        let m = payoff_matrix(&params, p_k);
        rows.push(StageRow {
            stage: i as u32 + 1,
            n_l: stage.n_l,
            n_r: stage.votes_required(),
            p_k,
            delta: vote_delta(stage)?,
            q_k_raw: q.raw,
            q_k: q.value,
            interior: q.interior,
            eu_voting: expected_utility_voting(&params, q.raw, &m),
            eu_abstaining: expected_utility_abstaining(&params, q.raw, &m),
        });
    }
    let opening_delta = vote_delta(&opening)?;
    let opening_p_k = stage_probability(&opening)?;
    Ok(EquilibriumReport {
        params,
        stages: rows,
        attacker_residual: attacker_indifference(&params, result.s_star_raw, opening_delta),
        benefit_bound: benefit_upper_bound(&params, opening_p_k).ok(),
        alpha_bound: alpha_lower_bound(&params, opening_delta),
        opening_delta,
        result,
    })
}

pub const STAGE_HEADER: &str =
    "stage,n_l,n_r,p_k,delta,q_k_raw,q_k,interior,eu_voting,eu_abstaining";

pub fn render_stages(report: &EquilibriumReport) -> String {
    let mut out = format!("{STAGE_HEADER}\n");
    for r in &report.stages {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.stage,
            r.n_l,
            r.n_r,
            format_sig6(r.p_k),
            format_sig6(r.delta),
            format_sig6(r.q_k_raw),
            format_sig6(r.q_k),
            r.interior,
            format_sig6(r.eu_voting),
            format_sig6(r.eu_abstaining),
        );
    }
    out
}

pub fn render_summary(report: &EquilibriumReport) -> String {
    let r = &report.result;
    let mut out = String::from("key,value\n");
    let mut put = |k: &str, v: String| {
        let _ = writeln!(out, "{k},{v}");
    };
    put("q_star", format_sig6(r.q_star));
    put("q_star_raw", format_sig6(r.q_star_raw));
    put("s_star", format_sig6(r.s_star));
    put("s_star_raw", format_sig6(r.s_star_raw));
    put("interior", r.interior.to_string());
    put("opening_delta", format_sig6(report.opening_delta));
    put("attacker_residual", format_sig6(report.attacker_residual));
    put(
        "benefit_upper_bound",
        report.benefit_bound.map(format_sig6).unwrap_or_else(|| "undefined".into()),
    );
    put("alpha_lower_bound", format_sig6(report.alpha_bound));
    out
}

/// `out.csv` becomes `out_<suffix>.csv`.
pub fn series_path(base: &Path, suffix: &str) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    base.with_file_name(name)
}

/// Runs the experiment and writes its files, returning their paths in the
/// order written.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<PathBuf>> {
    let out = &spec.output_path;
    let mut written = Vec::new();
    match spec.kind {
        ExperimentKind::SweepBenefit => {
            emit_csv(&run_benefit_sweep(spec)?, out)?;
            written.push(out.clone());
        }
        ExperimentKind::SweepAttack | ExperimentKind::SweepAlpha => {
            let (key, series) = if spec.kind == ExperimentKind::SweepAttack {
                ("mu", run_attack_sweep(spec)?)
            } else {
                ("p_m", run_alpha_sweep(spec)?)
            };
            for (value, rows) in series {
                let path = series_path(out, &format!("{key}-{}", format_sig6(value)));
                emit_csv(&rows, &path)?;
                written.push(path);
            }
        }
        ExperimentKind::CompareUncertainty => {
            let cmp = run_uncertainty_comparison(spec)?;
            for (suffix, rows) in [("aware", &cmp.aware), ("certain", &cmp.certain)] {
                let path = series_path(out, suffix);
                emit_csv(rows, &path)?;
                written.push(path);
            }
        }
        ExperimentKind::SingleRun => {
            let (summary, records) = run_single(spec)?;
            emit_csv(&[summary], out)?;
            written.push(out.clone());
            let path = series_path(out, "trials");
            write_file(&path, &render_trials(&records))?;
            written.push(path);
        }
        ExperimentKind::EquilibriumReport => {
            let report = equilibrium_report(spec)?;
            write_file(out, &render_stages(&report))?;
            written.push(out.clone());
            let path = series_path(out, "summary");
            write_file(&path, &render_summary(&report))?;
            written.push(path);
        }
    }
    Ok(written)
}
