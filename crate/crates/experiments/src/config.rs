//! Experiment configuration: a flat TOML file layered under command-line
//! overrides, on top of the default game parameters.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use votegame_core::simulator::{default_threshold, VotingGameConfig, DEFAULT_NEIGHBORHOOD};
use votegame_core::{GameParams, ModelError};

use crate::error::{ExperimentError, Result};

/// Seed used when neither the config file nor the flags provide one.
pub const DEFAULT_SEED: u64 = 20_190_601;
pub const DEFAULT_ITERATIONS: u64 = 100;
/// Attack probability used by the benefit sweep unless overridden.
pub const BENEFIT_SWEEP_ATTACK_PROBABILITY: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    SweepBenefit,
    SweepAttack,
    SweepAlpha,
    CompareUncertainty,
    SingleRun,
    EquilibriumReport,
}

impl ExperimentKind {
    pub fn is_sweep(self) -> bool {
        matches!(
            self,
            Self::SweepBenefit | Self::SweepAttack | Self::SweepAlpha | Self::CompareUncertainty
        )
    }

    /// Default x-axis grid.
    pub fn default_grid(self) -> Vec<f64> {
        match self {
            Self::SweepBenefit => [1.05, 1.1, 1.15, 1.2]
                .into_iter()
                .chain(steps(1.25, 0.25, 28))
                .collect(),
            Self::SweepAttack => steps(0.0, 0.1, 11),
            Self::SweepAlpha => steps(0.55, 0.05, 10),
            Self::CompareUncertainty => steps(0.05, 0.05, 10),
            Self::SingleRun | Self::EquilibriumReport => Vec::new(),
        }
    }

    /// Default series values: `mu` for the attack sweep, `p_m` for the alpha sweep.
    pub fn default_companion_grid(self) -> Vec<f64> {
        match self {
            Self::SweepAttack => vec![0.1, 0.2, 0.3],
            Self::SweepAlpha => vec![0.25, 0.5, 0.75],
            _ => Vec::new(),
        }
    }
}

/// `count` points `start, start + step, ...`, rounded to kill accumulation noise.
fn steps(start: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| ((start + step * i as f64) * 1e9).round() / 1e9)
        .collect()
}

/// Keys accepted in a config file; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigValues {
    pub w: Option<f64>,
    pub c_a: Option<f64>,
    pub c_m: Option<f64>,
    pub c_v: Option<f64>,
    pub b: Option<f64>,
    pub c_gm: Option<f64>,
    pub c_gb: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub mu: Option<f64>,
    pub p_m: Option<f64>,
    pub lambda: Option<f64>,
    pub n: Option<u32>,
    pub n_th: Option<u32>,
    pub q_attack: Option<f64>,
    pub target_is_malicious: Option<bool>,
    pub seed: Option<u64>,
}

impl ConfigValues {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|source| ExperimentError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text).map_err(|e| match e {
            ExperimentError::Parse { message, .. } => {
                ExperimentError::Parse { path: Some(path.to_path_buf()), message }
            }
            other => other,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text)
            .map_err(|e| ExperimentError::Parse { path: None, message: e.message().to_string() })
    }

    /// Values in `self` win over values in `lower`.
    pub fn over(self, lower: ConfigValues) -> ConfigValues {
        ConfigValues {
            w: self.w.or(lower.w),
            c_a: self.c_a.or(lower.c_a),
            c_m: self.c_m.or(lower.c_m),
            c_v: self.c_v.or(lower.c_v),
            b: self.b.or(lower.b),
            c_gm: self.c_gm.or(lower.c_gm),
            c_gb: self.c_gb.or(lower.c_gb),
            alpha: self.alpha.or(lower.alpha),
            beta: self.beta.or(lower.beta),
            mu: self.mu.or(lower.mu),
            p_m: self.p_m.or(lower.p_m),
            lambda: self.lambda.or(lower.lambda),
            n: self.n.or(lower.n),
            n_th: self.n_th.or(lower.n_th),
            q_attack: self.q_attack.or(lower.q_attack),
            target_is_malicious: self.target_is_malicious.or(lower.target_is_malicious),
            seed: self.seed.or(lower.seed),
        }
    }
}

/// How the target type is chosen when given on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetChoice {
    Malicious,
    Benign,
    /// Drawn per game with probability `mu`.
    Random,
}

/// Everything a run needs, fully validated.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub base: VotingGameConfig,
    pub sweep_grid: Vec<f64>,
    pub companion_grid: Vec<f64>,
    pub iterations: u64,
    pub output_path: PathBuf,
}

/// Inputs to [`parse_config`] besides the kind.
#[derive(Debug, Clone, Default)]
pub struct Request {
    pub config_path: Option<PathBuf>,
    pub overrides: ConfigValues,
    pub target: Option<TargetChoice>,
    pub iterations: Option<u64>,
    pub grid: Option<Vec<f64>>,
    pub companion_grid: Option<Vec<f64>>,
    pub output_path: PathBuf,
}

/// Layers defaults, the config file and the overrides, then validates.
pub fn parse_config(kind: ExperimentKind, request: Request) -> Result<ExperimentSpec> {
    let file = match &request.config_path {
        Some(path) => ConfigValues::from_file(path)?,
        None => ConfigValues::default(),
    };
    let values = request.overrides.over(file);
    let d = GameParams::default();
    let params = GameParams {
        w: values.w.unwrap_or(d.w),
        c_a: values.c_a.unwrap_or(d.c_a),
        c_m: values.c_m.unwrap_or(d.c_m),
        c_v: values.c_v.unwrap_or(d.c_v),
        b: values.b.unwrap_or(d.b),
        c_gm: values.c_gm.unwrap_or(d.c_gm),
        c_gb: values.c_gb.unwrap_or(d.c_gb),
        alpha: values.alpha.unwrap_or(d.alpha),
        beta: values.beta.unwrap_or(d.beta),
        mu: values.mu.unwrap_or(d.mu),
        p_m: values.p_m.unwrap_or(d.p_m),
        lambda: values.lambda.unwrap_or(d.lambda),
    };
    params.validate()?;

    let n = values.n.unwrap_or(DEFAULT_NEIGHBORHOOD);
    let default_q = match kind {
        ExperimentKind::SweepBenefit => BENEFIT_SWEEP_ATTACK_PROBABILITY,
        _ => votegame_core::simulator::DEFAULT_ATTACK_PROBABILITY,
    };
    let target_is_malicious = match request.target {
        Some(TargetChoice::Malicious) => Some(true),
        Some(TargetChoice::Benign) => Some(false),
        Some(TargetChoice::Random) => None,
        None => values.target_is_malicious,
    };
    let base = VotingGameConfig {
        params,
        n,
        n_th: values.n_th.unwrap_or_else(|| default_threshold(n)),
        q_attack: values.q_attack.unwrap_or(default_q),
        target_is_malicious,
        seed: values.seed.unwrap_or(DEFAULT_SEED),
        belief: None,
    };
    base.validate()?;

    let iterations = request.iterations.unwrap_or(DEFAULT_ITERATIONS);
    if iterations == 0 {
        return Err(ModelError::InvalidConfig("iterations must be at least 1".into()).into());
    }
    let sweep_grid = request.grid.unwrap_or_else(|| kind.default_grid());
    let companion_grid = request.companion_grid.unwrap_or_else(|| kind.default_companion_grid());
    if kind.is_sweep() {
        check_grid("grid", &sweep_grid)?;
    }
    if matches!(kind, ExperimentKind::SweepAttack | ExperimentKind::SweepAlpha) {
        check_grid("companion grid", &companion_grid)?;
    }

    Ok(ExperimentSpec {
        kind,
        base,
        sweep_grid,
        companion_grid,
        iterations,
        output_path: request.output_path,
    })
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(ExperimentError::InvalidGrid(format!("{name} is empty")));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(ExperimentError::InvalidGrid(format!("{name} has a non-finite value")));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExperimentError::InvalidGrid(format!("{name} must be strictly increasing")));
    }
    Ok(())
}

/// Parses a comma-separated list of numbers.
pub fn parse_grid(text: &str) -> std::result::Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}")))
        .collect()
}
