//! Mixed-strategy Bayesian equilibrium of the stage game and the parameter
//! bounds that follow from it when every benign node monitors.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::params::GameParams;
use crate::payoff::{outcome_spread, payoff_matrix, PayoffMatrix};
use crate::stage::{stage_probability, vote_delta, StageState};

/// A mixing probability from a closed form, with its clamp to [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedProbability {
    /// Value of the closed form before clamping.
    pub raw: f64,
    /// `raw` clamped to the nearest pure strategy when outside [0, 1].
    pub value: f64,
    /// Whether `raw` lies in [0, 1].
    pub interior: bool,
}

impl MixedProbability {
    pub fn from_raw(raw: f64) -> Self {
        let interior = (0.0..=1.0).contains(&raw);
        Self { raw, value: raw.clamp(0.0, 1.0), interior }
    }
}

/// Expected utility of a monitoring benign node that votes, given attack
/// probability `q`.
pub fn expected_utility_voting(params: &GameParams, q: f64, payoffs: &PayoffMatrix) -> f64 {
    let mu = params.mu;
    mu * q * payoffs.a(1) + mu * (1.0 - q) * payoffs.a(4) + (1.0 - mu) * payoffs.a(7)
}

/// Expected utility of a benign node that abstains, given attack probability `q`.
pub fn expected_utility_abstaining(params: &GameParams, q: f64, payoffs: &PayoffMatrix) -> f64 {
    abstaining_weights(params, q)
        .iter()
        .zip([2, 3, 5, 6, 8, 9])
        .map(|(weight, z)| weight * payoffs.a(z))
        .sum()
}

/// Weights of `a2, a3, a5, a6, a8, a9` in the abstaining utility.
pub fn abstaining_weights(params: &GameParams, q: f64) -> [f64; 6] {
    let GameParams { mu, p_m, .. } = *params;
    [
        mu * q * p_m,
        mu * q * (1.0 - p_m),
        mu * (1.0 - q) * p_m,
        mu * (1.0 - q) * (1.0 - p_m),
        (1.0 - mu) * p_m,
        (1.0 - mu) * (1.0 - p_m),
    ]
}

/// Attack probability `q_k = A_k / B_k` that leaves a benign node at a stage
/// with identification probability `p_k` indifferent between voting and
/// abstaining.
pub fn attack_probability_stage(params: &GameParams, p_k: f64) -> Result<MixedProbability> {
    let GameParams { w, c_m, c_v, b, alpha, beta, mu, p_m, .. } = *params;
    let spread = outcome_spread(p_k);
    let shared = mu * (1.0 + p_m) * spread * b;
    let numerator = shared + (1.0 - p_m) * (c_m + beta * w) + c_v
        - p_k * p_k * b
        - p_m * (1.0 - p_k) * (1.0 - p_k) * b;
    let denominator = shared + mu * (1.0 - p_m) * (2.0 * alpha + beta) * w;
    if denominator == 0.0 {
        return Err(ModelError::ZeroDenominator("attack probability"));
    }
    Ok(MixedProbability::from_raw(numerator / denominator))
}

/// Mean of the raw per-stage attack probabilities over `stages`.
pub fn attack_probability_average(params: &GameParams, stages: &[StageState]) -> Result<f64> {
    if stages.is_empty() {
        return Err(ModelError::NoStages);
    }
    let mut total = 0.0;
    for stage in stages {
        total += attack_probability_stage(params, stage_probability(stage)?)?.raw;
    }
    Ok(total / stages.len() as f64)
}

/// Voting probability `s*` of a monitoring benign node that leaves a
/// malicious target indifferent between attacking and not.
pub fn vote_probability(params: &GameParams, delta: f64) -> Result<MixedProbability> {
    let GameParams { w, c_a, c_gm, alpha, p_m, .. } = *params;
    let numerator = c_a + (2.0 * alpha * p_m - 1.0) * w - c_gm;
    let denominator = (1.0 - p_m) * (-c_a + (1.0 - 2.0 * alpha) * w + c_gm) - delta * c_gm;
    if denominator == 0.0 {
        return Err(ModelError::ZeroDenominator("vote probability"));
    }
    Ok(MixedProbability::from_raw(numerator / denominator))
}

/// The target's attack-versus-refrain utility gap when monitoring nodes
/// vote with probability `s`.
///
/// A vote raises the identification probability from 0 to `delta`, so the
/// voted-against payoff `t1` is taken at `p_k = delta` while `t2` and `t3`
/// are taken at `p_k = 0`. Zero exactly when `s` is the raw
/// [`vote_probability`].
pub fn attacker_indifference(params: &GameParams, s: f64, delta: f64) -> f64 {
    let GameParams { mu, p_m, .. } = *params;
    let voted = payoff_matrix(params, delta);
    let baseline = payoff_matrix(params, 0.0);
    mu * s * voted.t(1) + p_m * mu * (1.0 - s) * baseline.t(2) + (1.0 - p_m) * mu * baseline.t(3)
}

/// Largest benefit for which an attack stays attractive when every benign
/// node monitors.
pub fn benefit_upper_bound(params: &GameParams, p_k: f64) -> Result<f64> {
    if params.mu >= 0.5 {
        return Err(ModelError::BoundUndefined(params.mu));
    }
    Ok(params.c_v / ((1.0 - 2.0 * params.mu) * outcome_spread(p_k)))
}

/// Smallest detection rate that makes a malicious node indifferent when
/// every benign node monitors.
pub fn alpha_lower_bound(params: &GameParams, delta: f64) -> f64 {
    let GameParams { w, c_a, c_gm, .. } = *params;
    (w - c_a + c_gm * (1.0 - delta)) / (2.0 * w)
}

/// The equilibrium over a list of stages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumResult {
    pub q_per_stage: Vec<MixedProbability>,
    /// Mean of the clamped per-stage attack probabilities.
    pub q_star: f64,
    /// Mean of the raw per-stage attack probabilities.
    pub q_star_raw: f64,
    pub s_star: f64,
    pub s_star_raw: f64,
    /// Every raw `q_k` and the raw `s*` lie in [0, 1].
    pub interior: bool,
}

/// Solves every stage in `stages` and the voting probability at `delta_stage`.
pub fn solve(
    params: &GameParams,
    stages: &[StageState],
    delta_stage: &StageState,
) -> Result<EquilibriumResult> {
    if stages.is_empty() {
        return Err(ModelError::NoStages);
    }
    let q_per_stage = stages
        .iter()
        .map(|s| attack_probability_stage(params, stage_probability(s)?))
        .collect::<Result<Vec<_>>>()?;
    let count = q_per_stage.len() as f64;
    let q_star = q_per_stage.iter().map(|q| q.value).sum::<f64>() / count;
    let q_star_raw = q_per_stage.iter().map(|q| q.raw).sum::<f64>() / count;
    let s = vote_probability(params, vote_delta(delta_stage)?)?;
    Ok(EquilibriumResult {
        interior: s.interior && q_per_stage.iter().all(|q| q.interior),
        q_per_stage,
        q_star,
        q_star_raw,
        s_star: s.value,
        s_star_raw: s.raw,
    })
}

/// Stages `k = 1..=n` of a game in which nothing has been cast yet, so the
/// node at stage `k` has `n − k` nodes left after it.
pub fn fresh_game_stages(params: &GameParams, n: u32, n_th: u32) -> Result<Vec<StageState>> {
    let p_s = params.vote_success_probability();
    (1..=n).map(|k| StageState::new(n, n_th, 0, 0, n - k, p_s)).collect()
}
