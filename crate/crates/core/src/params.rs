//! Scalar model constants shared by the payoff model, the equilibrium
//! closed forms and the simulator.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

/// All scalar constants of the voting game.
///
/// Costs are paid by the acting node, `b` is both the reward for a correct
/// strategy and the magnitude of the punishment for an incorrect one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameParams {
    /// Security value of a benign node's asset.
    pub w: f64,
    /// Cost of an attack.
    pub c_a: f64,
    /// Cost of monitoring.
    pub c_m: f64,
    /// Cost of casting a vote.
    pub c_v: f64,
    /// Benefit of a correct strategy and magnitude of punishment.
    pub b: f64,
    /// Group cost of failing to identify a malicious target.
    pub c_gm: f64,
    /// Group cost of failing to identify a benign target.
    pub c_gb: f64,
    /// True positive rate of the monitoring system.
    pub alpha: f64,
    /// False positive rate of the monitoring system.
    pub beta: f64,
    /// Prior that a neighbor is malicious.
    pub mu: f64,
    /// Probability that a benign node monitors a given neighbor.
    pub p_m: f64,
    /// Probability that a remaining node is still in the network.
    pub lambda: f64,
}

impl Default for GameParams {
    fn default() -> Self {
        Self {
            w: 4.0,
            c_a: 1.0,
            c_m: 1.0,
            c_v: 1.0,
            b: 3.0,
            c_gm: 4.0,
            c_gb: 4.0,
            alpha: 0.95,
            beta: 0.05,
            mu: 0.2,
            p_m: 0.75,
            lambda: 1.0,
        }
    }
}

impl GameParams {
    /// Checks every parameter constraint, reporting the first one violated.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("w", self.w),
            ("c_a", self.c_a),
            ("c_m", self.c_m),
            ("c_v", self.c_v),
            ("b", self.b),
            ("c_gm", self.c_gm),
            ("c_gb", self.c_gb),
        ] {
            // written as a negation so NaN is rejected too
            if !(value > 0.0) || !value.is_finite() {
                return Err(ModelError::NonPositive { name, value });
            }
        }
        for (name, value) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("mu", self.mu),
            ("p_m", self.p_m),
            ("lambda", self.lambda),
        ] {
            check_probability(name, value)?;
        }
        if self.w <= self.c_a {
            return Err(ModelError::AssetNotWorthIt { cost: "c_a", w: self.w, value: self.c_a });
        }
        if self.w <= self.c_m {
            return Err(ModelError::AssetNotWorthIt { cost: "c_m", w: self.w, value: self.c_m });
        }
        if self.b <= self.c_v {
            return Err(ModelError::BenefitBelowVoteCost { b: self.b, c_v: self.c_v });
        }
        if self.alpha <= 0.5 {
            return Err(ModelError::DetectionRateTooLow(self.alpha));
        }
        if self.beta >= 0.5 {
            return Err(ModelError::FalseAlarmRateTooHigh(self.beta));
        }
        Ok(())
    }

    /// Per-remaining-node probability of a correct vote, `λ(1−μ)αP_m` clamped to [0, 1].
    pub fn vote_success_probability(&self) -> f64 {
        (self.lambda * (1.0 - self.mu) * self.alpha * self.p_m).clamp(0.0, 1.0)
    }
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(ModelError::NotAProbability { name, value })
    }
}
