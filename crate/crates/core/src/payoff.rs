//! Stage-dependent payoffs of the benign player (PLB) and the target (PLT).
//!
//! Rows of the stage game are the target's situation (malicious and
//! attacking, malicious and not attacking, benign); columns are the benign
//! player's choice (monitor and vote, monitor and abstain, not monitor).
//! Each payoff is an individual term plus a group term that depends on the
//! probability `p_k` that the remaining nodes identify the target.

use serde::{Deserialize, Serialize};

use crate::params::GameParams;

/// The twelve stage payoffs, stored 1-indexed through [`PayoffMatrix::a`]
/// and [`PayoffMatrix::t`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffMatrix {
    pub benign: [f64; 9],
    pub target: [f64; 9],
}

impl PayoffMatrix {
    /// Benign player payoff `a_z`, `z` in 1..=9.
    pub fn a(&self, z: usize) -> f64 {
        self.benign[z - 1]
    }

    /// Target payoff `t_z`, `z` in 1..=9.
    pub fn t(&self, z: usize) -> f64 {
        self.target[z - 1]
    }
}

/// Builds the payoff matrix at identification probability `p_k`.
pub fn payoff_matrix(params: &GameParams, p_k: f64) -> PayoffMatrix {
    let GameParams { w, c_a, c_m, c_gm, c_gb, alpha, beta, .. } = *params;
    let group = group_payoffs(params, p_k);
    let monitoring_gain = -c_m + (2.0 * alpha - 1.0) * w;
    let false_alarm = -c_m - beta * w;
    let miss = 1.0 - p_k;

    let benign = [
        group.attacked.vote + monitoring_gain,
        group.attacked.abstain + monitoring_gain,
        -w - miss * c_gm,
        group.not_attacked.vote + false_alarm,
        group.not_attacked.abstain + false_alarm,
        -miss * c_gm,
        group.benign_target.vote + false_alarm,
        group.benign_target.abstain + false_alarm,
        -miss * c_gb,
    ];
    let t_monitored = -c_a - (2.0 * alpha - 1.0) * w + miss * c_gm;
    let t_unmonitored = -c_a + w + miss * c_gm;
    PayoffMatrix {
        benign,
        target: [t_monitored, t_monitored, t_unmonitored, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    }
}

/// Group payoffs of a monitoring benign node for one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VoteAbstain {
    pub vote: f64,
    pub abstain: f64,
}

/// Group payoffs of a monitoring benign node in each of the three scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupPayoffs {
    /// Malicious target that attacked this node.
    pub attacked: VoteAbstain,
    /// Malicious target that did not attack this node.
    pub not_attacked: VoteAbstain,
    /// Benign target.
    pub benign_target: VoteAbstain,
}

/// Group payoffs weighted over correct (`p_k`) and incorrect (`1 − p_k`)
/// identification.
pub fn group_payoffs(params: &GameParams, p_k: f64) -> GroupPayoffs {
    let GameParams { c_v, b, c_gm, c_gb, .. } = *params;
    let hit = p_k * p_k * b;
    let miss = 1.0 - p_k;
    let missed_punishment = miss * miss * b;
    GroupPayoffs {
        attacked: VoteAbstain {
            vote: hit - c_v - miss * c_gm,
            abstain: -missed_punishment - miss * c_gm,
        },
        not_attacked: VoteAbstain {
            vote: -missed_punishment - c_v - miss * c_gm,
            abstain: hit - miss * c_gm,
        },
        benign_target: VoteAbstain {
            vote: hit - c_v - miss * c_gb,
            abstain: -missed_punishment - miss * c_gb,
        },
    }
}

/// `p_k² + (1 − p_k)²`, the factor that recurs in every vote/abstain gap.
pub fn outcome_spread(p_k: f64) -> f64 {
    2.0 * p_k * p_k - 2.0 * p_k + 1.0
}

/// Values of `p_k` at which voting and abstaining tie for an attacked
/// monitoring node, i.e. the roots of `b(2p² − 2p + 1) = c_v`.
///
/// `None` when `b > 2c_v`, where voting dominates on all of [0, 1].
pub fn vote_abstain_crossovers(params: &GameParams) -> Option<(f64, f64)> {
    let disc = 1.0 - 2.0 * (params.b - params.c_v) / params.b;
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    Some(((1.0 - root) / 2.0, (1.0 + root) / 2.0))
}
