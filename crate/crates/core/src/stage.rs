//! Per-stage voting bookkeeping and the probability that the nodes still to
//! act complete a correct identification.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::params::check_probability;

/// Vote counts seen by the node acting at some stage of the game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageState {
    /// Nodes in the neighborhood.
    pub n: u32,
    /// Same-type votes needed to identify the target.
    pub n_th: u32,
    /// Correct votes already cast.
    pub n_v1: u32,
    /// Wrong votes already cast.
    pub n_v2: u32,
    /// Nodes left to act after this stage.
    pub n_l: u32,
    /// Probability that a remaining node casts a correct vote.
    pub p_s: f64,
}

impl StageState {
    /// Builds a validated stage.
    ///
    /// `n_v1 == n_th` is accepted and denotes a target that has just been
    /// identified (`n_r = 0`); the live game never reaches such a stage.
    pub fn new(n: u32, n_th: u32, n_v1: u32, n_v2: u32, n_l: u32, p_s: f64) -> Result<Self> {
        let state = Self { n, n_th, n_v1, n_v2, n_l, p_s };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(ModelError::InvalidStage("n must be positive".into()));
        }
        if self.n_th == 0 || self.n_th > self.n {
            return Err(ModelError::InvalidStage(format!(
                "n_th must lie in 1..={} (got {})",
                self.n, self.n_th
            )));
        }
        if self.n_v1 > self.n_th {
            return Err(ModelError::InvalidStage(format!(
                "n_v1 = {} exceeds n_th = {}",
                self.n_v1, self.n_th
            )));
        }
        if self.n_v2 >= self.n_th {
            return Err(ModelError::InvalidStage(format!(
                "n_v2 = {} means the target is already decided (n_th = {})",
                self.n_v2, self.n_th
            )));
        }
        if u64::from(self.n_v1) + u64::from(self.n_v2) + u64::from(self.n_l) > u64::from(self.n) {
            return Err(ModelError::InvalidStage(format!(
                "n_v1 + n_v2 + n_l = {} exceeds n = {}",
                self.n_v1 + self.n_v2 + self.n_l,
                self.n
            )));
        }
        check_probability("p_s", self.p_s)
    }

    /// Remaining correct votes required, `n_th − n_v1`.
    pub fn votes_required(&self) -> u32 {
        self.n_th - self.n_v1
    }

    /// The same stage after one more correct vote.
    pub fn with_extra_correct_vote(&self) -> Result<Self> {
        Self::new(self.n, self.n_th, self.n_v1 + 1, self.n_v2, self.n_l, self.p_s)
    }
}

/// Probability of correct identification by the remaining nodes, `p_k`.
pub fn stage_probability(state: &StageState) -> Result<f64> {
    state.validate()?;
    Ok(upper_tail(state.n_l, state.votes_required(), state.p_s))
}

/// Increase in `p_k` produced by one additional correct vote, `δ`.
pub fn vote_delta(state: &StageState) -> Result<f64> {
    state.validate()?;
    let n_r = state.votes_required();
    if n_r == 0 {
        return Err(ModelError::TargetAlreadyIdentified);
    }
    Ok(binomial_pmf(state.n_l, n_r - 1, state.p_s))
}

/// `P[X ≥ k]` for `X ~ Binomial(trials, p)`.
///
/// Exactly 1 when `k == 0` and exactly 0 when `k > trials`.
pub fn upper_tail(trials: u32, k: u32, p: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > trials {
        return 0.0;
    }
    if p == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return 1.0;
    }
    let log_ratio = p.ln() - (-p).ln_1p();
    let mut log_term = log_binomial_pmf(trials, k, p);
    let mut terms = Vec::with_capacity((trials - k + 1) as usize);
    for i in k..=trials {
        terms.push(log_term.exp());
        if i < trials {
            log_term += (f64::from(trials - i) / f64::from(i + 1)).ln() + log_ratio;
        }
    }
    // smallest terms first
    terms.sort_by(|a, b| a.total_cmp(b));
    terms.iter().sum::<f64>().min(1.0)
}

/// `P[X = k]` for `X ~ Binomial(trials, p)`, with `0⁰ = 1`.
pub fn binomial_pmf(trials: u32, k: u32, p: f64) -> f64 {
    if k > trials {
        return 0.0;
    }
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == trials { 1.0 } else { 0.0 };
    }
    log_binomial_pmf(trials, k, p).exp()
}

fn log_binomial_pmf(trials: u32, k: u32, p: f64) -> f64 {
    log_choose(trials, k) + f64::from(k) * p.ln() + f64::from(trials - k) * (-p).ln_1p()
}

fn log_choose(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (1..=k).map(|j| (f64::from(n - k + j) / f64::from(j)).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Sums the probability of every Bernoulli outcome vector with at least
    /// `k` successes.
    fn enumerate_tail(trials: u32, k: u32, p: f64) -> f64 {
        let mut total = 0.0;
        for mask in 0u32..(1 << trials) {
            let successes = mask.count_ones();
            if successes >= k {
                total += p.powi(successes as i32) * (1.0 - p).powi((trials - successes) as i32);
            }
        }
        total
    }

    fn worked_stage(n_v1: u32) -> StageState {
        StageState::new(10, 4, n_v1, 0, 3, 1.0 / 3.0).unwrap()
    }

    #[test]
    fn worked_example_boundaries() {
        assert_eq!(stage_probability(&worked_stage(0)).unwrap(), 0.0);
        assert_eq!(stage_probability(&worked_stage(4)).unwrap(), 1.0);
    }

    #[test]
    fn worked_example_interior() {
        // n_r = 1 and n_r = 3
        let p1 = stage_probability(&worked_stage(3)).unwrap();
        let p3 = stage_probability(&worked_stage(1)).unwrap();
        assert!((p1 - 19.0 / 27.0).abs() < 1e-12);
        assert!((p3 - 1.0 / 27.0).abs() < 1e-12);
    }

    #[test]
    fn zero_success_probability() {
        let s = StageState::new(10, 4, 0, 0, 6, 0.0).unwrap();
        assert_eq!(stage_probability(&s).unwrap(), 0.0);
        let s = StageState::new(10, 4, 3, 0, 6, 0.0).unwrap();
        assert_eq!(vote_delta(&s).unwrap(), 1.0);
    }

    #[test]
    fn twelve_remaining_matches_enumeration() {
        let s = StageState::new(40, 5, 0, 0, 12, 0.57).unwrap();
        let got = stage_probability(&s).unwrap();
        assert!((got - enumerate_tail(12, 5, 0.57)).abs() < 1e-12);
    }

    #[test]
    fn delta_single_remaining_vote() {
        let s = worked_stage(3);
        let d = vote_delta(&s).unwrap();
        assert!((d - 8.0 / 27.0).abs() < 1e-12);
        let p0 = stage_probability(&worked_stage(4)).unwrap();
        let p1 = stage_probability(&s).unwrap();
        assert!((d - (p0 - p1)).abs() < 1e-12);
    }

    #[test]
    fn delta_three_required() {
        let s = worked_stage(1);
        let expected = stage_probability(&worked_stage(2)).unwrap()
            - stage_probability(&s).unwrap();
        assert!((vote_delta(&s).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn delta_rejects_identified_target() {
        assert_eq!(vote_delta(&worked_stage(4)), Err(ModelError::TargetAlreadyIdentified));
    }

    #[test]
    fn rejects_invalid_counts() {
        assert!(StageState::new(10, 4, 5, 0, 3, 0.5).is_err());
        assert!(StageState::new(10, 4, 0, 4, 3, 0.5).is_err());
        assert!(StageState::new(10, 4, 3, 3, 5, 0.5).is_err());
        assert!(StageState::new(10, 11, 0, 0, 3, 0.5).is_err());
        assert!(StageState::new(10, 4, 0, 0, 3, 1.2).is_err());
        let bad = StageState { n: 10, n_th: 4, n_v1: 0, n_v2: 0, n_l: 20, p_s: 0.5 };
        assert!(stage_probability(&bad).is_err());
    }

    #[test]
    fn large_neighborhood_stays_finite() {
        let tail = upper_tail(600, 300, 0.57);
        assert!(tail.is_finite() && tail > 0.99 && tail <= 1.0);
        let tail = upper_tail(600, 500, 0.57);
        assert!(tail > 0.0 && tail < 1e-20);
        let pmf_sum: f64 = (0..=600).map(|k| binomial_pmf(600, k, 0.3)).sum();
        assert!((pmf_sum - 1.0).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn nonincreasing_in_required_votes(n_l in 0u32..60, k in 0u32..60, p in 0.0f64..=1.0) {
            prop_assert!(upper_tail(n_l, k + 1, p) <= upper_tail(n_l, k, p) + 1e-12);
        }

        #[test]
        fn nondecreasing_in_success_probability(n_l in 0u32..60, k in 0u32..60, p in 0.0f64..0.99, dp in 0.0f64..0.01) {
            prop_assert!(upper_tail(n_l, k, p) <= upper_tail(n_l, k, p + dp) + 1e-12);
        }

        #[test]
        fn nondecreasing_in_remaining_nodes(n_l in 0u32..60, k in 0u32..60, p in 0.0f64..=1.0) {
            prop_assert!(upper_tail(n_l, k, p) <= upper_tail(n_l + 1, k, p) + 1e-12);
        }

        #[test]
        fn delta_is_difference_of_tails(n_l in 0u32..80, k in 1u32..82, p in 0.0f64..=1.0) {
            let diff = upper_tail(n_l, k - 1, p) - upper_tail(n_l, k, p);
            prop_assert!((binomial_pmf(n_l, k - 1, p) - diff).abs() < 1e-12);
        }
    }
}
