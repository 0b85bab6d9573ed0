//! Sequential local voting games over a mixed benign/malicious neighborhood
//! and their Monte Carlo aggregation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibrium::{expected_utility_abstaining, expected_utility_voting};
use crate::error::{ModelError, Result};
use crate::params::{check_probability, GameParams};
use crate::payoff::payoff_matrix;
use crate::stage::{upper_tail, StageState};

pub const DEFAULT_NEIGHBORHOOD: u32 = 40;
pub const DEFAULT_ATTACK_PROBABILITY: f64 = 0.4;

/// Default identification threshold: a quarter of the neighborhood, rounded.
pub fn default_threshold(n: u32) -> u32 {
    ((f64::from(n) * 0.25).round() as u32).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Benign,
    Malicious,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observation {
    SawMalicious,
    SawBenign,
    None,
}

impl Observation {
    fn accused(self) -> Option<NodeKind> {
        match self {
            Observation::SawMalicious => Some(NodeKind::Malicious),
            Observation::SawBenign => Some(NodeKind::Benign),
            Observation::None => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeProfile {
    pub kind: NodeKind,
    pub monitored_target: bool,
    pub attacked_by_target: bool,
    pub observation: Observation,
}

/// Monitoring accuracy and attack probability a benign node plugs into its
/// utilities, when they differ from the true population values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Belief {
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
}

impl Belief {
    /// A node that trusts its detector completely and assumes every
    /// malicious neighbor attacks.
    pub const CERTAIN: Belief = Belief { alpha: 1.0, beta: 0.0, q: 1.0 };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VotingGameConfig {
    pub params: GameParams,
    pub n: u32,
    pub n_th: u32,
    pub q_attack: f64,
    /// Forced target type; drawn with probability `mu` when `None`.
    pub target_is_malicious: Option<bool>,
    pub seed: u64,
    /// Belief override for benign utilities; the true values when `None`.
    pub belief: Option<Belief>,
}

impl VotingGameConfig {
    pub fn new(params: GameParams) -> Self {
        Self {
            params,
            n: DEFAULT_NEIGHBORHOOD,
            n_th: default_threshold(DEFAULT_NEIGHBORHOOD),
            q_attack: DEFAULT_ATTACK_PROBABILITY,
            target_is_malicious: None,
            seed: 0,
            belief: None,
        }
    }

    /// Checks the counts and probabilities the simulator relies on.
    ///
    /// Only the probabilities in `params` are checked here; the economic
    /// orderings are checked by [`GameParams::validate`] at the input layer.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(ModelError::InvalidConfig("n must be positive".into()));
        }
        if self.n_th == 0 || self.n_th > self.n {
            return Err(ModelError::InvalidConfig(format!(
                "n_th must lie in 1..={} (got {})",
                self.n, self.n_th
            )));
        }
        check_probability("q_attack", self.q_attack)?;
        let p = &self.params;
        for (name, value) in
            [("alpha", p.alpha), ("beta", p.beta), ("mu", p.mu), ("p_m", p.p_m), ("lambda", p.lambda)]
        {
            check_probability(name, value)?;
        }
        if let Some(b) = &self.belief {
            check_probability("belief alpha", b.alpha)?;
            check_probability("belief beta", b.beta)?;
            check_probability("belief q", b.q)?;
        }
        Ok(())
    }

    /// Parameters and attack probability a benign node reasons with.
    pub fn belief_params(&self) -> (GameParams, f64) {
        match self.belief {
            Some(b) => (GameParams { alpha: b.alpha, beta: b.beta, ..self.params }, b.q),
            None => (self.params, self.q_attack),
        }
    }
}

/// A target and the neighborhood that votes on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Population {
    pub target: NodeKind,
    pub nodes: Vec<NodeProfile>,
}

pub fn spawn_population<R: Rng + ?Sized>(config: &VotingGameConfig, rng: &mut R) -> Population {
    let p = &config.params;
    let target = match config.target_is_malicious {
        Some(true) => NodeKind::Malicious,
        Some(false) => NodeKind::Benign,
        None if rng.random_bool(p.mu) => NodeKind::Malicious,
        None => NodeKind::Benign,
    };
    let nodes = (0..config.n)
        .map(|_| {
            if rng.random_bool(p.mu) {
                return NodeProfile {
                    kind: NodeKind::Malicious,
                    monitored_target: false,
                    attacked_by_target: false,
                    observation: Observation::None,
                };
            }
            let monitored = rng.random_bool(p.p_m);
            let attacked = target == NodeKind::Malicious && rng.random_bool(config.q_attack);
            let observation = if !monitored {
                Observation::None
            } else {
                let detect = if attacked { p.alpha } else { p.beta };
                if rng.random_bool(detect) {
                    Observation::SawMalicious
                } else {
                    Observation::SawBenign
                }
            };
            NodeProfile {
                kind: NodeKind::Benign,
                monitored_target: monitored,
                attacked_by_target: attacked,
                observation,
            }
        })
        .collect();
    Population { target, nodes }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Correct,
    Wrong,
    Undecided,
}

/// Verdict from the final tallies; the target type only matters through
/// which tally counts as correct, which the caller has already resolved.
pub fn classify_outcome(_target: NodeKind, votes_correct: u32, votes_wrong: u32, n_th: u32) -> Verdict {
    if votes_correct >= n_th {
        Verdict::Correct
    } else if votes_wrong >= n_th {
        Verdict::Wrong
    } else {
        Verdict::Undecided
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameOutcome {
    pub target: NodeKind,
    pub verdict: Verdict,
    pub stages_run: u32,
    pub votes_correct: u32,
    pub votes_wrong: u32,
}

/// Draws a population and a uniformly random turn order, then plays the game.
pub fn run_voting_game<R: Rng + ?Sized>(config: &VotingGameConfig, rng: &mut R) -> GameOutcome {
    let population = spawn_population(config, rng);
    let mut order: Vec<usize> = (0..population.nodes.len()).collect();
    order.shuffle(rng);
    play_game(config, &population, &order)
}

/// Plays the game with nodes acting in `order` (indices into `population.nodes`).
///
/// Malicious nodes always vote against the target's true type. A benign
/// node with an observation counts the votes agreeing with it as the
/// correct tally, and votes its observation iff voting is at least as good
/// as abstaining under its belief. The game stops as soon as either tally
/// reaches `n_th`.
pub fn play_game(config: &VotingGameConfig, population: &Population, order: &[usize]) -> GameOutcome {
    let (belief, q) = config.belief_params();
    let p_s = belief.vote_success_probability();
    let n = order.len() as u32;
    let target = population.target;
    let mut against_malicious = 0u32;
    let mut against_benign = 0u32;
    let mut stages_run = 0u32;

    for (k, &idx) in order.iter().enumerate() {
        stages_run += 1;
        let node = &population.nodes[idx];
        let ballot = match node.kind {
            NodeKind::Malicious => Some(match target {
                NodeKind::Benign => NodeKind::Malicious,
                NodeKind::Malicious => NodeKind::Benign,
            }),
            NodeKind::Benign => node.observation.accused().filter(|&accused| {
                let agree = match accused {
                    NodeKind::Malicious => against_malicious,
                    NodeKind::Benign => against_benign,
                };
                let left = n - k as u32 - 1;
                let p_k = upper_tail(left, config.n_th - agree, p_s);
                let m = payoff_matrix(&belief, p_k);
                expected_utility_voting(&belief, q, &m) >= expected_utility_abstaining(&belief, q, &m)
            }),
        };
        match ballot {
            Some(NodeKind::Malicious) => against_malicious += 1,
            Some(NodeKind::Benign) => against_benign += 1,
            None => {}
        }
        if against_malicious >= config.n_th || against_benign >= config.n_th {
            break;
        }
    }

    let (votes_correct, votes_wrong) = match target {
        NodeKind::Malicious => (against_malicious, against_benign),
        NodeKind::Benign => (against_benign, against_malicious),
    };
    GameOutcome {
        target,
        verdict: classify_outcome(target, votes_correct, votes_wrong, config.n_th),
        stages_run,
        votes_correct,
        votes_wrong,
    }
}

/// Stage the node at position `k` (0-based) of `order` sees, from the
/// perspective of its own observation. Exposed for equilibrium reports and
/// tests; the game loop computes the same quantities inline.
pub fn stage_for(config: &VotingGameConfig, k: u32, agreeing: u32, opposing: u32) -> Result<StageState> {
    let (belief, _) = config.belief_params();
    StageState::new(
        config.n,
        config.n_th,
        agreeing,
        opposing,
        config.n - k - 1,
        belief.vote_success_probability(),
    )
}

/// Independent generator for game `iteration` of a run seeded with `seed`.
pub fn game_rng(seed: u64, iteration: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration);
    rng
}

/// One game of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub iteration: u64,
    pub outcome: GameOutcome,
}

/// Plays `iterations` games, game `i` using [`game_rng`]`(config.seed, i)`.
pub fn trials(config: &VotingGameConfig, iterations: u64) -> Vec<TrialRecord> {
    (0..iterations)
        .into_par_iter()
        .map(|iteration| TrialRecord {
            iteration,
            outcome: run_voting_game(config, &mut game_rng(config.seed, iteration)),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeStat {
    /// Share of games with this verdict, in percent.
    pub pct: f64,
    /// Half-width of the 95% normal-approximation interval, in percent.
    pub ci_half_width: f64,
}

impl OutcomeStat {
    pub fn from_count(count: u64, iterations: u64) -> Self {
        let n = iterations as f64;
        let share = count as f64 / n;
        let ci_half_width = if iterations > 1 {
            // sample standard deviation of a 0/100 indicator
            let variance = n / (n - 1.0) * share * (1.0 - share);
            1.96 * 100.0 * variance.sqrt() / n.sqrt()
        } else {
            0.0
        };
        Self { pct: 100.0 * share, ci_half_width }
    }

    /// Standard error in percent, `ci_half_width / 1.96`.
    pub fn std_error(&self) -> f64 {
        self.ci_half_width / 1.96
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub parameter_value: f64,
    pub iterations: u64,
    pub seed: u64,
    pub correct: OutcomeStat,
    pub wrong: OutcomeStat,
    pub undecided: OutcomeStat,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerdictCounts {
    pub correct: u64,
    pub wrong: u64,
    pub undecided: u64,
}

impl VerdictCounts {
    pub fn record(mut self, verdict: Verdict) -> Self {
        match verdict {
            Verdict::Correct => self.correct += 1,
            Verdict::Wrong => self.wrong += 1,
            Verdict::Undecided => self.undecided += 1,
        }
        self
    }

    fn merge(self, other: Self) -> Self {
        Self {
            correct: self.correct + other.correct,
            wrong: self.wrong + other.wrong,
            undecided: self.undecided + other.undecided,
        }
    }

    pub fn total(&self) -> u64 {
        self.correct + self.wrong + self.undecided
    }
}

/// Runs `iterations` independent games and aggregates the verdicts.
///
/// `parameter_value` is left at 0; sweep drivers overwrite it.
pub fn monte_carlo(config: &VotingGameConfig, iterations: u64) -> Result<SweepResult> {
    config.validate()?;
    if iterations == 0 {
        return Err(ModelError::InvalidConfig("iterations must be at least 1".into()));
    }
    let counts = (0..iterations)
        .into_par_iter()
        .map(|i| run_voting_game(config, &mut game_rng(config.seed, i)).verdict)
        .fold(VerdictCounts::default, VerdictCounts::record)
        .reduce(VerdictCounts::default, VerdictCounts::merge);
    Ok(summarize(&counts, config.seed))
}

pub fn summarize(counts: &VerdictCounts, seed: u64) -> SweepResult {
    let iterations = counts.total();
    SweepResult {
        parameter_value: 0.0,
        iterations,
        seed,
        correct: OutcomeStat::from_count(counts.correct, iterations),
        wrong: OutcomeStat::from_count(counts.wrong, iterations),
        undecided: OutcomeStat::from_count(counts.undecided, iterations),
    }
}
