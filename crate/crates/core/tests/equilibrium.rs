mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use votegame_core::equilibrium::*;
use votegame_core::{payoff_matrix, stage_probability, GameParams};

fn utility_gap(params: &GameParams, p_k: f64, q: f64) -> f64 {
    let m = payoff_matrix(params, p_k);
    expected_utility_voting(params, q, &m) - expected_utility_abstaining(params, q, &m)
}

/// Root of the (linear in q) utility gap by bisection on [0, 1].
fn bisection_root(params: &GameParams, p_k: f64) -> Option<f64> {
    let (mut lo, mut hi) = (0.0, 1.0);
    let f_lo = utility_gap(params, p_k, lo);
    if f_lo * utility_gap(params, p_k, hi) > 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (utility_gap(params, p_k, mid) < 0.0) == (f_lo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[test]
fn interior_attack_probability_makes_benign_indifferent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..2000 {
        let params = common::random_params(&mut rng);
        let p_k = rand::Rng::random_range(&mut rng, 0.0..=1.0);
        let q = attack_probability_stage(&params, p_k).unwrap();
        if !q.interior {
            continue;
        }
        checked += 1;
        let m = payoff_matrix(&params, p_k);
        let eu_v = expected_utility_voting(&params, q.raw, &m);
        let eu_a = expected_utility_abstaining(&params, q.raw, &m);
        assert!((eu_v - eu_a).abs() <= 1e-9 * eu_v.abs().max(1.0), "{params:?} p_k={p_k}");
    }
    assert!(checked >= 100, "only {checked} interior samples");
}

#[test]
fn interior_vote_probability_makes_attacker_indifferent() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    for _ in 0..5000 {
        let params = common::random_params(&mut rng);
        let delta = rand::Rng::random_range(&mut rng, 0.0..=1.0);
        let Ok(s) = vote_probability(&params, delta) else { continue };
        if !s.interior {
            continue;
        }
        checked += 1;
        assert!(attacker_indifference(&params, s.raw, delta).abs() <= 1e-9);
    }
    assert!(checked >= 100, "only {checked} interior samples");
}

#[test]
fn fresh_game_average_matches_bisection_per_stage() {
    let params = GameParams::default();
    let stages = fresh_game_stages(&params, 40, 10).unwrap();
    let q_star = attack_probability_average(&params, &stages).unwrap();
    let mut oracle = 0.0;
    let mut bisected = 0;
    for stage in &stages {
        let p_k = stage_probability(stage).unwrap();
        // the gap is affine in q, so its root is also D(0) / (D(0) - D(1))
        let (d0, d1) = (utility_gap(&params, p_k, 0.0), utility_gap(&params, p_k, 1.0));
        let root = d0 / (d0 - d1);
        if let Some(b) = bisection_root(&params, p_k) {
            assert!((b - root).abs() < 1e-9);
            bisected += 1;
        }
        oracle += root;
    }
    oracle /= stages.len() as f64;
    assert!(bisected > 0);
    assert!((q_star - oracle).abs() <= 1e-9 * q_star.abs().max(1.0), "{q_star} vs {oracle}");
}

#[test]
fn full_monitoring_attack_iff_benefit_below_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let mut params = common::random_params(&mut rng);
        params.p_m = 1.0;
        params.mu = rand::Rng::random_range(&mut rng, 0.01..0.5);
        let p_k = rand::Rng::random_range(&mut rng, 0.0..=1.0);
        let q = attack_probability_stage(&params, p_k).unwrap();
        let bound = benefit_upper_bound(&params, p_k).unwrap();
        // skip the measure-zero boundary where rounding decides
        if (params.b - bound).abs() < 1e-9 * bound {
            continue;
        }
        assert_eq!(q.raw > 0.0, params.b < bound, "{params:?} p_k={p_k}");
    }
}

#[test]
fn vote_probability_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let params = common::random_params(&mut rng);
        let delta = rand::Rng::random_range(&mut rng, 0.0..=1.0);
        let t = rand::Rng::random_range(&mut rng, 0.1..10.0);
        let scaled = GameParams { c_a: params.c_a * t, w: params.w * t, c_gm: params.c_gm * t, ..params };
        let (Ok(a), Ok(b)) = (vote_probability(&params, delta), vote_probability(&scaled, delta)) else {
            continue;
        };
        assert!((a.raw - b.raw).abs() <= 1e-9 * a.raw.abs().max(1.0));
    }
}

#[test]
fn solve_averages_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..50 {
        let params = common::random_params(&mut rng);
        let stages = fresh_game_stages(&params, 20, 5).unwrap();
        let eq = solve(&params, &stages, &stages[0]).unwrap();
        let mean = eq.q_per_stage.iter().map(|q| q.value).sum::<f64>() / 20.0;
        assert_eq!(eq.q_star, mean);
        assert!(eq.q_per_stage.iter().all(|q| (0.0..=1.0).contains(&q.value)));
        assert!((0.0..=1.0).contains(&eq.s_star));
    }
}
