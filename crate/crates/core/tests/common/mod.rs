use rand::Rng;
use votegame_core::GameParams;

/// A random parameter set satisfying every model constraint.
pub fn random_params<R: Rng>(rng: &mut R) -> GameParams {
    let w = rng.random_range(1.5..10.0);
    let c_v = rng.random_range(0.1..3.0);
    GameParams {
        w,
        c_a: w * rng.random_range(0.05..0.99),
        c_m: w * rng.random_range(0.05..0.99),
        c_v,
        b: c_v * rng.random_range(1.01..6.0),
        c_gm: rng.random_range(0.1..10.0),
        c_gb: rng.random_range(0.1..10.0),
        alpha: rng.random_range(0.51..1.0),
        beta: rng.random_range(0.0..0.49),
        mu: rng.random_range(0.01..1.0),
        p_m: rng.random_range(0.0..1.0),
        lambda: 1.0,
    }
}
