//! Distributional laws of the measurement backends and Monte Carlo harness.
//! Seeds are fixed, so every check is deterministic.

use std::f64::consts::PI;

use tencards::experiments::{equilibrium_oracle_grid, run_experiment, ExperimentConfig};
use tencards::game::{EntangledState, PayoffMatrix, StrategyProfile};
use tencards::simulator::{
    card_measurement, machine_game_measurement, spin_measurement, Backend, BlochPoint, RandomSource, Randomness,
    SpinOutcome, UnitVector,
};

fn four_sigma(p: f64, n: u64) -> f64 {
    4.0 * (p * (1.0 - p) / n as f64).sqrt()
}

#[test]
fn spin_law_matches_cos_squared() {
    const N: u64 = 1_000_000;
    let direction = UnitVector::north();
    for (k, theta) in [0.0, PI / 6.0, PI / 4.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0, PI].into_iter().enumerate() {
        let state = BlochPoint::pure(theta, 0.0).unwrap();
        let mut rng = RandomSource::new(1000 + k as u64);
        let ups = (0..N)
            .filter(|_| spin_measurement(state, direction, &mut rng).unwrap().outcome == SpinOutcome::Up)
            .count();
        let expected = (theta / 2.0).cos().powi(2);
        let freq = ups as f64 / N as f64;
        let band = four_sigma(expected, N);
        assert!((freq - expected).abs() <= band, "theta={theta}: {freq} vs {expected} (band {band})");
    }
}

#[test]
fn spin_law_off_axis_direction() {
    // state and direction both away from the poles; only their angle matters
    const N: u64 = 200_000;
    let state = BlochPoint::pure(1.0, 2.0).unwrap();
    let direction = UnitVector::from_angles(0.3, 5.0);
    let theta = tencards::simulator::angle_between(state, direction).unwrap();
    let mut rng = RandomSource::new(77);
    let ups = (0..N).filter(|_| spin_measurement(state, direction, &mut rng).unwrap().outcome == SpinOutcome::Up).count();
    let expected = (theta / 2.0).cos().powi(2);
    assert!((ups as f64 / N as f64 - expected).abs() <= four_sigma(expected, N));
}

#[test]
fn game_machine_law() {
    const N: u64 = 1_000_000;
    for (k, a) in [0.0, 0.1, 0.25, 0.5, 0.75, 1.0].into_iter().enumerate() {
        let state = EntangledState::new(a).unwrap();
        let mut rng = RandomSource::new(2000 + k as u64);
        let oo = (0..N)
            .filter(|_| machine_game_measurement(state, false, false, &mut rng).outcome == tencards::game::Outcome::OO)
            .count();
        let freq = oo as f64 / N as f64;
        assert!((freq - a).abs() <= four_sigma(a, N), "a_sq={a}: {freq}");
    }
}

#[test]
fn cards_with_k_digit_targets_stop_within_k_plus_one_draws() {
    let mut pick = RandomSource::new(3);
    let mut rng = RandomSource::new(4);
    for k in 1..=6u32 {
        for _ in 0..200 {
            let scale = 10f64.powi(k as i32);
            let n = (pick.uniform() * scale).floor();
            let a = EntangledState::new(n / scale).unwrap();
            for _ in 0..50 {
                let t = card_measurement(a, &mut rng, 16).unwrap();
                assert!(t.draws_used() <= k as usize + 1 && !t.tie_break, "a_sq={} used {}", a.a_sq(), t.draws_used());
            }
        }
    }
}

#[test]
fn oracle_agreement_on_random_bos_instances() {
    let mut rng = RandomSource::new(5);
    for _ in 0..50 {
        let gamma = -5.0 + 10.0 * rng.uniform();
        let beta = gamma + 0.05 + 5.0 * rng.uniform();
        let alpha = beta + 0.05 + 5.0 * rng.uniform();
        let payoffs = PayoffMatrix::new(alpha, beta, gamma).unwrap();
        let state = EntangledState::new(rng.uniform()).unwrap();
        let report = equilibrium_oracle_grid(state, &payoffs, 0.01).unwrap();
        assert!(report.agrees(), "{payoffs:?} {state:?}: {:?} / {:?}", report.unmatched_closed_form, report.unmatched_cells);
    }
}

#[test]
fn payoff_error_shrinks_like_inverse_sqrt_n() {
    let base = ExperimentConfig {
        payoffs: PayoffMatrix::standard_bos(),
        state: EntangledState::new(0.3).unwrap(),
        profile: StrategyProfile::new(0.6, 0.2).unwrap(),
        trials: 10_000,
        seed: 0,
        backend: Backend::Machine,
    };
    let median_error = |trials: u64, seed_offset: u64| {
        let mut errors: Vec<f64> = (0..10u64)
            .map(|seed| run_experiment(&ExperimentConfig { seed: seed + seed_offset, trials, ..base }).unwrap().abs_error.alice)
            .collect();
        errors.sort_by(f64::total_cmp);
        0.5 * (errors[4] + errors[5])
    };
    let ratio = median_error(10_000, 0) / median_error(1_000_000, 100);
    assert!((5.0..=20.0).contains(&ratio), "median error ratio {ratio}");
}
