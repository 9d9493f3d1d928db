//! Monte Carlo verification of the closed-form payoffs.
//!
//! A trial samples Alice's flip with probability `1 - p` and Bob's with
//! probability `1 - q` from the uniform stream of the experiment's
//! [`RandomSource`], then runs one game measurement on the chosen backend.
//! The serial mode is bit-reproducible: the same config always yields the
//! same report bytes.

mod oracle;
pub mod output;

pub use oracle::{equilibrium_oracle_grid, grid_payoffs, CellShape, EquilibriumGridReport, OracleCell};

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::game::{expected_payoffs, EntangledState, Outcome, PayoffMatrix, PayoffPair, StrategyProfile};
use crate::simulator::{game_measurement, Backend, RandomSource};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub payoffs: PayoffMatrix,
    pub state: EntangledState,
    pub profile: StrategyProfile,
    pub trials: u64,
    pub seed: u64,
    pub backend: Backend,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::domain("trials must be at least 1"));
        }
        Ok(())
    }
}

/// Empirical versus analytic payoffs for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    /// Outcome counts in the order OO, OT, TO, TT.
    pub counts: [u64; 4],
    pub empirical: PayoffPair,
    pub analytic: PayoffPair,
    pub abs_error: PayoffPair,
    /// Sample standard deviation of the per-trial payoff over `sqrt(trials)`.
    pub std_error: PayoffPair,
    /// Mean cards drawn per trial (always 1 for the machine).
    pub mean_draws: f64,
    pub tie_breaks: u64,
}

impl ExperimentReport {
    pub fn count(&self, outcome: Outcome) -> u64 {
        self.counts[outcome.index()]
    }

    pub fn frequency(&self, outcome: Outcome) -> f64 {
        self.count(outcome) as f64 / self.config.trials as f64
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    counts: [u64; 4],
    draws: u64,
    tie_breaks: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (c, o) in self.counts.iter_mut().zip(other.counts) {
            *c += o;
        }
        self.draws += other.draws;
        self.tie_breaks += other.tie_breaks;
        self
    }
}

fn run_trials(config: &ExperimentConfig, seed: u64, trials: u64) -> Tally {
    let mut rng = RandomSource::new(seed);
    let mut tally = Tally::default();
    let (p, q) = (config.profile.p(), config.profile.q());
    for _ in 0..trials {
        let flip_alice = !rng.chance(p);
        let flip_bob = !rng.chance(q);
        let t = game_measurement(config.backend, config.state, flip_alice, flip_bob, &mut rng);
        tally.counts[t.outcome.index()] += 1;
        tally.draws += t.draws_used() as u64;
        tally.tie_breaks += u64::from(t.tie_break);
    }
    tally
}

fn summarize(config: ExperimentConfig, tally: Tally) -> ExperimentReport {
    let n = config.trials as f64;
    // Per-trial payoffs take at most three values, so mean and variance follow
    // exactly from the outcome counts.
    let moments = |pick: fn(PayoffPair) -> f64| {
        let mut sum = 0.0;
        for o in Outcome::ALL {
            sum += tally.counts[o.index()] as f64 * pick(config.payoffs.payoff(o));
        }
        let mean = sum / n;
        let mut ss = 0.0;
        for o in Outcome::ALL {
            let d = pick(config.payoffs.payoff(o)) - mean;
            ss += tally.counts[o.index()] as f64 * d * d;
        }
        let std = if config.trials > 1 { (ss / (n - 1.0)).sqrt() } else { 0.0 };
        (mean, std / n.sqrt())
    };
    let (mean_a, se_a) = moments(|pp| pp.alice);
    let (mean_b, se_b) = moments(|pp| pp.bob);
    let analytic = expected_payoffs(config.profile, config.state, &config.payoffs);

    ExperimentReport {
        config,
        counts: tally.counts,
        empirical: PayoffPair::new(mean_a, mean_b),
        analytic,
        abs_error: PayoffPair::new((mean_a - analytic.alice).abs(), (mean_b - analytic.bob).abs()),
        std_error: PayoffPair::new(se_a, se_b),
        mean_draws: tally.draws as f64 / n,
        tie_breaks: tally.tie_breaks,
    }
}

/// Serial, bit-reproducible run.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    Ok(summarize(*config, run_trials(config, config.seed, config.trials)))
}

/// Seed of parallel lane `lane`; lane streams never coincide with the serial one.
pub fn lane_seed(seed: u64, lane: u64) -> u64 {
    seed ^ (lane + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Splits the trials over `lanes` threads, each with its own [`lane_seed`].
/// The result is reproducible for a fixed lane count but differs from the
/// serial run; it agrees with it only in distribution.
pub fn run_experiment_parallel(config: &ExperimentConfig, lanes: usize) -> Result<ExperimentReport> {
    config.validate()?;
    let lanes = lanes.clamp(1, config.trials.min(u64::from(u32::MAX)) as usize) as u64;
    let base = config.trials / lanes;
    let extra = config.trials % lanes;
    let tally = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..lanes)
            .map(|lane| {
                let trials = base + u64::from(lane < extra);
                scope.spawn(move || run_trials(config, lane_seed(config.seed, lane), trials))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("lane panicked")).fold(Tally::default(), Tally::merge)
    });
    Ok(summarize(*config, tally))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    ASq,
    P,
    Q,
}

impl std::str::FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "a_sq" | "a-sq" => Ok(SweepAxis::ASq),
            "p" => Ok(SweepAxis::P),
            "q" => Ok(SweepAxis::Q),
            other => Err(format!("unknown axis '{other}' (expected a_sq, p or q)")),
        }
    }
}

impl std::fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SweepAxis::ASq => "a_sq",
            SweepAxis::P => "p",
            SweepAxis::Q => "q",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub report: ExperimentReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
}

/// One report per value; row `i` runs with seed `base.seed ^ i`.
pub fn sweep(base: &ExperimentConfig, axis: SweepAxis, values: &[f64]) -> Result<SweepTable> {
    if values.is_empty() {
        return Err(Error::domain("sweep needs at least one value"));
    }
    base.validate()?;
    let mut rows = Vec::with_capacity(values.len());
    for (i, &value) in values.iter().enumerate() {
        check_probability(&axis.to_string(), value)?;
        let mut config = *base;
        config.seed = base.seed ^ i as u64;
        match axis {
            SweepAxis::ASq => config.state = EntangledState::new(value)?,
            SweepAxis::P => config.profile = StrategyProfile::new(value, base.profile.q())?,
            SweepAxis::Q => config.profile = StrategyProfile::new(base.profile.p(), value)?,
        }
        rows.push(SweepRow { value, report: run_experiment(&config)? });
    }
    Ok(SweepTable { axis, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(a: f64, p: f64, q: f64, trials: u64, backend: Backend) -> ExperimentConfig {
        ExperimentConfig {
            payoffs: PayoffMatrix::standard_bos(),
            state: EntangledState::new(a).unwrap(),
            profile: StrategyProfile::new(p, q).unwrap(),
            trials,
            seed: 42,
            backend,
        }
    }

    #[test]
    fn deterministic_branch() {
        for backend in [Backend::Machine, Backend::Cards] {
            let r = run_experiment(&config(1.0, 1.0, 1.0, 1000, backend)).unwrap();
            assert_eq!(r.counts, [1000, 0, 0, 0]);
            assert_eq!(r.empirical, PayoffPair::new(5.0, 3.0));
            assert_eq!(r.std_error, PayoffPair::new(0.0, 0.0));
            assert_eq!(r.mean_draws, 1.0);
        }
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(run_experiment(&config(1.0, 1.0, 1.0, 0, Backend::Machine)).is_err());
    }

    #[test]
    fn half_entangled_alice_payoff() {
        // (alpha + beta) / 2 = 4 at p = q = 1, a_sq = 1/2
        let r = run_experiment(&config(0.5, 1.0, 1.0, 200_000, Backend::Machine)).unwrap();
        assert_eq!(r.analytic.alice, 4.0);
        assert!(r.abs_error.alice < 4.0 * r.std_error.alice, "{r:?}");
    }

    #[test]
    fn reports_are_reproducible() {
        let c = config(0.3, 0.4, 0.7, 20_000, Backend::Cards);
        let a = serde_json::to_string(&run_experiment(&c).unwrap()).unwrap();
        let b = serde_json::to_string(&run_experiment(&c).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parallel_lanes_cover_all_trials() {
        let c = config(0.3, 0.4, 0.7, 10_001, Backend::Machine);
        let r = run_experiment_parallel(&c, 4).unwrap();
        assert_eq!(r.counts.iter().sum::<u64>(), 10_001);
        assert_eq!(r, run_experiment_parallel(&c, 4).unwrap());
    }

    #[test]
    fn sweep_examples() {
        let base = config(1.0, 1.0, 1.0, 10_000, Backend::Machine);
        assert!(sweep(&base, SweepAxis::ASq, &[]).is_err());
        assert!(sweep(&base, SweepAxis::P, &[1.5]).is_err());

        let t = sweep(&base, SweepAxis::ASq, &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(t.rows[0].report.frequency(Outcome::OO), 0.0);
        assert!((t.rows[1].report.frequency(Outcome::OO) - 0.5).abs() < 0.02);
        assert_eq!(t.rows[2].report.frequency(Outcome::OO), 1.0);

        let t = sweep(&base, SweepAxis::P, &[0.0, 1.0]).unwrap();
        assert_eq!(t.rows[0].report.analytic.alice, 1.0);
        assert_eq!(t.rows[1].report.analytic.alice, 5.0);

        let single = sweep(&config(0.4, 0.3, 0.9, 5000, Backend::Cards), SweepAxis::Q, &[0.5]).unwrap();
        let direct = run_experiment(&config(0.4, 0.3, 0.5, 5000, Backend::Cards)).unwrap();
        assert_eq!(single.rows[0].report, direct);
    }
}
