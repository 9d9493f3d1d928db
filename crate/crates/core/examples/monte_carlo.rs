//! Monte Carlo payoffs on both backends against the closed form.
//!
//! cargo run -p tencards --example monte_carlo --release

use tencards::experiments::output::report_table;
use tencards::experiments::{run_experiment, run_experiment_parallel, ExperimentConfig};
use tencards::game::{EntangledState, PayoffMatrix, StrategyProfile};
use tencards::simulator::Backend;

fn main() -> tencards::Result<()> {
    let base = ExperimentConfig {
        payoffs: PayoffMatrix::standard_bos(),
        state: EntangledState::new(0.3)?,
        profile: StrategyProfile::new(0.6, 0.2)?,
        trials: 200_000,
        seed: 1,
        backend: Backend::Machine,
    };
    for backend in [Backend::Machine, Backend::Cards] {
        let report = run_experiment(&ExperimentConfig { backend, ..base })?;
        print!("{}", report_table(&report));
        let within = report.abs_error.alice <= 4.0 * report.std_error.alice && report.abs_error.bob <= 4.0 * report.std_error.bob;
        println!("within 4 SE: {within}\n");
    }

    // parallel lanes use derived seeds, so counts differ from the serial run
    let report = run_experiment_parallel(&ExperimentConfig { trials: 1_000_000, ..base }, 4)?;
    print!("{}", report_table(&report));
    Ok(())
}
