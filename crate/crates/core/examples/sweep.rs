//! Sweep the entanglement weight and write the table as CSV.
//!
//! cargo run -p tencards --example sweep -- /tmp/sweep.csv

use tencards::experiments::output::{sweep_rows, sweep_table, write_file};
use tencards::experiments::{sweep, ExperimentConfig, SweepAxis};
use tencards::game::{EntangledState, PayoffMatrix, StrategyProfile};
use tencards::simulator::Backend;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = ExperimentConfig {
        payoffs: PayoffMatrix::standard_bos(),
        state: EntangledState::product(),
        profile: StrategyProfile::new(2.0 / 3.0, 1.0 / 3.0)?,
        trials: 50_000,
        seed: 9,
        backend: Backend::Cards,
    };
    let values: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let table = sweep(&base, SweepAxis::ASq, &values)?;
    print!("{}", sweep_table(&table));
    if let Some(path) = std::env::args().nth(1) {
        write_file(path.as_ref(), &table, &sweep_rows(&table))?;
        println!("wrote {path}");
    }
    Ok(())
}
