//! Cross-check closed-form equilibria with a brute-force grid search.
//!
//! cargo run -p tencards --example oracle

use tencards::equilibria::nash_equilibria;
use tencards::experiments::equilibrium_oracle_grid;
use tencards::experiments::output::{equilibria_table, grid_summary};
use tencards::game::{EntangledState, PayoffMatrix};

fn main() -> tencards::Result<()> {
    let cases = [
        (PayoffMatrix::standard_bos(), 1.0),
        (PayoffMatrix::standard_bos(), 0.5),
        (PayoffMatrix::new(4.0, 2.5, 0.0)?, 0.2),
        (PayoffMatrix::new(1.0, 3.0, 5.0)?, 0.7),
    ];
    for (payoffs, a_sq) in cases {
        let state = EntangledState::new(a_sq)?;
        println!("alpha={} beta={} gamma={} a_sq={a_sq}", payoffs.alpha(), payoffs.beta(), payoffs.gamma());
        print!("{}", equilibria_table(&nash_equilibria(state, &payoffs)));
        let report = equilibrium_oracle_grid(state, &payoffs, 0.01)?;
        print!("{}", grid_summary(&report));
        println!("agrees: {}\n", report.agrees());
    }
    Ok(())
}
