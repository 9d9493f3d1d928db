//! Nash equilibria of the restricted game for a few entanglement weights.
//!
//! cargo run -p tencards --example equilibria -- 5 3 1

use tencards::equilibria::nash_equilibria;
use tencards::experiments::output::equilibria_table;
use tencards::game::{EntangledState, PayoffMatrix};

fn main() -> tencards::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("payoff must be a number")).collect();
    let payoffs = match args[..] {
        [alpha, beta, gamma] => PayoffMatrix::new(alpha, beta, gamma)?,
        _ => PayoffMatrix::standard_bos(),
    };
    for a_sq in [1.0, 0.75, 0.5, 0.25, 0.0] {
        let eqs = nash_equilibria(EntangledState::new(a_sq)?, &payoffs);
        println!("a_sq = {a_sq}");
        print!("{}", equilibria_table(&eqs));
        println!();
    }
    Ok(())
}
