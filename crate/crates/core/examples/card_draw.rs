//! The 10-card procedure, one card at a time.
//!
//! cargo run -p tencards --example card_draw -- 0.55

use tencards::game::EntangledState;
use tencards::simulator::{CardDraw, CardStatus, RandomSource, Randomness, DEFAULT_MAX_DIGITS};

fn main() -> tencards::Result<()> {
    let a_sq = std::env::args().nth(1).map_or(0.55, |a| a.parse().expect("a_sq must be a number"));
    let state = EntangledState::new(a_sq)?;
    let mut rng = RandomSource::new(2024);

    for round in 0..5 {
        let mut draw = CardDraw::new(state, DEFAULT_MAX_DIGITS)?;
        print!("round {round}:");
        loop {
            let digit = rng.digit();
            let status = draw.push(digit)?;
            print!(" {digit} -> [{}, {})", draw.lo_decimal(), draw.hi_decimal());
            if let CardStatus::Decided { branch, tie_break } = status {
                println!("  branch {branch:?}{}", if tie_break { " (tie-break)" } else { "" });
                break;
            }
        }
    }
    Ok(())
}
