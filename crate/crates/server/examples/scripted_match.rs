//! A three-round scripted match; prints the replies and the audit log, then
//! replays the log.
//!
//! cargo run -p tencards-server --example scripted_match

use tencards_server::protocol::{Dec, Move, Reply, Seat};
use tencards_server::script::{replay_log, run_script, Step};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a_sq = 0.3 has one decimal digit, so one card decides each round
    let mut steps = vec![Step::join(), Step::configure(Seat::Alice, 5.0, 3.0, 1.0, 0.3)];
    for round in 0..3 {
        if round > 0 {
            steps.push(Step::next_round(Seat::Alice));
        }
        steps.push(Step::commit(Seat::Alice, Move::Mixed { p: Dec(2.0 / 3.0) }));
        steps.push(Step::commit(Seat::Bob, Move::Identity));
        steps.push(Step::draw(Seat::Bob));
    }

    let run = run_script(42, &steps)?;
    for reply in &run.replies {
        if let Reply::DrawCard(draw) = reply {
            if let Some(round) = &draw.round {
                println!(
                    "round {}: Alice played {:?}, outcome {}, payoffs ({}, {})",
                    round.index, round.actions.alice, round.outcome, round.payoffs.alice.0, round.payoffs.bob.0
                );
            }
        }
    }
    println!("\naudit log:\n{}", run.log);
    assert_eq!(replay_log(&run.log)?, run.log);
    println!("replayed byte for byte");
    Ok(())
}
