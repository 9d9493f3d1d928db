//! Expected payoffs and best responses as the entanglement weight varies.
//!
//! cargo run -p tencards --example payoffs

use tencards::game::{best_response_alice, best_response_bob, expected_payoffs, outcome_distribution, EntangledState, Outcome, PayoffMatrix, StrategyProfile};

fn main() -> tencards::Result<()> {
    let bos = PayoffMatrix::standard_bos();
    let profile = StrategyProfile::new(0.8, 0.3)?;

    println!("p=0.8 q=0.3, payoffs (alpha, beta, gamma) = (5, 3, 1)");
    println!("a_sq   P(OO)   P(OT)   P(TO)   P(TT)   E_alice  E_bob");
    for k in 0..=4 {
        let state = EntangledState::new(k as f64 / 4.0)?;
        let d = outcome_distribution(profile, state);
        let e = expected_payoffs(profile, state, &bos);
        let [oo, ot, to, tt] = Outcome::ALL.map(|o| d.get(o));
        println!("{:<6.2} {oo:<7.4} {ot:<7.4} {to:<7.4} {tt:<7.4} {:<8.4} {:.4}", state.a_sq(), e.alice, e.bob);
    }

    // the best response flips once the opponent's mix crosses the threshold
    let state = EntangledState::product();
    for q in [0.0, 1.0 / 3.0, 1.0] {
        println!("Alice's best response to q={q:.3}: {}", best_response_alice(q, state, &bos)?);
    }
    for p in [0.0, 2.0 / 3.0, 1.0] {
        println!("Bob's best response to p={p:.3}: {}", best_response_bob(p, state, &bos)?);
    }
    Ok(())
}
