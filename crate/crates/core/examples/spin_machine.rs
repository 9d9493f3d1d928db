//! The charged-sphere machine: single spin measurements and the two-player
//! game measurement it realizes.
//!
//! cargo run -p tencards --example spin_machine

use std::f64::consts::PI;

use tencards::game::{EntangledState, Outcome};
use tencards::simulator::{bloch_to_density, machine_game_measurement, spin_measurement, BlochPoint, RandomSource, SpinOutcome, UnitVector};

fn main() -> tencards::Result<()> {
    let mut rng = RandomSource::new(7);
    const N: usize = 100_000;

    println!("theta     P(up) measured   cos^2(theta/2)");
    for theta in [0.0, PI / 4.0, PI / 2.0, 2.0 * PI / 3.0, PI] {
        let state = BlochPoint::pure(theta, 0.0)?;
        let mut ups = 0;
        for _ in 0..N {
            if spin_measurement(state, UnitVector::north(), &mut rng)?.outcome == SpinOutcome::Up {
                ups += 1;
            }
        }
        println!("{theta:<9.4} {:<16.4} {:.4}", ups as f64 / N as f64, (theta / 2.0).cos().powi(2));
    }

    let mixed = BlochPoint::new(0.5, PI / 3.0, 0.0)?;
    println!("\ndensity matrix of a mixed point (r=0.5): {:?}", bloch_to_density(mixed).eigenvalues());

    let state = EntangledState::new(0.3)?;
    let t = machine_game_measurement(state, false, true, &mut rng);
    println!("\none game round with Bob flipping: {}", serde_json::to_string(&t).expect("serializable"));
    let oo = (0..N).filter(|_| machine_game_measurement(state, false, false, &mut rng).outcome == Outcome::OO).count();
    println!("P(OO) without flips at a_sq=0.3: {:.4}", oo as f64 / N as f64);
    Ok(())
}
