//! Two-sphere machine for the entangled game.
//!
//! Charges `q1`, `q2 = Q - q1` sit on opposite poles of the two spheres and
//! the rod ends feel `F1 ~ q1 / |b|^2` and `F2 ~ q2 / |a|^2`. `F1 > F2` reduces
//! to `q1 / Q > |b|^2`, which selects branch A (read `(O, O)` on an unflipped
//! board) with probability `|a|^2`. The rod itself never changes the answer
//! for this game, so it is not modelled.

use super::rng::Randomness;
use super::transcript::MeasurementTranscript;
use crate::game::{Branch, EntangledState, Outcome};

/// Raw branch for a known charge fraction: A iff `u1 >= |b|^2`.
///
/// The inclusive comparison makes `|a|^2 = 1` always A and `|a|^2 = 0` always
/// B (`u1 < 1`); the boundary itself has probability zero.
pub fn machine_branch(state: EntangledState, charge_fraction: f64) -> Branch {
    if charge_fraction >= state.b_sq() {
        Branch::A
    } else {
        Branch::B
    }
}

pub fn machine_game_measurement(
    state: EntangledState,
    flip_alice: bool,
    flip_bob: bool,
    rng: &mut impl Randomness,
) -> MeasurementTranscript<Outcome> {
    let u1 = rng.uniform();
    let outcome = Outcome::from_branch(machine_branch(state, u1), flip_alice, flip_bob);
    MeasurementTranscript::machine(outcome, u1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::rng::{RandomSource, Scripted};

    fn state(a: f64) -> EntangledState {
        EntangledState::new(a).unwrap()
    }

    #[test]
    fn examples() {
        let t = machine_game_measurement(state(0.25), false, false, &mut Scripted::uniforms([0.8]));
        assert_eq!(t.outcome, Outcome::OO);
        assert_eq!(t.charge_fraction(), Some(0.8));

        let t = machine_game_measurement(state(0.25), false, false, &mut Scripted::uniforms([0.5]));
        assert_eq!(t.outcome, Outcome::TT);

        for u in [0.0, 0.3, 0.999_999] {
            let t = machine_game_measurement(state(1.0), true, false, &mut Scripted::uniforms([u]));
            assert_eq!(t.outcome, Outcome::TO);
        }
    }

    #[test]
    fn endpoints_are_exact() {
        let mut rng = RandomSource::new(9);
        for _ in 0..10_000 {
            assert_eq!(machine_game_measurement(state(1.0), false, false, &mut rng).outcome, Outcome::OO);
            assert_eq!(machine_game_measurement(state(0.0), false, false, &mut rng).outcome, Outcome::TT);
        }
    }
}
