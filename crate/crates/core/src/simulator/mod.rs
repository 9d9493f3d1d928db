//! Stochastic measurement backends: the single-sphere machine, the entangled
//! two-sphere machine, and the 10-card procedure, all driven by a seeded
//! [`RandomSource`].

pub mod bloch;
pub mod cards;
pub mod machine;
pub mod rng;
pub mod transcript;

pub use bloch::{angle_between, bloch_to_density, spin_measurement, BlochPoint, DensityMatrix, SpinOutcome, UnitVector};
pub use cards::{card_game_measurement, card_measurement, CardDraw, CardStatus, DEFAULT_MAX_DIGITS};
pub use machine::machine_game_measurement;
pub use rng::{RandomSource, Randomness, Scripted};
pub use transcript::{Backend, Draws, MeasurementTranscript};

use crate::game::{EntangledState, Outcome};

/// Runs one game measurement on the chosen backend.
pub fn game_measurement(
    backend: Backend,
    state: EntangledState,
    flip_alice: bool,
    flip_bob: bool,
    rng: &mut impl Randomness,
) -> MeasurementTranscript<Outcome> {
    match backend {
        Backend::Machine => machine_game_measurement(state, flip_alice, flip_bob, rng),
        Backend::Cards => card_game_measurement(state, flip_alice, flip_bob, rng),
    }
}
