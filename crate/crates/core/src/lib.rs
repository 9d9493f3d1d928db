//! Restricted two-player quantum games played on macroscopic devices.
//!
//! * [`game`]: exact outcome distributions, expected payoffs and best responses
//! * [`equilibria`]: Nash equilibria of the bilinear game
//! * [`simulator`]: charged-sphere machines and the 10-card measurement
//! * [`experiments`]: Monte Carlo harness, sweeps, and a brute-force
//!   equilibrium oracle
//!
//! ```
//! use tencards::game::{expected_payoffs, EntangledState, PayoffMatrix, StrategyProfile};
//!
//! let bos = PayoffMatrix::new(5.0, 3.0, 1.0)?;
//! let state = EntangledState::new(0.5)?;
//! let pay = expected_payoffs(StrategyProfile::new(1.0, 1.0)?, state, &bos);
//! assert_eq!(pay.alice, 4.0);
//! # Ok::<(), tencards::Error>(())
//! ```
//!
//! Runnable examples (`cargo run -p tencards --example <name>`): `payoffs`,
//! `equilibria`, `spin_machine`, `card_draw`, `monte_carlo`, `sweep`, `oracle`.

pub mod equilibria;
mod error;
pub mod experiments;
pub mod game;
pub mod simulator;

pub use error::{Error, Result};
