//! Live two-player sessions of the restricted entangled Battle of the Sexes,
//! served over HTTP and WebSocket.
//!
//! [`session::Session`] is the synchronous state machine for one match,
//! [`store::SessionStore`] routes [`protocol`] envelopes to sessions, and
//! [`http::router`] exposes the store. [`script`] replays recorded matches.
//!
//! ```
//! use tencards_server::protocol::{Move, Seat};
//! use tencards_server::script::{run_script, Step};
//!
//! let steps = [
//!     Step::join(),
//!     Step::configure(Seat::Alice, 5.0, 3.0, 1.0, 1.0),
//!     Step::commit(Seat::Alice, Move::Identity),
//!     Step::commit(Seat::Bob, Move::Identity),
//!     Step::draw(Seat::Alice),
//! ];
//! let run = run_script(42, &steps).unwrap();
//! assert_eq!(run.log, run_script(42, &steps).unwrap().log);
//! ```
//!
//! Examples: `cargo run -p tencards-server --example scripted_match` and
//! `--example local_server`.

pub mod http;
pub mod protocol;
pub mod script;
pub mod session;
pub mod store;
