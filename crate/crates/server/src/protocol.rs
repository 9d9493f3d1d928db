//! Wire format, protocol version 1.
//!
//! Every message is one JSON object `{"protocol_version": 1, "kind": ..., "payload": {...}}`.
//! Requests go to `POST /api/v1/message` (or over the WebSocket); each gets
//! exactly one reply of the same `kind`, or of kind `error`. The server pushes
//! `state_push` snapshots over `GET /api/v1/ws`.
//!
//! All payoffs, probabilities and seeds in server output are decimal strings
//! (`"2.5"`, `"42"`) so that logs and views replay byte for byte. Requests
//! accept either strings or JSON numbers.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use tencards::game::{BestResponse, Outcome, PayoffPair};
use tencards::simulator::{CardStatus, MeasurementTranscript};

pub const PROTOCOL_VERSION: u32 = 1;

/// A real number carried as a decimal string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dec(pub f64);

impl Serialize for Dec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumberOrString {
    Number(f64),
    Text(String),
}

impl<'de> Deserialize<'de> for Dec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match NumberOrString::deserialize(deserializer)? {
            NumberOrString::Number(x) => Ok(Dec(x)),
            NumberOrString::Text(s) => s
                .trim()
                .parse::<f64>()
                .map(Dec)
                .map_err(|_| serde::de::Error::custom(format!("'{s}' is not a decimal number"))),
        }
    }
}

/// A 64-bit seed carried as a decimal string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seed(pub u64);

impl Serialize for Seed {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntOrString {
    Int(u64),
    Text(String),
}

impl<'de> Deserialize<'de> for Seed {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match IntOrString::deserialize(deserializer)? {
            IntOrString::Int(x) => Ok(Seed(x)),
            IntOrString::Text(s) => {
                s.trim().parse().map(Seed).map_err(|_| serde::de::Error::custom(format!("'{s}' is not a 64-bit seed")))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Seat {
    Alice,
    Bob,
}

impl Seat {
    pub fn index(self) -> usize {
        match self {
            Seat::Alice => 0,
            Seat::Bob => 1,
        }
    }

    pub fn other(self) -> Seat {
        match self {
            Seat::Alice => Seat::Bob,
            Seat::Bob => Seat::Alice,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Lobby,
    Configured,
    Committing,
    Measuring,
    Revealed,
}

/// A committed move.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Move {
    Identity,
    Flip,
    /// Identity with probability `p`, sampled when measurement starts.
    Mixed { p: Dec },
}

/// The pure action actually applied in a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Identity,
    Flip,
}

impl Action {
    pub fn is_flip(self) -> bool {
        self == Action::Flip
    }
}

/// Board parameters for `configure`. Omitting all of them in the
/// `Revealed` phase starts the next round on the unchanged board.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfigureParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Dec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Dec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Dec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_sq: Option<Dec>,
    /// Complete the card measurement in one step once both moves are in.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auto_draw: Option<bool>,
}

impl ConfigureParams {
    pub fn board(alpha: f64, beta: f64, gamma: f64, a_sq: f64) -> Self {
        Self { alpha: Some(Dec(alpha)), beta: Some(Dec(beta)), gamma: Some(Dec(gamma)), a_sq: Some(Dec(a_sq)), auto_draw: None }
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_none() && self.beta.is_none() && self.gamma.is_none() && self.a_sq.is_none() && self.auto_draw.is_none()
    }
}

/// Client-to-server messages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Request {
    Create {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<Seed>,
    },
    Join {
        session_id: String,
    },
    Configure {
        session_id: String,
        token: String,
        #[serde(flatten)]
        params: ConfigureParams,
    },
    CommitMove {
        session_id: String,
        token: String,
        #[serde(rename = "move")]
        choice: Move,
    },
    DrawCard {
        session_id: String,
        token: String,
    },
    GetState {
        session_id: String,
        token: String,
    },
    /// Expected payoffs if the caller plays identity with probability `own`
    /// against an opponent who does so with probability `opponent`.
    WhatIf {
        session_id: String,
        token: String,
        own: Dec,
        opponent: Dec,
    },
}

impl Request {
    pub fn kind(&self) -> &'static str {
        match self {
            Request::Create { .. } => "create",
            Request::Join { .. } => "join",
            Request::Configure { .. } => "configure",
            Request::CommitMove { .. } => "commit_move",
            Request::DrawCard { .. } => "draw_card",
            Request::GetState { .. } => "get_state",
            Request::WhatIf { .. } => "what_if",
        }
    }

    pub fn session_id(&self) -> Option<&str> {
        match self {
            Request::Create { .. } => None,
            Request::Join { session_id }
            | Request::Configure { session_id, .. }
            | Request::CommitMove { session_id, .. }
            | Request::DrawCard { session_id, .. }
            | Request::GetState { session_id, .. }
            | Request::WhatIf { session_id, .. } => Some(session_id),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairView {
    pub alice: Dec,
    pub bob: Dec,
}

impl From<PayoffPair> for PairView {
    fn from(p: PayoffPair) -> Self {
        PairView { alice: Dec(p.alice), bob: Dec(p.bob) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoardView {
    pub alpha: Dec,
    pub beta: Dec,
    pub gamma: Dec,
    pub a_sq: Dec,
    pub is_bos: bool,
    pub auto_draw: bool,
}

/// Labels on one player's side of the board: which letter sits next to 1
/// (read when the drawn number falls below `a_sq`) and which next to 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideLabels {
    pub near_one: tencards::game::Label,
    pub near_zero: tencards::game::Label,
}

impl SideLabels {
    pub fn for_action(flip: bool) -> Self {
        use tencards::game::Label;
        if flip {
            SideLabels { near_one: Label::T, near_zero: Label::O }
        } else {
            SideLabels { near_one: Label::O, near_zero: Label::T }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelsView {
    pub own: SideLabels,
    /// Hidden (`null`) until the round is revealed.
    pub opponent: Option<SideLabels>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeatPair<T> {
    pub alice: T,
    pub bob: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundView {
    pub index: u32,
    pub board: BoardView,
    pub moves: SeatPair<Move>,
    pub actions: SeatPair<Action>,
    pub transcript: MeasurementTranscript<Outcome>,
    pub outcome: Outcome,
    pub payoffs: PairView,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrawView {
    pub digits: Vec<u8>,
    pub lo: String,
    pub hi: String,
    pub status: CardStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeatsView {
    pub alice: bool,
    pub bob: bool,
    pub bob_is_bot: bool,
}

/// Everything one seat may see. Before `Revealed` it carries nothing that
/// depends on the opponent's move.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeatView {
    pub session_id: String,
    pub seat: Seat,
    pub phase: Phase,
    pub round_index: u32,
    pub seed: Seed,
    pub seats: SeatsView,
    pub board: Option<BoardView>,
    pub labels: Option<LabelsView>,
    pub own_move: Option<Move>,
    pub opponent_committed: bool,
    pub draw: Option<DrawView>,
    pub history: Vec<RoundView>,
    pub cumulative: PairView,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrawReply {
    pub digit: u8,
    pub draw: DrawView,
    pub phase: Phase,
    /// Present once the measurement is decided.
    pub round: Option<RoundView>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIfReply {
    pub payoffs: PairView,
    pub best_response: BestResponse,
}

/// Server-to-client messages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Reply {
    Create { session_id: String, seat: Seat, token: String, seed: Seed },
    Join { session_id: String, seat: Seat, token: String },
    Configure(SeatView),
    CommitMove { phase: Phase, own_move: Move },
    DrawCard(DrawReply),
    GetState(SeatView),
    WhatIf(WhatIfReply),
    StatePush(SeatView),
    Error { code: String, message: String },
}

/// Versioned wrapper around [`Request`] and [`Reply`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub protocol_version: u32,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Envelope<T> {
    pub fn new(body: T) -> Self {
        Envelope { protocol_version: PROTOCOL_VERSION, body }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_shapes() {
        let json = r#"{"protocol_version":1,"kind":"commit_move","payload":{"session_id":"s","token":"t","move":{"type":"mixed","p":"0.5"}}}"#;
        let env: Envelope<Request> = serde_json::from_str(json).unwrap();
        assert_eq!(
            env.body,
            Request::CommitMove { session_id: "s".into(), token: "t".into(), choice: Move::Mixed { p: Dec(0.5) } }
        );
        assert_eq!(serde_json::to_string(&env).unwrap(), json);

        let json = r#"{"protocol_version":1,"kind":"configure","payload":{"session_id":"s","token":"t","alpha":5,"beta":"3","gamma":1,"a_sq":0.5}}"#;
        let env: Envelope<Request> = serde_json::from_str(json).unwrap();
        let Request::Configure { params, .. } = env.body else { panic!() };
        assert_eq!(params, ConfigureParams::board(5.0, 3.0, 1.0, 0.5));

        let env: Envelope<Request> = serde_json::from_str(r#"{"protocol_version":1,"kind":"create","payload":{}}"#).unwrap();
        assert_eq!(env.body, Request::Create { seed: None });
        let env: Envelope<Request> =
            serde_json::from_str(r#"{"protocol_version":1,"kind":"create","payload":{"seed":"18446744073709551615"}}"#).unwrap();
        assert_eq!(env.body, Request::Create { seed: Some(Seed(u64::MAX)) });
    }

    #[test]
    fn numbers_are_decimal_strings() {
        let reply = Reply::WhatIf(WhatIfReply {
            payoffs: PairView { alice: Dec(2.5), bob: Dec(7.0 / 3.0) },
            best_response: BestResponse::Indifferent,
        });
        assert_eq!(
            serde_json::to_string(&Envelope::new(reply)).unwrap(),
            r#"{"protocol_version":1,"kind":"what_if","payload":{"payoffs":{"alice":"2.5","bob":"2.3333333333333335"},"best_response":"indifferent"}}"#
        );
        assert!(serde_json::from_str::<Dec>(r#""abc""#).is_err());
    }
}
