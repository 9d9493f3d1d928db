//! One live match between two seats.
//!
//! Phases move only along
//! `Lobby -> Configured -> Committing -> Measuring -> Revealed`, then either
//! `Revealed -> Committing` (next round, `configure` with no parameters) or
//! `Revealed -> Configured -> Committing` (new board). `configure` passes
//! through `Configured` and lands in `Committing` in the same step.
//!
//! All randomness comes from the session's [`RandomSource`]: mixed moves are
//! sampled on its uniform stream when both moves are in, cards come from its
//! digit stream. A session is therefore fully determined by its seed and the
//! sequence of accepted requests, and every mutating request appends a
//! [`LogEntry`] that can be replayed.

use serde::{Deserialize, Serialize};
use tencards::game::{best_response_bob, expected_payoffs, BestResponse, EntangledState, Outcome, PayoffMatrix, PayoffPair, StrategyProfile};
use tencards::simulator::{CardDraw, CardStatus, MeasurementTranscript, RandomSource, Randomness, DEFAULT_MAX_DIGITS};
use thiserror::Error;

use crate::protocol::{
    Action, BoardView, ConfigureParams, Dec, DrawReply, DrawView, LabelsView, Move, PairView, Phase, RoundView, Seat,
    SeatPair, SeatView, SeatsView, Seed, SideLabels, WhatIfReply,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("unknown session")]
    UnknownSession,
    #[error("invalid or missing seat token")]
    BadToken,
    #[error("seat already taken")]
    SeatTaken,
    #[error("{kind} is not allowed in phase {phase:?}")]
    WrongPhase { kind: &'static str, phase: Phase },
    #[error("both seats must be filled before configuring")]
    NotReady,
    #[error("move already committed this round")]
    AlreadyCommitted,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("unsupported protocol version {0}")]
    UnsupportedVersion(u32),
}

impl SessionError {
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::UnknownSession => "unknown_session",
            SessionError::BadToken => "bad_token",
            SessionError::SeatTaken => "seat_taken",
            SessionError::WrongPhase { .. } => "wrong_phase",
            SessionError::NotReady => "not_ready",
            SessionError::AlreadyCommitted => "already_committed",
            SessionError::InvalidParameters(_) => "invalid_parameters",
            SessionError::BadRequest(_) => "bad_request",
            SessionError::UnsupportedVersion(_) => "unsupported_version",
        }
    }
}

pub type SessionResult<T> = Result<T, SessionError>;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Board {
    payoffs: PayoffMatrix,
    state: EntangledState,
    auto_draw: bool,
}

impl Board {
    fn view(&self) -> BoardView {
        BoardView {
            alpha: Dec(self.payoffs.alpha()),
            beta: Dec(self.payoffs.beta()),
            gamma: Dec(self.payoffs.gamma()),
            a_sq: Dec(self.state.a_sq()),
            is_bos: self.payoffs.is_bos(),
            auto_draw: self.auto_draw,
        }
    }
}

#[derive(Debug, Clone)]
enum Occupant {
    Player { token: String },
    Bot,
}

#[derive(Debug, Clone)]
struct Measurement {
    actions: [Action; 2],
    draw: CardDraw,
}

/// Audit record of one accepted, state-changing request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub seq: u64,
    /// Seat that sent the request; `null` for server-initiated steps.
    pub seat: Option<Seat>,
    pub kind: String,
    /// Request payload without session id or token.
    pub payload: serde_json::Value,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    Created { seed: Seed },
    Joined { seat: Seat },
    BotSeated,
    Phase { from: Phase, to: Phase },
    Configured { board: BoardView },
    Committed { seat: Seat, #[serde(rename = "move")] choice: Move },
    Sampled { actions: SeatPair<Action> },
    Card { digit: u8, lo: String, hi: String },
    Revealed { round: RoundView },
}

#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    seed: u64,
    rng: RandomSource,
    phase: Phase,
    seats: [Option<Occupant>; 2],
    board: Option<Board>,
    moves: [Option<Move>; 2],
    measurement: Option<Measurement>,
    history: Vec<RoundView>,
    cumulative: PayoffPair,
    round_index: u32,
    log_seq: u64,
    pending_log: Vec<LogEntry>,
}

fn draw_view(draw: &CardDraw) -> DrawView {
    DrawView { digits: draw.digits().to_vec(), lo: draw.lo_decimal(), hi: draw.hi_decimal(), status: draw.status() }
}

fn check_move(choice: Move) -> SessionResult<Move> {
    if let Move::Mixed { p } = choice {
        if !(p.0.is_finite() && (0.0..=1.0).contains(&p.0)) {
            return Err(SessionError::InvalidParameters(format!("mixed move probability must lie in [0, 1], got {}", p.0)));
        }
    }
    Ok(choice)
}

impl Session {
    /// New session in `Lobby` with Alice seated.
    pub fn new(id: impl Into<String>, seed: u64, alice_token: impl Into<String>) -> Self {
        let mut s = Session {
            id: id.into(),
            seed,
            rng: RandomSource::new(seed),
            phase: Phase::Lobby,
            seats: [Some(Occupant::Player { token: alice_token.into() }), None],
            board: None,
            moves: [None, None],
            measurement: None,
            history: Vec::new(),
            cumulative: PayoffPair::new(0.0, 0.0),
            round_index: 0,
            log_seq: 0,
            pending_log: Vec::new(),
        };
        s.log(Some(Seat::Alice), "create", serde_json::json!({ "seed": Seed(seed) }), vec![Event::Created { seed: Seed(seed) }]);
        s
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn history(&self) -> &[RoundView] {
        &self.history
    }

    pub fn cumulative(&self) -> PayoffPair {
        self.cumulative
    }

    /// Log entries produced since the last call.
    pub fn take_log(&mut self) -> Vec<LogEntry> {
        std::mem::take(&mut self.pending_log)
    }

    fn log(&mut self, seat: Option<Seat>, kind: &str, payload: serde_json::Value, events: Vec<Event>) {
        self.pending_log.push(LogEntry { seq: self.log_seq, seat, kind: kind.to_string(), payload, events });
        self.log_seq += 1;
    }

    fn transition(&mut self, to: Phase, events: &mut Vec<Event>) {
        events.push(Event::Phase { from: self.phase, to });
        self.phase = to;
    }

    /// Seat holding `token`.
    pub fn seat_of(&self, token: &str) -> SessionResult<Seat> {
        for seat in [Seat::Alice, Seat::Bob] {
            if let Some(Occupant::Player { token: t }) = &self.seats[seat.index()] {
                if t == token {
                    return Ok(seat);
                }
            }
        }
        Err(SessionError::BadToken)
    }

    fn bob_is_bot(&self) -> bool {
        matches!(self.seats[1], Some(Occupant::Bot))
    }

    pub fn join(&mut self, bob_token: impl Into<String>) -> SessionResult<()> {
        if self.phase != Phase::Lobby {
            return Err(SessionError::WrongPhase { kind: "join", phase: self.phase });
        }
        if self.seats[1].is_some() {
            return Err(SessionError::SeatTaken);
        }
        self.seats[1] = Some(Occupant::Player { token: bob_token.into() });
        self.log(Some(Seat::Bob), "join", serde_json::json!({}), vec![Event::Joined { seat: Seat::Bob }]);
        Ok(())
    }

    /// Fills an empty Bob seat with the built-in opponent.
    pub fn seat_bot(&mut self) -> SessionResult<()> {
        if self.phase != Phase::Lobby {
            return Err(SessionError::WrongPhase { kind: "seat_bot", phase: self.phase });
        }
        if self.seats[1].is_some() {
            return Err(SessionError::SeatTaken);
        }
        self.seats[1] = Some(Occupant::Bot);
        self.log(None, "seat_bot", serde_json::json!({}), vec![Event::BotSeated]);
        Ok(())
    }

    pub fn configure(&mut self, seat: Seat, params: ConfigureParams) -> SessionResult<SeatView> {
        match self.phase {
            Phase::Lobby if self.seats.iter().all(Option::is_some) => {}
            Phase::Lobby => return Err(SessionError::NotReady),
            Phase::Configured | Phase::Revealed => {}
            phase => return Err(SessionError::WrongPhase { kind: "configure", phase }),
        }

        let mut events = Vec::new();
        let next_round_only = params.is_empty() && self.board.is_some();
        if !next_round_only {
            let current = self.board;
            let pick = |given: Option<Dec>, name: &str, old: Option<f64>| {
                given.map(|d| d.0).or(old).ok_or_else(|| SessionError::InvalidParameters(format!("{name} is required")))
            };
            let alpha = pick(params.alpha, "alpha", current.map(|b| b.payoffs.alpha()))?;
            let beta = pick(params.beta, "beta", current.map(|b| b.payoffs.beta()))?;
            let gamma = pick(params.gamma, "gamma", current.map(|b| b.payoffs.gamma()))?;
            let a_sq = pick(params.a_sq, "a_sq", current.map(|b| b.state.a_sq()))?;
            let payoffs =
                PayoffMatrix::new(alpha, beta, gamma).map_err(|e| SessionError::InvalidParameters(e.to_string()))?;
            let state = EntangledState::new(a_sq).map_err(|e| SessionError::InvalidParameters(e.to_string()))?;
            let auto_draw = params.auto_draw.or(current.map(|b| b.auto_draw)).unwrap_or(false);
            let board = Board { payoffs, state, auto_draw };
            self.board = Some(board);
            self.transition(Phase::Configured, &mut events);
            events.push(Event::Configured { board: board.view() });
        }
        self.moves = [None, None];
        self.measurement = None;
        self.transition(Phase::Committing, &mut events);
        let payload = serde_json::to_value(params).expect("serializable");
        self.log(Some(seat), "configure", payload, events);

        if self.bob_is_bot() {
            self.bot_commit();
        }
        Ok(self.view(seat))
    }

    fn bot_commit(&mut self) {
        let board = self.board.expect("configured");
        // best response to an opponent who is equally likely to flip or not
        let choice = match best_response_bob(0.5, board.state, &board.payoffs).expect("valid probability") {
            BestResponse::Identity => Move::Identity,
            BestResponse::Flip => Move::Flip,
            BestResponse::Indifferent => Move::Mixed { p: Dec(0.5) },
        };
        let mut events = Vec::new();
        self.record_commit(Seat::Bob, choice, &mut events);
        self.log(None, "bot_commit", serde_json::json!({ "move": choice }), events);
    }

    fn record_commit(&mut self, seat: Seat, choice: Move, events: &mut Vec<Event>) {
        self.moves[seat.index()] = Some(choice);
        events.push(Event::Committed { seat, choice });
        if let [Some(a), Some(b)] = self.moves {
            let actions = [self.sample(a), self.sample(b)];
            events.push(Event::Sampled { actions: SeatPair { alice: actions[0], bob: actions[1] } });
            let board = self.board.expect("configured");
            let draw = CardDraw::new(board.state, DEFAULT_MAX_DIGITS).expect("default digit budget");
            self.measurement = Some(Measurement { actions, draw });
            self.transition(Phase::Measuring, events);
            if board.auto_draw {
                while self.phase == Phase::Measuring {
                    self.draw_one(events);
                }
            }
        }
    }

    fn sample(&mut self, choice: Move) -> Action {
        match choice {
            Move::Identity => Action::Identity,
            Move::Flip => Action::Flip,
            Move::Mixed { p } => {
                if self.rng.chance(p.0) {
                    Action::Identity
                } else {
                    Action::Flip
                }
            }
        }
    }

    pub fn commit_move(&mut self, seat: Seat, choice: Move) -> SessionResult<(Phase, Move)> {
        if self.phase != Phase::Committing {
            return Err(SessionError::WrongPhase { kind: "commit_move", phase: self.phase });
        }
        if self.moves[seat.index()].is_some() {
            return Err(SessionError::AlreadyCommitted);
        }
        let choice = check_move(choice)?;
        let mut events = Vec::new();
        self.record_commit(seat, choice, &mut events);
        self.log(Some(seat), "commit_move", serde_json::json!({ "move": choice }), events);
        Ok((self.phase, choice))
    }

    /// Draws one card; returns the digit.
    fn draw_one(&mut self, events: &mut Vec<Event>) -> u8 {
        let digit = self.rng.digit();
        let m = self.measurement.as_mut().expect("measuring");
        let status = m.draw.push(digit).expect("pending draw accepts a digit");
        events.push(Event::Card { digit, lo: m.draw.lo_decimal(), hi: m.draw.hi_decimal() });
        if let CardStatus::Decided { .. } = status {
            let round = self.finish_round();
            events.push(Event::Revealed { round });
            self.transition(Phase::Revealed, events);
        }
        digit
    }

    fn finish_round(&mut self) -> RoundView {
        let board = self.board.expect("configured");
        let m = self.measurement.as_ref().expect("measuring");
        let transcript: MeasurementTranscript<Outcome> = m
            .draw
            .transcript()
            .expect("decided")
            .map(|branch| Outcome::from_branch(branch, m.actions[0].is_flip(), m.actions[1].is_flip()));
        let outcome = transcript.outcome;
        let pay = board.payoffs.payoff(outcome);
        self.cumulative = PayoffPair::new(self.cumulative.alice + pay.alice, self.cumulative.bob + pay.bob);
        let round = RoundView {
            index: self.round_index,
            board: board.view(),
            moves: SeatPair { alice: self.moves[0].expect("committed"), bob: self.moves[1].expect("committed") },
            actions: SeatPair { alice: m.actions[0], bob: m.actions[1] },
            transcript,
            outcome,
            payoffs: pay.into(),
        };
        self.history.push(round.clone());
        self.round_index += 1;
        round
    }

    pub fn draw_card(&mut self, seat: Seat) -> SessionResult<DrawReply> {
        if self.phase != Phase::Measuring {
            return Err(SessionError::WrongPhase { kind: "draw_card", phase: self.phase });
        }
        let mut events = Vec::new();
        let digit = self.draw_one(&mut events);
        self.log(Some(seat), "draw_card", serde_json::json!({}), events);
        let draw = match &self.measurement {
            Some(m) => draw_view(&m.draw),
            None => unreachable!("measurement kept until the next configure"),
        };
        let round = (self.phase == Phase::Revealed).then(|| self.history.last().cloned()).flatten();
        Ok(DrawReply { digit, draw, phase: self.phase, round })
    }

    pub fn what_if(&self, seat: Seat, own: f64, opponent: f64) -> SessionResult<WhatIfReply> {
        let Some(board) = self.board else {
            return Err(SessionError::WrongPhase { kind: "what_if", phase: self.phase });
        };
        let invalid = |e: tencards::Error| SessionError::InvalidParameters(e.to_string());
        let profile = match seat {
            Seat::Alice => StrategyProfile::new(own, opponent),
            Seat::Bob => StrategyProfile::new(opponent, own),
        }
        .map_err(invalid)?;
        let payoffs = expected_payoffs(profile, board.state, &board.payoffs);
        let best_response = match seat {
            Seat::Alice => tencards::game::best_response_alice(opponent, board.state, &board.payoffs),
            Seat::Bob => best_response_bob(opponent, board.state, &board.payoffs),
        }
        .map_err(invalid)?;
        Ok(WhatIfReply { payoffs: payoffs.into(), best_response })
    }

    /// What `seat` is allowed to see right now.
    pub fn view(&self, seat: Seat) -> SeatView {
        let own_move = self.moves[seat.index()];
        let revealed = self.phase == Phase::Revealed;
        let labels = self.board.map(|_| {
            let actions = self.measurement.as_ref().map(|m| m.actions);
            let own_flip = match (revealed, actions, own_move) {
                (true, Some(a), _) => a[seat.index()].is_flip(),
                (_, _, Some(Move::Flip)) => true,
                _ => false,
            };
            LabelsView {
                own: SideLabels::for_action(own_flip),
                opponent: if revealed {
                    actions.map(|a| SideLabels::for_action(a[seat.other().index()].is_flip()))
                } else {
                    None
                },
            }
        });
        SeatView {
            session_id: self.id.clone(),
            seat,
            phase: self.phase,
            round_index: self.round_index,
            seed: Seed(self.seed),
            seats: SeatsView { alice: self.seats[0].is_some(), bob: self.seats[1].is_some(), bob_is_bot: self.bob_is_bot() },
            board: self.board.map(|b| b.view()),
            labels,
            own_move,
            opponent_committed: self.moves[seat.other().index()].is_some(),
            draw: self.measurement.as_ref().map(|m| draw_view(&m.draw)),
            history: self.history.clone(),
            cumulative: PairView::from(self.cumulative),
        }
    }
}
