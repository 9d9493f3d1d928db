//! Scripted matches and log replay.
//!
//! A script is the sequence of `(seat, kind, payload)` steps that a session
//! log records. Running it against a fresh seeded session reproduces the log
//! byte for byte.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::protocol::{Move, Reply, Seat};
use crate::session::LogEntry;
use crate::store::{error_reply, parse_request, IdSource, SessionStore, StoreConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    /// `None` for server-side steps such as seating the bot.
    pub seat: Option<Seat>,
    pub kind: String,
    #[serde(default)]
    pub payload: serde_json::Value,
}

impl Step {
    pub fn new(seat: Seat, kind: &str, payload: serde_json::Value) -> Self {
        Step { seat: Some(seat), kind: kind.to_string(), payload }
    }

    pub fn join() -> Self {
        Step::new(Seat::Bob, "join", serde_json::json!({}))
    }

    pub fn configure(seat: Seat, alpha: f64, beta: f64, gamma: f64, a_sq: f64) -> Self {
        let params = crate::protocol::ConfigureParams::board(alpha, beta, gamma, a_sq);
        Step::new(seat, "configure", serde_json::to_value(params).expect("serializable"))
    }

    pub fn next_round(seat: Seat) -> Self {
        Step::new(seat, "configure", serde_json::json!({}))
    }

    pub fn commit(seat: Seat, choice: Move) -> Self {
        Step::new(seat, "commit_move", serde_json::json!({ "move": choice }))
    }

    pub fn draw(seat: Seat) -> Self {
        Step::new(seat, "draw_card", serde_json::json!({}))
    }

    pub fn seat_bot() -> Self {
        Step { seat: None, kind: "seat_bot".into(), payload: serde_json::json!({}) }
    }
}

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("step {index} ({kind}) was rejected: {code}: {message}")]
    Rejected { index: usize, kind: String, code: String, message: String },
    #[error("step {index} ({kind}) needs a seat that has not joined")]
    MissingSeat { index: usize, kind: String },
    #[error("malformed log: {0}")]
    MalformedLog(String),
}

/// Result of running a script.
#[derive(Debug, Clone)]
pub struct ScriptRun {
    pub session_id: String,
    /// The session's audit log, one JSON object per line.
    pub log: String,
    pub replies: Vec<Reply>,
}

/// Plays `steps` against a new session created with `seed`.
pub fn run_script(seed: u64, steps: &[Step]) -> Result<ScriptRun, ScriptError> {
    let store = SessionStore::new(StoreConfig { ids: IdSource::sequential(), ..StoreConfig::default() });
    let created = store.handle_json(&format!(
        r#"{{"protocol_version":1,"kind":"create","payload":{{"seed":"{seed}"}}}}"#
    ));
    let created: crate::protocol::Envelope<Reply> = serde_json::from_str(&created).expect("reply parses");
    let Reply::Create { session_id, token, .. } = created.body else {
        unreachable!("create cannot fail");
    };
    let mut tokens = HashMap::from([(Seat::Alice, token)]);
    let mut replies = Vec::new();

    for (index, step) in steps.iter().enumerate() {
        let rejected = |reply: Reply| match reply {
            Reply::Error { code, message } => ScriptError::Rejected { index, kind: step.kind.clone(), code, message },
            _ => unreachable!(),
        };
        if step.kind == "seat_bot" {
            store.seat_bot(&session_id).map_err(|e| rejected(error_reply(e)))?;
            continue;
        }
        let mut payload = match &step.payload {
            serde_json::Value::Object(map) => map.clone(),
            serde_json::Value::Null => serde_json::Map::new(),
            other => return Err(ScriptError::MalformedLog(format!("payload of step {index} is {other}"))),
        };
        payload.insert("session_id".into(), session_id.clone().into());
        if step.kind != "join" {
            let seat = step.seat.ok_or_else(|| ScriptError::MissingSeat { index, kind: step.kind.clone() })?;
            let token = tokens.get(&seat).ok_or_else(|| ScriptError::MissingSeat { index, kind: step.kind.clone() })?;
            payload.insert("token".into(), token.clone().into());
        }
        let text = serde_json::json!({ "protocol_version": 1, "kind": step.kind, "payload": payload }).to_string();
        let reply = match parse_request(&text) {
            Ok(envelope) => store.handle(envelope).body,
            Err(e) => error_reply(e),
        };
        match reply {
            Reply::Error { .. } => return Err(rejected(reply)),
            Reply::Join { ref token, .. } => {
                tokens.insert(Seat::Bob, token.clone());
            }
            _ => {}
        }
        replies.push(reply);
    }

    let handle = store.get(&session_id).expect("session exists");
    let mut log = String::new();
    for line in handle.log_lines() {
        log.push_str(&line);
        log.push('\n');
    }
    Ok(ScriptRun { session_id, log, replies })
}

/// Recovers the seed and the client steps from a session log.
pub fn script_from_log(log: &str) -> Result<(u64, Vec<Step>), ScriptError> {
    let mut entries = log.lines().filter(|l| !l.trim().is_empty()).map(|line| {
        serde_json::from_str::<LogEntry>(line).map_err(|e| ScriptError::MalformedLog(e.to_string()))
    });
    let first = entries.next().ok_or_else(|| ScriptError::MalformedLog("empty log".into()))??;
    if first.kind != "create" {
        return Err(ScriptError::MalformedLog(format!("log starts with {}", first.kind)));
    }
    let seed = serde_json::from_value::<crate::protocol::Seed>(first.payload["seed"].clone())
        .map_err(|e| ScriptError::MalformedLog(format!("seed: {e}")))?
        .0;
    let mut steps = Vec::new();
    for entry in entries {
        let entry = entry?;
        // follows from the preceding configure
        if entry.kind == "bot_commit" {
            continue;
        }
        steps.push(Step { seat: entry.seat, kind: entry.kind, payload: entry.payload });
    }
    Ok((seed, steps))
}

/// Re-runs a session log and returns the regenerated log.
pub fn replay_log(log: &str) -> Result<String, ScriptError> {
    let (seed, steps) = script_from_log(log)?;
    Ok(run_script(seed, &steps)?.log)
}
