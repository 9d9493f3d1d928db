//! Session registry and request dispatch, independent of the transport.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use tokio::sync::watch;

use crate::protocol::{Envelope, Reply, Request, Seat, SeatView, Seed, PROTOCOL_VERSION};
use crate::session::{Session, SessionError, SessionResult};

/// How session ids and seat tokens are minted.
#[derive(Debug)]
pub enum IdSource {
    /// Random UUIDs.
    Random,
    /// `s0`, `t1`, ... for reproducible scripts and tests.
    Sequential(AtomicU64),
}

impl IdSource {
    pub fn sequential() -> Self {
        IdSource::Sequential(AtomicU64::new(0))
    }

    fn next(&self, prefix: &str) -> String {
        match self {
            IdSource::Random => uuid::Uuid::new_v4().to_string(),
            IdSource::Sequential(n) => format!("{prefix}{}", n.fetch_add(1, Ordering::Relaxed)),
        }
    }
}

#[derive(Debug)]
pub struct StoreConfig {
    /// Directory receiving one `<session_id>.jsonl` audit log per session.
    pub log_dir: Option<PathBuf>,
    /// Seat the built-in opponent if nobody joins within this window.
    pub bot_window: Option<Duration>,
    pub ids: IdSource,
}

impl Default for StoreConfig {
    fn default() -> Self {
        StoreConfig { log_dir: None, bot_window: None, ids: IdSource::Random }
    }
}

#[derive(Debug)]
pub struct SessionHandle {
    session: Mutex<Session>,
    created: Instant,
    changes: watch::Sender<u64>,
    log_lines: Mutex<Vec<String>>,
    log_file: Mutex<Option<File>>,
}

impl SessionHandle {
    /// Receiver that ticks after every state change.
    pub fn subscribe(&self) -> watch::Receiver<u64> {
        self.changes.subscribe()
    }

    pub fn view(&self, seat: Seat) -> SeatView {
        self.session.lock().expect("session lock").view(seat)
    }

    pub fn seat_of(&self, token: &str) -> SessionResult<Seat> {
        self.session.lock().expect("session lock").seat_of(token)
    }

    /// Audit log lines written so far.
    pub fn log_lines(&self) -> Vec<String> {
        self.log_lines.lock().expect("log lock").clone()
    }

    fn with_session<T>(&self, f: impl FnOnce(&mut Session) -> SessionResult<T>) -> SessionResult<T> {
        let mut session = self.session.lock().expect("session lock");
        let result = f(&mut session);
        let entries = session.take_log();
        drop(session);
        if !entries.is_empty() {
            let mut lines = self.log_lines.lock().expect("log lock");
            let mut file = self.log_file.lock().expect("log lock");
            for entry in entries {
                let line = serde_json::to_string(&entry).expect("log entries serialize");
                if let Some(f) = file.as_mut() {
                    if let Err(e) = writeln!(f, "{line}").and_then(|_| f.flush()) {
                        tracing::warn!("session log write failed: {e}");
                    }
                }
                lines.push(line);
            }
            self.changes.send_modify(|v| *v += 1);
        }
        result
    }
}

#[derive(Debug, Default)]
pub struct SessionStore {
    config: StoreConfig,
    sessions: Mutex<HashMap<String, Arc<SessionHandle>>>,
}

impl SessionStore {
    pub fn new(config: StoreConfig) -> Self {
        SessionStore { config, sessions: Mutex::new(HashMap::new()) }
    }

    pub fn get(&self, session_id: &str) -> SessionResult<Arc<SessionHandle>> {
        let handle =
            self.sessions.lock().expect("store lock").get(session_id).cloned().ok_or(SessionError::UnknownSession)?;
        if let Some(window) = self.config.bot_window {
            if handle.created.elapsed() >= window {
                let _ = handle.with_session(|s| s.seat_bot());
            }
        }
        Ok(handle)
    }

    /// Seats the built-in opponent in an open Bob seat.
    pub fn seat_bot(&self, session_id: &str) -> SessionResult<()> {
        self.get(session_id)?.with_session(|s| s.seat_bot())
    }

    fn create(&self, seed: Option<Seed>) -> SessionResult<Reply> {
        let seed = seed.map(|s| s.0).unwrap_or_else(rand::random);
        let id = self.config.ids.next("s");
        let token = self.config.ids.next("t");
        let log_file = match &self.config.log_dir {
            Some(dir) => {
                let path = dir.join(format!("{id}.jsonl"));
                match OpenOptions::new().create(true).append(true).open(&path) {
                    Ok(f) => Some(f),
                    Err(e) => {
                        tracing::warn!("cannot open session log {}: {e}", path.display());
                        None
                    }
                }
            }
            None => None,
        };
        let handle = Arc::new(SessionHandle {
            session: Mutex::new(Session::new(id.clone(), seed, token.clone())),
            created: Instant::now(),
            changes: watch::channel(0).0,
            log_lines: Mutex::new(Vec::new()),
            log_file: Mutex::new(log_file),
        });
        handle.with_session(|_| Ok(()))?;
        self.sessions.lock().expect("store lock").insert(id.clone(), handle.clone());
        if let (Some(window), Ok(rt)) = (self.config.bot_window, tokio::runtime::Handle::try_current()) {
            let weak = Arc::downgrade(&handle);
            rt.spawn(async move {
                tokio::time::sleep(window).await;
                if let Some(handle) = weak.upgrade() {
                    let _ = handle.with_session(|s| s.seat_bot());
                }
            });
        }
        Ok(Reply::Create { session_id: id, seat: Seat::Alice, token, seed: Seed(seed) })
    }

    fn dispatch(&self, request: Request) -> SessionResult<Reply> {
        match request {
            Request::Create { seed } => self.create(seed),
            Request::Join { session_id } => {
                let handle = self.get(&session_id)?;
                let token = self.config.ids.next("t");
                handle.with_session(|s| s.join(token.clone()))?;
                Ok(Reply::Join { session_id, seat: Seat::Bob, token })
            }
            Request::Configure { session_id, token, params } => {
                self.with_seat(&session_id, &token, |s, seat| s.configure(seat, params).map(Reply::Configure))
            }
            Request::CommitMove { session_id, token, choice } => self.with_seat(&session_id, &token, |s, seat| {
                s.commit_move(seat, choice).map(|(phase, own_move)| Reply::CommitMove { phase, own_move })
            }),
            Request::DrawCard { session_id, token } => {
                self.with_seat(&session_id, &token, |s, seat| s.draw_card(seat).map(Reply::DrawCard))
            }
            Request::GetState { session_id, token } => {
                self.with_seat(&session_id, &token, |s, seat| Ok(Reply::GetState(s.view(seat))))
            }
            Request::WhatIf { session_id, token, own, opponent } => {
                self.with_seat(&session_id, &token, |s, seat| s.what_if(seat, own.0, opponent.0).map(Reply::WhatIf))
            }
        }
    }

    fn with_seat(
        &self,
        session_id: &str,
        token: &str,
        f: impl FnOnce(&mut Session, Seat) -> SessionResult<Reply>,
    ) -> SessionResult<Reply> {
        self.get(session_id)?.with_session(|s| {
            let seat = s.seat_of(token)?;
            f(s, seat)
        })
    }

    /// Answers one request envelope.
    pub fn handle(&self, envelope: Envelope<Request>) -> Envelope<Reply> {
        let reply = if envelope.protocol_version != PROTOCOL_VERSION {
            Err(SessionError::UnsupportedVersion(envelope.protocol_version))
        } else {
            self.dispatch(envelope.body)
        };
        Envelope::new(reply.unwrap_or_else(error_reply))
    }

    /// Answers one raw JSON message.
    pub fn handle_json(&self, text: &str) -> String {
        let reply = match parse_request(text) {
            Ok(envelope) => self.handle(envelope),
            Err(e) => Envelope::new(error_reply(e)),
        };
        serde_json::to_string(&reply).expect("replies serialize")
    }
}

pub fn error_reply(e: SessionError) -> Reply {
    Reply::Error { code: e.code().to_string(), message: e.to_string() }
}

/// Parses a request envelope, reporting a version mismatch before any
/// shape error.
pub fn parse_request(text: &str) -> SessionResult<Envelope<Request>> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| SessionError::BadRequest(e.to_string()))?;
    match value.get("protocol_version").and_then(serde_json::Value::as_u64) {
        Some(v) if v == u64::from(PROTOCOL_VERSION) => {}
        Some(v) => return Err(SessionError::UnsupportedVersion(u32::try_from(v).unwrap_or(u32::MAX))),
        None => return Err(SessionError::BadRequest("missing protocol_version".into())),
    }
    serde_json::from_value(value).map_err(|e| SessionError::BadRequest(e.to_string()))
}
