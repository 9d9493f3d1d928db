//! HTTP and WebSocket transport.
//!
//! * `POST /api/v1/message`: one request envelope in, one reply envelope out.
//!   Protocol errors are `200` replies of kind `error`; only an unreadable
//!   body is rejected at the HTTP level.
//! * `GET /api/v1/ws?session_id=..&token=..`: pushes a `state_push` view for
//!   the token's seat on connect and after every change; text frames are
//!   handled like `/api/v1/message`.

use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Query, State};
use axum::http::header;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::Deserialize;
use tower_http::services::ServeDir;

use crate::protocol::{Envelope, Reply, Seat};
use crate::store::{error_reply, SessionHandle, SessionStore};

pub fn router(store: Arc<SessionStore>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/v1/message", post(message))
        .route("/api/v1/ws", get(websocket))
        .with_state(store);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

fn json(body: String) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], body).into_response()
}

async fn message(State(store): State<Arc<SessionStore>>, body: String) -> Response {
    json(store.handle_json(&body))
}

#[derive(Debug, Deserialize)]
struct Subscription {
    session_id: String,
    token: String,
}

async fn websocket(
    State(store): State<Arc<SessionStore>>,
    Query(sub): Query<Subscription>,
    upgrade: WebSocketUpgrade,
) -> Response {
    let subscribed = store.get(&sub.session_id).and_then(|h| h.seat_of(&sub.token).map(|seat| (h, seat)));
    upgrade.on_upgrade(move |mut socket| async move {
        match subscribed {
            Ok((handle, seat)) => serve_socket(socket, store, handle, seat).await,
            Err(e) => {
                let _ = socket.send(text(&Envelope::new(error_reply(e)))).await;
                let _ = socket.send(Message::Close(None)).await;
            }
        }
    })
}

fn text<T: serde::Serialize>(value: &T) -> Message {
    Message::Text(serde_json::to_string(value).expect("replies serialize").into())
}

async fn serve_socket(mut socket: WebSocket, store: Arc<SessionStore>, handle: Arc<SessionHandle>, seat: Seat) {
    let mut changes = handle.subscribe();
    changes.mark_unchanged();
    if socket.send(text(&Envelope::new(Reply::StatePush(handle.view(seat))))).await.is_err() {
        return;
    }
    loop {
        tokio::select! {
            incoming = socket.recv() => match incoming {
                Some(Ok(Message::Text(body))) => {
                    let reply = store.handle_json(body.as_str());
                    if socket.send(Message::Text(reply.into())).await.is_err() {
                        return;
                    }
                }
                Some(Ok(Message::Close(_))) | None | Some(Err(_)) => return,
                Some(Ok(_)) => {}
            },
            changed = changes.changed() => {
                if changed.is_err() {
                    return;
                }
                changes.mark_unchanged();
                if socket.send(text(&Envelope::new(Reply::StatePush(handle.view(seat))))).await.is_err() {
                    return;
                }
            }
        }
    }
}
