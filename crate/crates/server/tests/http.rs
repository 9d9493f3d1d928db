use std::sync::Arc;
use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use futures::{SinkExt, StreamExt};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tencards_server::http::router;
use tencards_server::store::{IdSource, SessionStore, StoreConfig};
use tokio_tungstenite::tungstenite::Message;
use tower::ServiceExt;

async fn post(app: &axum::Router, body: Value) -> Value {
    let request = Request::post("/api/v1/message")
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    assert_eq!(response.status(), StatusCode::OK);
    assert_eq!(response.headers()["content-type"], "application/json");
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    serde_json::from_slice(&bytes).unwrap()
}

fn msg(kind: &str, payload: Value) -> Value {
    json!({ "protocol_version": 1, "kind": kind, "payload": payload })
}

#[tokio::test]
async fn message_endpoint_round_trip() {
    let store = Arc::new(SessionStore::new(StoreConfig { ids: IdSource::sequential(), ..Default::default() }));
    let app = router(store, None);
    let created = post(&app, msg("create", json!({ "seed": "42" }))).await;
    assert_eq!(created["kind"], "create");
    let sid = created["payload"]["session_id"].as_str().unwrap();
    let joined = post(&app, msg("join", json!({ "session_id": sid }))).await;
    assert_eq!(joined["payload"]["seat"], "bob");
    let bad = post(&app, json!({ "protocol_version": 9, "kind": "create", "payload": {} })).await;
    assert_eq!(bad["payload"]["code"], "unsupported_version");
}

type Socket = tokio_tungstenite::WebSocketStream<tokio_tungstenite::MaybeTlsStream<tokio::net::TcpStream>>;

async fn next_json(ws: &mut Socket) -> Value {
    loop {
        let frame = tokio::time::timeout(Duration::from_secs(5), ws.next()).await.expect("timely frame").unwrap().unwrap();
        if let Message::Text(text) = frame {
            return serde_json::from_str(text.as_str()).unwrap();
        }
    }
}

/// Reads frames until a reply of `kind` arrives, returning it with any
/// state pushes seen on the way.
async fn until_kind(ws: &mut Socket, kind: &str) -> (Value, Vec<Value>) {
    let mut pushes = Vec::new();
    loop {
        let v = next_json(ws).await;
        if v["kind"] == kind {
            return (v, pushes);
        }
        assert_eq!(v["kind"], "state_push", "{v}");
        pushes.push(v);
    }
}

async fn send(ws: &mut Socket, kind: &str, payload: Value) {
    ws.send(Message::Text(msg(kind, payload).to_string().into())).await.unwrap();
}

#[tokio::test]
async fn websocket_pushes_to_both_seats() {
    let dir = tempfile::tempdir().unwrap();
    let store = Arc::new(SessionStore::new(StoreConfig { log_dir: Some(dir.path().into()), ..Default::default() }));
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let app = router(store.clone(), None);
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });

    let created: Value = serde_json::from_str(&store.handle_json(&msg("create", json!({ "seed": 3 })).to_string())).unwrap();
    let sid = created["payload"]["session_id"].as_str().unwrap().to_string();
    let alice_token = created["payload"]["token"].as_str().unwrap().to_string();
    let url = |token: &str| format!("ws://{addr}/api/v1/ws?session_id={sid}&token={token}");

    let (mut alice, _) = tokio_tungstenite::connect_async(url(&alice_token)).await.unwrap();
    let first = next_json(&mut alice).await;
    assert_eq!(first["kind"], "state_push");
    assert_eq!(first["payload"]["phase"], "lobby");
    assert_eq!(first["payload"]["seat"], "alice");

    // join over the socket; Alice's view changes, so a push follows
    send(&mut alice, "join", json!({ "session_id": sid })).await;
    let (joined, _) = until_kind(&mut alice, "join").await;
    let bob_token = joined["payload"]["token"].as_str().unwrap().to_string();
    let (mut bob, _) = tokio_tungstenite::connect_async(url(&bob_token)).await.unwrap();
    assert_eq!(next_json(&mut bob).await["payload"]["seat"], "bob");

    let auth = |token: &str| json!({ "session_id": sid, "token": token });
    let mut configure = auth(&alice_token);
    configure.as_object_mut().unwrap().extend(
        json!({ "alpha": 5, "beta": 3, "gamma": 1, "a_sq": 1, "auto_draw": true }).as_object().unwrap().clone(),
    );
    send(&mut alice, "configure", configure).await;
    let (reply, _) = until_kind(&mut alice, "configure").await;
    assert_eq!(reply["payload"]["phase"], "committing");

    let mut commit = auth(&alice_token);
    commit["move"] = json!({ "type": "identity" });
    send(&mut alice, "commit_move", commit).await;
    until_kind(&mut alice, "commit_move").await;
    let mut commit = auth(&bob_token);
    commit["move"] = json!({ "type": "identity" });
    send(&mut bob, "commit_move", commit).await;
    let (reply, _) = until_kind(&mut bob, "commit_move").await;
    assert_eq!(reply["payload"]["phase"], "revealed");

    // both seats eventually see the revealed snapshot
    for ws in [&mut alice, &mut bob] {
        loop {
            let v = next_json(ws).await;
            if v["kind"] == "state_push" && v["payload"]["phase"] == "revealed" {
                assert_eq!(v["payload"]["history"][0]["outcome"], "OO");
                assert_eq!(v["payload"]["cumulative"], json!({ "alice": "5", "bob": "3" }));
                break;
            }
        }
    }

    let (mut stranger, _) = tokio_tungstenite::connect_async(url("forged")).await.unwrap();
    assert_eq!(next_json(&mut stranger).await["payload"]["code"], "bad_token");

    let log = std::fs::read_to_string(dir.path().join(format!("{sid}.jsonl"))).unwrap();
    assert_eq!(log.lines().count(), 5);
    assert_eq!(tencards_server::script::replay_log(&log).unwrap(), log);
}

#[tokio::test]
async fn bot_takes_the_empty_seat_after_the_window() {
    let store = Arc::new(SessionStore::new(StoreConfig {
        bot_window: Some(Duration::from_millis(50)),
        ids: IdSource::sequential(),
        ..Default::default()
    }));
    let created: Value = serde_json::from_str(&store.handle_json(&msg("create", json!({})).to_string())).unwrap();
    let sid = created["payload"]["session_id"].as_str().unwrap();
    let handle = store.get(sid).unwrap();
    let mut changes = handle.subscribe();
    tokio::time::timeout(Duration::from_secs(5), changes.changed()).await.unwrap().unwrap();
    let view = handle.view(tencards_server::protocol::Seat::Alice);
    assert!(view.seats.bob && view.seats.bob_is_bot);
    let late: Value = serde_json::from_str(&store.handle_json(&msg("join", json!({ "session_id": sid })).to_string())).unwrap();
    assert_eq!(late["payload"]["code"], "seat_taken");
}
