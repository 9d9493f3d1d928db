//! Serve sessions on 127.0.0.1:8080 with a bot that joins after 30 seconds.
//!
//! cargo run -p tencards-server --example local_server
//!
//! Then, for instance:
//! curl -s localhost:8080/api/v1/message -d '{"protocol_version":1,"kind":"create","payload":{"seed":"42"}}'

use std::sync::Arc;
use std::time::Duration;

use tencards_server::http::router;
use tencards_server::store::{SessionStore, StoreConfig};

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let store = Arc::new(SessionStore::new(StoreConfig { bot_window: Some(Duration::from_secs(30)), ..Default::default() }));
    let listener = tokio::net::TcpListener::bind("127.0.0.1:8080").await?;
    println!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(store, None)).await
}
