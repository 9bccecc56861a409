#![allow(dead_code)]

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use axum::routing::post;
use axum::{Json, Router};
use facetnav::App;
use facetnav_core::corpus::Pos;
use facetnav_core::facets::{FacetTables, FacetValue};
use facetnav_core::{
    ClusteringConfig, Corpus, Document, FacetKind, Mention, MentionKind, NerTag, Sentence, SentenceRef, Summarizer,
    SummarySettings, Token, TopicIndex,
};
use serde_json::Value;

pub fn toy_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/toy")
}

pub fn toy_index() -> TopicIndex {
    TopicIndex::build_dir(&toy_dir(), &ClusteringConfig::default(), false).unwrap()
}

pub fn expected() -> Value {
    serde_json::from_str(&std::fs::read_to_string(toy_dir().join("expected.json")).unwrap()).unwrap()
}

pub fn toy_app() -> Arc<App> {
    Arc::new(App::new(vec![toy_index()], Summarizer::fallback(SummarySettings::default())).unwrap())
}

/// Runs `router` on an ephemeral port in a background runtime.
pub fn spawn(router: Router) -> SocketAddr {
    let (tx, rx) = std::sync::mpsc::channel();
    std::thread::spawn(move || {
        let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build().unwrap();
        rt.block_on(async move {
            let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
            tx.send(listener.local_addr().unwrap()).unwrap();
            axum::serve(listener, router).await.unwrap();
        });
    });
    rx.recv().unwrap()
}

pub fn spawn_app(app: Arc<App>) -> String {
    format!("http://{}", spawn(facetnav::server::router(app, None)))
}

pub struct Response {
    pub status: u16,
    pub body: Value,
}

fn agent() -> ureq::Agent {
    ureq::Agent::config_builder()
        .http_status_as_error(false)
        .timeout_global(Some(Duration::from_secs(30)))
        .build()
        .into()
}

fn finish(r: Result<ureq::http::Response<ureq::Body>, ureq::Error>) -> Response {
    let mut r = r.unwrap();
    let status = r.status().as_u16();
    let text = r.body_mut().read_to_string().unwrap();
    Response {
        status,
        body: serde_json::from_str(&text).unwrap_or(Value::String(text)),
    }
}

pub fn get(url: &str) -> Response {
    finish(agent().get(url).call())
}

pub fn post_json(url: &str, body: &Value) -> Response {
    finish(agent().post(url).send_json(body))
}

pub fn post_raw(url: &str, body: &str) -> Response {
    finish(agent().post(url).header("content-type", "application/json").send(body))
}

/// A `/summarize` endpoint that records requests and answers with a fixed
/// summary after an optional delay.
#[derive(Clone, Default)]
pub struct StubSummarizer {
    pub calls: Arc<AtomicUsize>,
    pub requests: Arc<Mutex<Vec<Value>>>,
}

impl StubSummarizer {
    pub fn spawn(&self, reply: &'static str, delay: Duration) -> String {
        self.spawn_with_status(reply, delay, 200)
    }

    pub fn spawn_with_status(&self, reply: &'static str, delay: Duration, status: u16) -> String {
        let stub = self.clone();
        let router = Router::new().route(
            "/summarize",
            post(move |Json(body): Json<Value>| {
                let stub = stub.clone();
                async move {
                    stub.calls.fetch_add(1, Ordering::SeqCst);
                    stub.requests.lock().unwrap().push(body);
                    tokio::time::sleep(delay).await;
                    let status = axum::http::StatusCode::from_u16(status).unwrap();
                    (status, Json(serde_json::json!({ "summary": reply })))
                }
            }),
        );
        format!("http://{}", spawn(router))
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

/// A URL nothing listens on.
pub fn dead_url() -> String {
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    drop(listener);
    format!("http://{addr}")
}

/// A one-document topic of `n` sentences of `words` tokens each, with one
/// concept `C1` mentioned once per sentence (on its first token).
pub fn long_topic(n: usize, words: usize) -> TopicIndex {
    let sentences: Vec<Sentence> = (0..n)
        .map(|i| {
            let tokens: Vec<Token> = (0..words)
                .map(|w| Token {
                    text: if w == 0 { "casino".to_string() } else { format!("s{i}w{w}") },
                    ws: w + 1 < words,
                    pos: Pos::Noun,
                    ner: NerTag::None,
                })
                .collect();
            let text = tokens.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ");
            Sentence { text, tokens }
        })
        .collect();
    let corpus = Corpus::new(vec![Document {
        doc_id: "L".into(),
        title: String::new(),
        sentences,
    }])
    .unwrap();
    let mentions = (0..n)
        .map(|i| Mention {
            mention_id: format!("m{i}"),
            sentence: SentenceRef::new("L", i),
            token_start: 0,
            token_end: 0,
            surface: "casino".into(),
            kind: MentionKind::Event,
        })
        .collect();
    let facets = FacetTables {
        concepts: vec![FacetValue {
            value_id: "C1".into(),
            facet: FacetKind::Concepts,
            label: "casino".into(),
            mentions,
            category: None,
        }],
        ..Default::default()
    };
    TopicIndex::new("long", "Long", corpus, facets, ClusteringConfig::default()).unwrap()
}
