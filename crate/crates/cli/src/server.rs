//! HTTP routes over [`App`]. Query work runs on the blocking pool so a slow
//! external summarizer never stalls unrelated requests.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use facetnav_core::SentenceRef;
use serde::Serialize;
use tower_http::services::ServeDir;

use crate::app::{ApiError, App, QueryRequest, SelectionSource};

const BUILTIN_INDEX: &str = include_str!("../assets/index.html");

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        let code = match &self {
            ApiError::NotFound(_) => "not_found",
            ApiError::BadRequest(_) => "bad_request",
            ApiError::Internal(_) => "internal",
        };
        let body = serde_json::json!({"error": {"code": code, "message": self.to_string()}});
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

async fn blocking<T, F>(app: Arc<App>, f: F) -> ApiResult<T>
where
    T: Send + 'static,
    F: FnOnce(&App) -> Result<T, ApiError> + Send + 'static,
{
    tokio::task::spawn_blocking(move || f(&app))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
        .map(Json)
}

/// The API router; static assets are served from `ui_dir` when given,
/// otherwise a built-in page.
pub fn router(app: Arc<App>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/topics", get(topics))
        .route("/api/topics/{topic}/query", post(query))
        .route("/api/topics/{topic}/values/{value}/mentions", get(mentions))
        .route("/api/topics/{topic}/sentences", get(sentences))
        .route("/api/topics/{topic}/documents/{doc}", get(document))
        .route("/api/sessions/{session}/history", get(history))
        .route("/api/{*rest}", get(api_not_found).post(api_not_found))
        .with_state(app);
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(|| async { Html(BUILTIN_INDEX) })),
    }
}

async fn api_not_found() -> ApiError {
    ApiError::NotFound("no such endpoint".into())
}

async fn topics(State(app): State<Arc<App>>) -> impl IntoResponse {
    Json(app.topics())
}

async fn query(
    State(app): State<Arc<App>>,
    Path(topic): Path<String>,
    body: Result<Json<QueryRequest>, JsonRejection>,
) -> ApiResult<impl Serialize> {
    let Json(request) = body.map_err(|e| ApiError::BadRequest(e.body_text()))?;
    blocking(app, move |app| app.query(&topic, request)).await
}

async fn mentions(State(app): State<Arc<App>>, Path((topic, value)): Path<(String, String)>) -> ApiResult<impl Serialize> {
    blocking(app, move |app| app.mentions(&topic, &value)).await
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty())
}

fn selection_source(params: &HashMap<String, String>) -> SelectionSource {
    SelectionSource {
        selected: params
            .get("selected")
            .map(|s| split_list(s).map(str::to_string).collect()),
        session: params.get("session").cloned(),
    }
}

async fn sentences(
    State(app): State<Arc<App>>,
    Path(topic): Path<String>,
    Query(params): Query<HashMap<String, String>>,
) -> ApiResult<impl Serialize> {
    let raw = params
        .get("refs")
        .ok_or_else(|| ApiError::BadRequest("missing `refs` parameter".into()))?;
    let refs = split_list(raw)
        .map(|r| SentenceRef::parse(r).ok_or_else(|| ApiError::BadRequest(format!("bad sentence reference `{r}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let source = selection_source(&params);
    blocking(app, move |app| app.sentences(&topic, &refs, source)).await
}

async fn document(
    State(app): State<Arc<App>>,
    Path((topic, doc)): Path<(String, String)>,
    Query(params): Query<HashMap<String, String>>,
) -> ApiResult<impl Serialize> {
    let flag = params
        .get("flag")
        .map(|s| {
            split_list(s)
                .map(|i| i.parse().map_err(|_| ApiError::BadRequest(format!("bad sentence index `{i}`"))))
                .collect::<Result<Vec<usize>, _>>()
        })
        .transpose()?;
    let source = selection_source(&params);
    blocking(app, move |app| app.document(&topic, &doc, flag.as_deref(), source)).await
}

async fn history(State(app): State<Arc<App>>, Path(session): Path<String>) -> ApiResult<impl Serialize> {
    blocking(app, move |app| app.history(&session)).await
}

/// Serves until interrupted.
pub async fn serve(app: Arc<App>, ui_dir: Option<PathBuf>, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(app, ui_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
