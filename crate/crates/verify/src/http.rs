//! JSON API over a [`SessionStore`].

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use pointvos_core::sampling::CandidateSet;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;

use crate::error::VerifyError;
use crate::session::{Decision, ExportOptions, Overlay};
use crate::store::SessionStore;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    pub video_id: String,
    pub candidates: CandidateSet,
    #[serde(default)]
    pub overlay: Overlay,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PostVerdict {
    pub item: usize,
    pub decision: Decision,
    pub duration: f64,
}

/// UI configuration served at `GET /config`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UiConfig {
    pub hotkeys: Hotkeys,
    pub colors: Colors,
    pub frame_url: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Hotkeys {
    pub accept: String,
    pub reject: String,
    pub ambiguous: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Colors {
    pub foreground: String,
    pub background: String,
    pub uncertain: String,
}

impl Default for UiConfig {
    fn default() -> Self {
        UiConfig {
            hotkeys: Hotkeys { accept: "a".into(), reject: "r".into(), ambiguous: "x".into() },
            colors: Colors {
                foreground: "#22c55e".into(),
                background: "#ef4444".into(),
                uncertain: "#9ca3af".into(),
            },
            frame_url: crate::store::DEFAULT_FRAME_URL.into(),
        }
    }
}

struct ApiError(VerifyError);

impl From<VerifyError> for ApiError {
    fn from(e: VerifyError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match &self.0 {
            VerifyError::UnknownSession(_) => StatusCode::NOT_FOUND,
            VerifyError::Conflict(_) | VerifyError::Incomplete { .. } => StatusCode::CONFLICT,
            VerifyError::Invalid(_) | VerifyError::Json(_) => StatusCode::BAD_REQUEST,
            VerifyError::Io { .. } | VerifyError::Corrupt { .. } => StatusCode::INTERNAL_SERVER_ERROR,
        };
        if status.is_server_error() {
            log::error!("{}", self.0);
        }
        let mut body = json!({ "error": self.0.to_string() });
        if let VerifyError::Incomplete { remaining } = &self.0 {
            body["remaining"] = json!(remaining);
        }
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

async fn blocking<T, F>(f: F) -> ApiResult<T>
where
    F: FnOnce() -> crate::Result<T> + Send + 'static,
    T: Send + 'static,
{
    match tokio::task::spawn_blocking(f).await {
        Ok(r) => r.map_err(ApiError),
        Err(e) => Err(ApiError(VerifyError::io("<worker>", std::io::Error::other(e)))),
    }
}

type Shared = Arc<SessionStore>;

async fn create(State(store): State<Shared>, Json(req): Json<CreateSession>) -> ApiResult<Response> {
    let state = blocking(move || store.create(&req.video_id, &req.candidates, req.overlay)).await?;
    let body = json!({
        "session_id": state.id(),
        "video_id": state.header.video_id,
        "object_id": state.header.object_id,
        "items": state.header.items.len(),
    });
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn list(State(store): State<Shared>) -> impl IntoResponse {
    Json(store.list())
}

async fn next(State(store): State<Shared>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    Ok(Json(store.next_item(&id)?))
}

async fn progress(State(store): State<Shared>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    Ok(Json(store.progress(&id)?))
}

async fn verdict(
    State(store): State<Shared>,
    Path(id): Path<String>,
    Json(v): Json<PostVerdict>,
) -> ApiResult<impl IntoResponse> {
    let p = blocking(move || store.record(&id, v.item, v.decision, v.duration)).await?;
    Ok(Json(p))
}

async fn export(
    State(store): State<Shared>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<impl IntoResponse> {
    let opts: ExportOptions = if body.iter().all(u8::is_ascii_whitespace) {
        ExportOptions::default()
    } else {
        serde_json::from_slice(&body).map_err(VerifyError::from)?
    };
    Ok(Json(store.export(&id, opts)?))
}

pub fn router(store: Arc<SessionStore>) -> Router {
    router_with_config(store, UiConfig::default())
}

pub fn router_with_config(store: Arc<SessionStore>, config: UiConfig) -> Router {
    let frames = ServeDir::new(store.frames_dir());
    let config = Arc::new(config);
    Router::new()
        .route("/config", get(move || async move { Json((*config).clone()) }))
        .route("/sessions", post(create).get(list))
        .route("/sessions/{id}/next", get(next))
        .route("/sessions/{id}/verdicts", post(verdict))
        .route("/sessions/{id}/progress", get(progress))
        .route("/sessions/{id}/export", post(export))
        .nest_service("/frames", frames)
        .with_state(store)
}

/// Opens the store under `root` and serves until the process exits.
pub async fn serve(addr: SocketAddr, root: PathBuf) -> std::io::Result<()> {
    let store = tokio::task::spawn_blocking(move || SessionStore::open(root))
        .await
        .map_err(std::io::Error::other)?
        .map_err(std::io::Error::other)?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(store))).await
}
