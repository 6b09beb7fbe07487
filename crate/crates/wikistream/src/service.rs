//! HTTP/JSON service.
//!
//! | route | body | result |
//! |---|---|---|
//! | `POST /events` | event record | prediction; 400 invalid, 409 duplicate |
//! | `GET /explanations/{event_id}` | | explanation; 404 |
//! | `GET /users/{user_id}` | | history, behavior, contributions; 404 |
//! | `POST /feedback` | `{event_id, label}` | feedback record; 404, 409 |
//! | `GET /metrics` | | live prequential metrics |
//!
//! Every mutation goes through one mutex-guarded session, in request
//! order; explanation text from the language model is filled in after the
//! prediction has been returned.

use std::path::PathBuf;
use std::sync::{Arc, Mutex, MutexGuard};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use wikistream_core::eval::MetricsSnapshot;
use wikistream_core::explain::{Explanation, FeedbackRecord};
use wikistream_core::features::DatasetProfile;
use wikistream_core::models::ModelKind;
use wikistream_core::pipeline::{Pipeline, PipelineConfig};
use wikistream_core::session::{LiveSession, Prediction, UserView};
use wikistream_core::text::TextAnalyzers;
use wikistream_core::{Label, Proba, Timestamp, WikiEvent};

use crate::error::Result;
use crate::jsonl::EventRecord;
use crate::llm::SharedGenerator;
use crate::store::{Op, Store};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServiceConfig {
    pub port: u16,
    pub model: ModelKind,
    pub profile: DatasetProfile,
    pub seed: u64,
    /// Persistence directory; in-memory only when absent.
    pub state_dir: Option<PathBuf>,
    /// Lexicon directory; bundled defaults when absent.
    pub resources: Option<PathBuf>,
    /// Events replayed through the pipeline before serving.
    pub replay: Option<PathBuf>,
    pub checkpoint_every: u64,
}

impl ServiceConfig {
    pub fn new(model: ModelKind) -> Self {
        ServiceConfig {
            port: 8080,
            model,
            profile: DatasetProfile::Wikivoyage,
            seed: 0,
            state_dir: None,
            resources: None,
            replay: None,
            checkpoint_every: 1000,
        }
    }

    pub fn analyzers(&self) -> Result<TextAnalyzers> {
        match &self.resources {
            Some(dir) => crate::resources::load_analyzers(dir),
            None => Ok(TextAnalyzers::default_english()),
        }
    }

    /// A session with the default thresholds, before any event.
    pub fn fresh_session(&self, analyzers: TextAnalyzers) -> Result<LiveSession> {
        let cfg = PipelineConfig::new(self.profile, self.model, self.seed);
        Ok(LiveSession::new(Pipeline::with_defaults(analyzers, &cfg)?))
    }

    /// Restores persisted state if any, then replays the configured input.
    pub fn open(&self) -> Result<(LiveSession, Option<Store>)> {
        let (mut session, mut store) = match &self.state_dir {
            Some(dir) => {
                let (store, session) =
                    Store::open(dir, || self.analyzers(), |a| self.fresh_session(a))?;
                (session, Some(store))
            }
            None => (self.fresh_session(self.analyzers()?)?, None),
        };
        if let Some(path) = &self.replay {
            let events = crate::jsonl::read_events_file(path)?;
            let mut skipped = 0usize;
            for e in events {
                if session.contains(&e.event_id) {
                    skipped += 1;
                    continue;
                }
                let arrival = e.timestamp;
                let p = session.ingest(e.clone(), arrival)?;
                if let Some(store) = &mut store {
                    journal_event(store, e, &p, arrival)?;
                }
            }
            tracing::info!(skipped, "replayed input");
        }
        Ok((session, store))
    }
}

/// Offline counterpart of `POST /events`: the responses a fresh service
/// with `config` would give to `events`, in order, arrival time being each
/// event's own timestamp.
pub fn replay(config: &ServiceConfig, events: Vec<WikiEvent>) -> Result<Vec<EventResponse>> {
    let mut session = config.fresh_session(config.analyzers()?)?;
    events
        .into_iter()
        .map(|e| {
            let arrival = e.timestamp;
            Ok(session.ingest(e, arrival)?.into())
        })
        .collect()
}

/// Journals `event` as admitted (possibly restamped), so that replay
/// reproduces the same history.
fn journal_event(
    store: &mut Store,
    mut event: WikiEvent,
    p: &Prediction,
    arrival: Timestamp,
) -> Result<()> {
    event.timestamp = p.timestamp;
    store.append(Op::Event {
        event: Box::new(EventRecord::from(&event)),
        arrival,
    })?;
    Ok(())
}

pub type Clock = Arc<dyn Fn() -> Timestamp + Send + Sync>;

struct Inner {
    session: LiveSession,
    store: Option<Store>,
}

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Mutex<Inner>>,
    llm: Option<SharedGenerator>,
    clock: Clock,
    checkpoint_every: u64,
}

impl AppState {
    pub fn new(session: LiveSession, store: Option<Store>, llm: Option<SharedGenerator>) -> Self {
        AppState {
            inner: Arc::new(Mutex::new(Inner { session, store })),
            llm,
            clock: Arc::new(crate::now),
            checkpoint_every: 1000,
        }
    }

    pub fn with_clock(mut self, clock: Clock) -> Self {
        self.clock = clock;
        self
    }

    pub fn with_checkpoint_every(mut self, n: u64) -> Self {
        self.checkpoint_every = n.max(1);
        self
    }

    fn lock(&self) -> MutexGuard<'_, Inner> {
        // A panic inside a handler leaves the session as it was before the
        // failed call's mutation; keep serving.
        self.inner.lock().unwrap_or_else(|p| p.into_inner())
    }

    /// Writes a checkpoint now, if persistence is configured.
    pub fn checkpoint(&self) -> Result<()> {
        let mut g = self.lock();
        let state = g.session.state();
        if let Some(store) = &mut g.store {
            store.checkpoint(state)?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct ApiError(StatusCode, String);

impl From<wikistream_core::Error> for ApiError {
    fn from(e: wikistream_core::Error) -> Self {
        use wikistream_core::Error as E;
        let status = match &e {
            E::Parse { .. } | E::Validation(_) | E::InvalidArgument(_) | E::Unlabeled(_) => {
                StatusCode::BAD_REQUEST
            }
            E::Conflict(_) => StatusCode::CONFLICT,
            E::NotFound(_) => StatusCode::NOT_FOUND,
            E::Ordering { .. } => StatusCode::CONFLICT,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError(status, e.to_string())
    }
}

impl From<crate::Error> for ApiError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Core(e) => e.into(),
            other => ApiError(StatusCode::INTERNAL_SERVER_ERROR, other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(serde_json::json!({ "error": self.1 }))).into_response()
    }
}

type ApiResult<T> = std::result::Result<Json<T>, ApiError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventResponse {
    pub event_id: String,
    pub predicted: Label,
    pub confidence: f64,
    pub proba: Proba,
    pub explanation_id: String,
    pub restamped: bool,
}

impl From<Prediction> for EventResponse {
    fn from(p: Prediction) -> Self {
        EventResponse {
            explanation_id: p.event_id.clone(),
            event_id: p.event_id,
            predicted: p.predicted,
            confidence: p.confidence,
            proba: p.proba,
            restamped: p.restamped,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackRequest {
    pub event_id: String,
    pub label: Label,
}

fn bad_request(msg: impl ToString) -> ApiError {
    ApiError(StatusCode::BAD_REQUEST, msg.to_string())
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> std::result::Result<T, ApiError> + Send + 'static,
) -> std::result::Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
}

fn ingest(
    state: &AppState,
    event: WikiEvent,
) -> std::result::Result<(Prediction, Option<String>), ApiError> {
    let arrival = (state.clock)();
    let mut g = state.lock();
    let inner = &mut *g;
    let p = inner.session.ingest(event.clone(), arrival)?;
    if p.restamped {
        tracing::warn!(event_id = %p.event_id, "timestamp went back in time; admitted at arrival time");
    }
    if let Some(store) = &mut inner.store {
        journal_event(store, event, &p, arrival)?;
        if store.pending() >= state.checkpoint_every {
            store.checkpoint(inner.session.state())?;
        }
    }
    let prompt = inner
        .session
        .contribution(&p.event_id)
        .map(|c| c.prompt.clone());
    Ok((p, prompt))
}

async fn post_event(State(state): State<AppState>, body: Bytes) -> ApiResult<EventResponse> {
    let record: EventRecord = serde_json::from_slice(&body).map_err(bad_request)?;
    let st = state.clone();
    let (p, prompt) = blocking(move || ingest(&st, record.into())).await?;
    if let (Some(llm), Some(prompt)) = (state.llm.clone(), prompt) {
        let id = p.event_id.clone();
        tokio::task::spawn_blocking(move || match llm.generate(&prompt) {
            Ok(text) => {
                if let Err(e) = state.lock().session.set_generated_text(&id, text) {
                    tracing::warn!(event_id = %id, error = %e, "explanation vanished");
                }
            }
            Err(e) => {
                tracing::warn!(event_id = %id, error = %e, "language model failed; keeping template text")
            }
        });
    }
    Ok(Json(p.into()))
}

async fn get_explanation(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Explanation> {
    Ok(Json(state.lock().session.explanation(&id)?.clone()))
}

async fn get_user(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<UserView> {
    let now = (state.clock)();
    Ok(Json(state.lock().session.user_view(&id, now)?))
}

async fn post_feedback(State(state): State<AppState>, body: Bytes) -> ApiResult<FeedbackRecord> {
    let req: FeedbackRequest = serde_json::from_slice(&body).map_err(bad_request)?;
    blocking(move || {
        let now = (state.clock)();
        let mut g = state.lock();
        let inner = &mut *g;
        let rec = inner
            .session
            .submit_feedback(&req.event_id, req.label, now)?;
        if let Some(store) = &mut inner.store {
            store.append(Op::Feedback {
                event_id: rec.event_id.clone(),
                label: rec.label,
                timestamp: rec.timestamp,
            })?;
            store.append_feedback(&rec)?;
        }
        Ok(Json(rec))
    })
    .await
}

async fn get_metrics(State(state): State<AppState>) -> Json<MetricsSnapshot> {
    Json(state.lock().session.metrics())
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/events", post(post_event))
        .route("/explanations/{event_id}", get(get_explanation))
        .route("/users/{user_id}", get(get_user))
        .route("/feedback", post(post_feedback))
        .route("/metrics", get(get_metrics))
        .route("/health", get(|| async { "ok" }))
        .with_state(state)
}

/// Binds `0.0.0.0:port` and serves until Ctrl-C, then checkpoints.
pub async fn serve(config: ServiceConfig, llm: Option<SharedGenerator>) -> Result<()> {
    let (session, store) = config.open()?;
    let state = AppState::new(session, store, llm).with_checkpoint_every(config.checkpoint_every);
    let addr = std::net::SocketAddr::from(([0, 0, 0, 0], config.port));
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| crate::Error::io(addr.to_string(), e))?;
    tracing::info!(%addr, model = config.model.as_str(), "serving");
    axum::serve(listener, router(state.clone()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| crate::Error::io(addr.to_string(), e))?;
    state.checkpoint()
}
