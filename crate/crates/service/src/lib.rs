//! HTTP session API for validation dialogues.
//!
//! A session holds an instance, a model, a gamma and an oracle. Simulated
//! sessions run to completion when created; human sessions expose one pending
//! query at a time and advance as answers are posted.

pub mod api;
pub mod session;

use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;
use serde_json::{json, Value};
use tokio::sync::Mutex;
use tower_http::cors::{Any, CorsLayer};

use dj_core::agent::{Policy, Query};
use dj_core::dialogue::{failure_doc, record_doc, DialogueConfig, DialogueState};
use dj_core::fixtures;
use dj_core::io::{parse_instance, parse_model_doc};
use dj_core::report::CheckReportDoc;
use dj_core::{DecisionSituation, Model};

use api::{Conclusion, CreateSession, Created, ErrorBody, ErrorDetail, OracleSpec, PostAnswer, QueryView, Report, StateView};
use session::{AnswerError, Oracle, Session};

#[derive(Clone, Debug, Default)]
pub struct ServiceConfig {
    /// Allowed browser origins; `*` allows any. Empty disables CORS headers.
    pub cors_origins: Vec<String>,
    /// Directory for append-only per-session journal files.
    pub journal_dir: Option<PathBuf>,
}

#[derive(Default)]
struct AppState {
    sessions: std::sync::Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    journal_dir: Option<PathBuf>,
}

impl AppState {
    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .lock()
            .expect("session table lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "unknown-session", format!("no session {id}")))
    }

    fn journal(&self, id: &str, event: Value) {
        let Some(dir) = &self.journal_dir else { return };
        let path = dir.join(format!("{id}.jsonl"));
        let written = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .and_then(|mut f| writeln!(f, "{event}"));
        if let Err(e) = written {
            eprintln!("journal write to {} failed: {e}", path.display());
        }
    }
}

#[derive(Debug)]
struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            kind,
            message: message.into(),
        }
    }

    fn invalid(message: impl ToString) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid-document", message.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            error: ErrorDetail {
                kind: self.kind.to_string(),
                message: self.message,
            },
        };
        (self.status, Json(body)).into_response()
    }
}

pub fn router(config: ServiceConfig) -> Router {
    let state = Arc::new(AppState {
        sessions: Default::default(),
        journal_dir: config.journal_dir.clone(),
    });
    let router = Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/next", get(next_query))
        .route("/sessions/{id}/answer", post(post_answer))
        .route("/sessions/{id}/report", get(session_report))
        .route("/instances", get(list_instances))
        .route("/instances/{name}", get(get_instance))
        .with_state(state);
    match cors(&config.cors_origins) {
        Some(layer) => router.layer(layer),
        None => router,
    }
}

fn cors(origins: &[String]) -> Option<CorsLayer> {
    if origins.is_empty() {
        return None;
    }
    let layer = CorsLayer::new().allow_methods(Any).allow_headers(Any);
    if origins.iter().any(|o| o == "*") {
        return Some(layer.allow_origin(Any));
    }
    let values: Vec<HeaderValue> = origins.iter().filter_map(|o| o.parse().ok()).collect();
    Some(layer.allow_origin(values))
}

/// Binds `addr` and serves until the process ends.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(config)).await
}

fn question(sit: &DecisionSituation, query: Query) -> QueryView {
    let (a, b) = query.names(sit);
    let question = match query {
        Query::Trump(..) => format!("Does argument {a} trump argument {b}?"),
        Query::Support(..) => format!("Does argument {a} support proposition {b}?"),
    };
    QueryView {
        id: 0,
        kind: query.kind().to_string(),
        pair: (a, b),
        question,
    }
}

fn state_view(session: &Session) -> StateView {
    match session.state() {
        DialogueState::Pending { query, records } => StateView::Running {
            query: QueryView {
                id: records.len(),
                ..question(&session.sit, *query)
            },
        },
        DialogueState::Done(t) => StateView::Done {
            verdict: t.verdict.as_str().to_string(),
        },
    }
}

fn document_text(value: &Value) -> String {
    value.to_string()
}

fn build_session(id: String, req: CreateSession) -> Result<Session, ApiError> {
    let sit = match (&req.instance, &req.fixture) {
        (Some(doc), None) => parse_instance(&document_text(doc)).map_err(ApiError::invalid)?,
        (None, Some(name)) => {
            let text = fixtures::by_name(name)
                .ok_or_else(|| ApiError::invalid(format!("unknown fixture {name}")))?;
            parse_instance(text).map_err(ApiError::invalid)?
        }
        _ => return Err(ApiError::invalid("give exactly one of instance or fixture")),
    };
    let model_doc = parse_model_doc(&document_text(&req.model)).map_err(ApiError::invalid)?;
    let model = Model::from_doc(&sit, &model_doc).map_err(ApiError::invalid)?;
    let gamma = match &req.gamma {
        Some(names) => sit.arg_set(names).map_err(ApiError::invalid)?,
        None => sit.all_args(),
    };
    if req.budget == 0 {
        return Err(ApiError::invalid("budget must be at least 1"));
    }
    let certificate = req
        .certificate
        .as_ref()
        .map(|c| CheckReportDoc::parse(&document_text(c)))
        .transpose()
        .map_err(ApiError::invalid)?;
    let (oracle, stable) = match req.oracle {
        OracleSpec::Simulated {
            policy,
            seed,
            start,
        } => {
            let policy = match policy.as_str() {
                "static" => Policy::Static,
                "cyclic" => Policy::Cyclic,
                "drift" => Policy::SeededDrift { seed },
                other => return Err(ApiError::invalid(format!("unknown policy {other:?}"))),
            };
            (Oracle::Simulated { policy, start }, policy == Policy::Static)
        }
        OracleSpec::Human { stable } => (Oracle::Human, stable),
    };
    let config = DialogueConfig {
        gamma,
        budget: req.budget,
        stable,
    };
    Session::new(id, sit, model, config, oracle, certificate).map_err(ApiError::invalid)
}

async fn create_session(
    State(state): State<Arc<AppState>>,
    Json(req): Json<CreateSession>,
) -> Result<impl IntoResponse, ApiError> {
    let journal_request = json!({
        "event": "created",
        "fixture": req.fixture,
        "instance": req.instance,
        "model": req.model,
        "gamma": req.gamma,
        "budget": req.budget,
    });
    let id = uuid::Uuid::new_v4().simple().to_string();
    let session = build_session(id.clone(), req)?;
    let view = state_view(&session);
    state.journal(&id, journal_request);
    state
        .sessions
        .lock()
        .expect("session table lock")
        .insert(id.clone(), Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(Created { id, state: view })))
}

async fn next_query(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<StateView>, ApiError> {
    let session = state.session(&id)?;
    let session = session.lock().await;
    Ok(Json(state_view(&session)))
}

async fn post_answer(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<PostAnswer>,
) -> Result<Json<StateView>, ApiError> {
    let yes = match req.answer.as_str() {
        "yes" => true,
        "no" => false,
        other => return Err(ApiError::invalid(format!("answer must be yes or no, got {other:?}"))),
    };
    let session = state.session(&id)?;
    let mut session = session.lock().await;
    session.answer(req.query_id, yes).map_err(|e| match e {
        AnswerError::NotHuman => ApiError::new(
            StatusCode::CONFLICT,
            "not-human",
            "simulated sessions take no answers",
        ),
        AnswerError::Finished => {
            ApiError::new(StatusCode::CONFLICT, "finished", "the dialogue is over")
        }
        AnswerError::Stale { expected } => ApiError::new(
            StatusCode::CONFLICT,
            "stale-query",
            format!("query {} is not pending; pending query is {expected}", req.query_id),
        ),
    })?;
    state.journal(
        &id,
        json!({"event": "answer", "query_id": req.query_id, "answer": req.answer}),
    );
    Ok(Json(state_view(&session)))
}

async fn session_report(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<Report>, ApiError> {
    let session = state.session(&id)?;
    let session = session.lock().await;
    let sit = &session.sit;
    let (conclusion, certificate_error) = match session.conclusion() {
        Some(Ok(judgment)) => {
            let cert = session.certificate.as_ref().expect("conclusion needs a certificate");
            (
                Some(Conclusion {
                    judgment,
                    certificate_digest: cert.instance_digest.clone(),
                    j: cert.j,
                    k: cert.k,
                }),
                None,
            )
        }
        Some(Err(e)) => (None, Some(e)),
        None => (None, None),
    };
    Ok(Json(Report {
        id: session.id.clone(),
        state: state_view(&session),
        records: session.records().iter().map(|r| record_doc(sit, r)).collect(),
        transcript: session.transcript_doc(),
        unresolved: session
            .transcript()
            .map(|t| t.unresolved.iter().map(|f| failure_doc(sit, f)).collect())
            .unwrap_or_default(),
        conclusion,
        certificate_error,
    }))
}

#[derive(Serialize)]
struct InstanceList {
    instances: Vec<&'static str>,
}

async fn list_instances() -> Json<InstanceList> {
    Json(InstanceList {
        instances: fixtures::ALL.iter().map(|(n, _)| *n).collect(),
    })
}

async fn get_instance(Path(name): Path<String>) -> Result<Json<Value>, ApiError> {
    let text = fixtures::by_name(&name).ok_or_else(|| {
        ApiError::new(StatusCode::NOT_FOUND, "unknown-instance", format!("no instance {name}"))
    })?;
    let doc: Value = serde_json::from_str(text).expect("fixture is JSON");
    Ok(Json(json!({"name": name, "instance": doc})))
}
