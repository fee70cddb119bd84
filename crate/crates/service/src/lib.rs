//! Stateless JSON API over the weighting engine.
//!
//! Every endpoint answers with an [`ApiEnvelope`]. Request bodies carry the
//! judgment document itself (or wrap it under `fpcs` / `hierarchy`) plus
//! option fields.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use fbwm_core::{
    analyze_consistency, ci_table, scale_table, solve_problem, ConsistencyReport, Fpcs, FpcsError, GridSpec,
    PipelineError, Problem, ProblemReport, SolverOptions,
};
use serde::Serialize;
use serde_json::{Map, Value};
use tower_http::services::ServeDir;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// CR threshold applied when a request does not give one.
    pub threshold: f64,
    /// Directory served at `/` for the browser client.
    pub static_dir: Option<PathBuf>,
    pub timeout: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            threshold: fbwm_core::pipeline::DEFAULT_THRESHOLD,
            static_dir: None,
            timeout: DEFAULT_TIMEOUT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_path: Option<String>,
}

/// `ok` is true exactly when `result` is present.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiEnvelope<T> {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ApiError>,
}

impl<T> ApiEnvelope<T> {
    pub fn success(result: T) -> Self {
        Self {
            ok: true,
            result: Some(result),
            error: None,
        }
    }

    pub fn failure(error: ApiError) -> Self {
        Self {
            ok: false,
            result: None,
            error: Some(error),
        }
    }
}

/// An error response with its status.
#[derive(Debug)]
struct Failure(StatusCode, ApiError);

impl Failure {
    fn new(status: StatusCode, code: &str, message: impl Into<String>, field_path: Option<String>) -> Self {
        Failure(
            status,
            ApiError {
                code: code.to_string(),
                message: message.into(),
                field_path,
            },
        )
    }

    fn field(code: &str, path: &str, message: impl Into<String>) -> Self {
        Failure::new(StatusCode::BAD_REQUEST, code, message, Some(path.to_string()))
    }
}

impl From<FpcsError> for Failure {
    fn from(e: FpcsError) -> Self {
        let code = serde_json::to_value(e.code)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_else(|| "validation_error".into());
        let path = (!e.field_path.is_empty()).then(|| e.field_path.clone());
        Failure::new(StatusCode::BAD_REQUEST, &code, e.message, path)
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Input(inner) => inner.into(),
            PipelineError::Degenerate => Failure::new(StatusCode::UNPROCESSABLE_ENTITY, e.code(), e.to_string(), None),
            PipelineError::Solver(_) => Failure::new(StatusCode::INTERNAL_SERVER_ERROR, e.code(), e.to_string(), None),
            _ => Failure::new(StatusCode::BAD_REQUEST, e.code(), e.to_string(), e.field_path()),
        }
    }
}

impl IntoResponse for Failure {
    fn into_response(self) -> Response {
        (self.0, Json(ApiEnvelope::<()>::failure(self.1))).into_response()
    }
}

fn ok<T: Serialize>(result: T) -> Response {
    Json(ApiEnvelope::success(result)).into_response()
}

pub fn router(config: ServiceConfig) -> Router {
    let static_dir = config.static_dir.clone();
    let api = Router::new()
        .route("/api/solve", post(solve_handler))
        .route("/api/consistency", post(consistency_handler))
        .route("/api/scale", get(|| async { ok(scale_table()) }))
        .route("/api/ci-table", get(|| async { ok(ci_table()) }))
        .route("/healthz", get(|| async { Json(serde_json::json!({ "ok": true })) }))
        .with_state(Arc::new(config));
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(address = %listener.local_addr()?, "listening");
    axum::serve(listener, router(config)).await
}

fn parse_body(body: &Bytes) -> Result<Map<String, Value>, Failure> {
    let value: Value = serde_json::from_slice(body)
        .map_err(|e| Failure::new(StatusCode::BAD_REQUEST, "syntax", format!("invalid JSON: {e}"), None))?;
    match value {
        Value::Object(map) => Ok(map),
        _ => Err(Failure::field("wrong_type", "", "expected a JSON object")),
    }
}

/// The judgment document: under `fpcs` or `hierarchy` when present,
/// otherwise the body itself.
fn document(body: &Map<String, Value>) -> (Value, &'static str) {
    for key in ["fpcs", "hierarchy"] {
        if let Some(v) = body.get(key) {
            return (v.clone(), key);
        }
    }
    (Value::Object(body.clone()), "")
}

fn prefixed(mut e: FpcsError, prefix: &str) -> FpcsError {
    if !prefix.is_empty() {
        e.field_path = if e.field_path.is_empty() {
            prefix.to_string()
        } else {
            format!("{prefix}.{}", e.field_path)
        };
    }
    e
}

fn opt_usize(body: &Map<String, Value>, key: &str) -> Result<Option<usize>, Failure> {
    match body.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|n| Some(n as usize))
            .ok_or_else(|| Failure::field("wrong_type", key, "expected a nonnegative integer")),
    }
}

fn opt_f64(body: &Map<String, Value>, key: &str) -> Result<Option<f64>, Failure> {
    match body.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| Failure::field("wrong_type", key, "expected a number")),
    }
}

fn opt_levels(body: &Map<String, Value>, key: &str) -> Result<Option<Vec<f64>>, Failure> {
    match body.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.as_f64()
                    .ok_or_else(|| Failure::field("wrong_type", &format!("{key}[{i}]"), "expected a number"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some),
        Some(_) => Err(Failure::field("wrong_type", key, "expected an array of numbers")),
    }
}

fn grid_error(e: PipelineError, path: &str) -> Failure {
    Failure::field(e.code(), path, e.to_string())
}

fn solver_options(body: &Map<String, Value>) -> Result<SolverOptions, Failure> {
    let mut opts = SolverOptions::default();
    if let Some(seed) = body.get("seed").filter(|v| !v.is_null()) {
        opts.seed = seed
            .as_u64()
            .ok_or_else(|| Failure::field("wrong_type", "seed", "expected a nonnegative integer"))?;
    }
    if let Some(tol) = opt_f64(body, "tol")? {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::field(
                "invalid_options",
                "tol",
                "tol must be a positive number",
            ));
        }
        opts.optimality_tol = tol;
    }
    Ok(opts)
}

async fn run_blocking<T, F>(config: &ServiceConfig, job: F) -> Result<T, Failure>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, PipelineError> + Send + 'static,
{
    match tokio::time::timeout(config.timeout, tokio::task::spawn_blocking(job)).await {
        Err(_) => Err(Failure::new(
            StatusCode::GATEWAY_TIMEOUT,
            "timeout",
            format!("request exceeded {} s", config.timeout.as_secs_f64()),
            None,
        )),
        Ok(Err(join)) => Err(Failure::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "internal_error",
            format!("solver task failed: {join}"),
            None,
        )),
        Ok(Ok(result)) => result.map_err(Failure::from),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResponse {
    #[serde(flatten)]
    pub report: ProblemReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistency: Option<ConsistencyReport>,
}

async fn solve_handler(State(config): State<Arc<ServiceConfig>>, body: Bytes) -> Response {
    match solve_request(&config, &body).await {
        Ok(r) => ok(r),
        Err(f) => f.into_response(),
    }
}

async fn solve_request(config: &ServiceConfig, body: &Bytes) -> Result<SolveResponse, Failure> {
    let body = parse_body(body)?;
    let (doc, prefix) = document(&body);
    let problem = Problem::from_value(&doc).map_err(|e| prefixed(e, prefix))?;
    let grid =
        GridSpec::from_parts(opt_usize(&body, "m")?, opt_levels(&body, "grid")?).map_err(|e| grid_error(e, "m"))?;
    let grid_path = if matches!(grid, GridSpec::Levels(_)) {
        "grid"
    } else {
        "m"
    };
    grid.build().map_err(|e| grid_error(e, grid_path))?;
    let opts = solver_options(&body)?;
    let with_consistency = match body.get("consistency") {
        None | Some(Value::Null) => false,
        Some(v) => v
            .as_bool()
            .ok_or_else(|| Failure::field("wrong_type", "consistency", "expected a boolean"))?,
    };
    if with_consistency && !matches!(problem, Problem::Single(_)) {
        return Err(Failure::field(
            "invalid_options",
            "consistency",
            "consistency output is available for single systems only",
        ));
    }
    let threshold = config.threshold;
    run_blocking(config, move || {
        let report = solve_problem(&problem, &grid, &opts)?;
        let consistency = match (&problem, with_consistency) {
            (Problem::Single(f), true) => Some(analyze_consistency(f, &grid, &opts, Some(threshold))?),
            _ => None,
        };
        Ok(SolveResponse { report, consistency })
    })
    .await
}

async fn consistency_handler(State(config): State<Arc<ServiceConfig>>, body: Bytes) -> Response {
    match consistency_request(&config, &body).await {
        Ok(r) => ok(r),
        Err(f) => f.into_response(),
    }
}

async fn consistency_request(config: &ServiceConfig, body: &Bytes) -> Result<ConsistencyReport, Failure> {
    let body = parse_body(body)?;
    let (doc, prefix) = document(&body);
    let fpcs = Fpcs::from_value(&doc).map_err(|e| prefixed(e, prefix))?;
    let grid = GridSpec::Uniform(opt_usize(&body, "grid_points")?.unwrap_or(fbwm_core::pipeline::DEFAULT_M));
    grid.build().map_err(|e| grid_error(e, "grid_points"))?;
    let threshold = opt_f64(&body, "threshold")?.unwrap_or(config.threshold);
    if !(threshold >= 0.0 && threshold.is_finite()) {
        return Err(Failure::field(
            "invalid_options",
            "threshold",
            "threshold must be nonnegative",
        ));
    }
    let opts = solver_options(&body)?;
    run_blocking(config, move || {
        analyze_consistency(&fpcs, &grid, &opts, Some(threshold))
    })
    .await
}
