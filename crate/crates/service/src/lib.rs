//! Stateless HTTP/JSON front end over the pinpix pipeline.
//!
//! [`handle`] is the whole service as a pure function from a request to a
//! response; [`router`] and [`serve`] only carry requests to it. Responses are
//! compact JSON with a fixed key order, so equal requests get byte-equal
//! bodies.
//!
//! | route | body | reply |
//! |---|---|---|
//! | `GET /api/health` | | `{"ok": true}` |
//! | `GET /api/catalog` | | catalog entries with default sizes |
//! | `GET /api/catalog/{name}?bbox=WxH` | | one entry's grid and lint report |
//! | `POST /api/render?clip=true` | scene | grid rows, render outline, lint report |
//! | `POST /api/lint?clip=true` | scene | lint report |
//! | `POST /api/diff` | `{"before": scene, "after": scene}` | added and removed pins |

use std::net::SocketAddr;
use std::panic::{catch_unwind, AssertUnwindSafe};

use axum::body::Bytes;
use axum::http::{header, Method, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::Router;
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::cors::CorsLayer;

use pinpix_core::catalog::{self, CatalogError};
use pinpix_core::codec::{catalog_to_json, diff_to_json, grid_to_json, renders_to_json, ParseError};
use pinpix_core::scene::{render_scene_with, Item, Rect, RenderOptions, Scene, SceneError};
use pinpix_core::{diff_grids, GridSpec};

/// A failed request. Serialized as the response body.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: u16,
    pub code: &'static str,
    pub message: String,
    pub detail: Option<Value>,
}

impl ApiError {
    fn new(status: u16, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, code, message: message.into(), detail: None }
    }

    fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    fn not_found(method: &str, path: &str) -> Self {
        ApiError::new(404, "not_found", format!("no route for {method} {path}"))
    }

    fn body(&self) -> Value {
        let mut body = json!({"status": self.status, "code": self.code, "message": self.message});
        if let Some(detail) = &self.detail {
            body["detail"] = detail.clone();
        }
        body
    }
}

impl From<ParseError> for ApiError {
    fn from(e: ParseError) -> Self {
        ApiError::new(400, "parse_error", e.message.clone()).with_detail(json!({"line": e.line, "column": e.column}))
    }
}

impl From<SceneError> for ApiError {
    fn from(e: SceneError) -> Self {
        let SceneError::Invalid(issues) = &e;
        ApiError::new(422, "invalid_scene", e.to_string()).with_detail(json!({ "issues": issues }))
    }
}

/// Status and JSON body of a handled request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiResponse {
    pub status: u16,
    pub body: String,
}

impl ApiResponse {
    fn ok(body: Value) -> Self {
        ApiResponse { status: 200, body: body.to_string() }
    }
}

impl From<ApiError> for ApiResponse {
    fn from(e: ApiError) -> Self {
        ApiResponse { status: e.status, body: e.body().to_string() }
    }
}

/// Query parameters as (key, value) pairs; a bare key has an empty value.
fn query_pairs(query: &str) -> Vec<(&str, &str)> {
    query.split('&').filter(|p| !p.is_empty()).map(|p| p.split_once('=').unwrap_or((p, ""))).collect()
}

fn options(query: &str) -> Result<RenderOptions, ApiError> {
    let mut opts = RenderOptions::default();
    for (key, value) in query_pairs(query) {
        match (key, value) {
            ("clip", "" | "1" | "true") => opts.clip = true,
            ("clip", "0" | "false") => opts.clip = false,
            _ => return Err(ApiError::new(400, "bad_query", format!("unsupported query parameter {key}={value}"))),
        }
    }
    Ok(opts)
}

fn parse_json<'a, T: Deserialize<'a>>(body: &'a [u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::from(ParseError::from(e)))
}

fn render(body: &[u8], query: &str) -> Result<Value, ApiError> {
    let scene: Scene = parse_json(body)?;
    let rendered = render_scene_with(&scene, options(query)?)?;
    Ok(json!({
        "grid": grid_to_json(&rendered.grid),
        "renders": renders_to_json(&rendered),
        "lint": rendered.lint(),
    }))
}

fn lint(body: &[u8], query: &str) -> Result<Value, ApiError> {
    let scene: Scene = parse_json(body)?;
    let report = render_scene_with(&scene, options(query)?)?.lint();
    Ok(serde_json::to_value(report).expect("reports serialize"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiffRequest {
    before: Scene,
    after: Scene,
}

fn diff(body: &[u8], query: &str) -> Result<Value, ApiError> {
    let request: DiffRequest = parse_json(body)?;
    let opts = options(query)?;
    let before = render_scene_with(&request.before, opts)?;
    let after = render_scene_with(&request.after, opts)?;
    let d = diff_grids(&before.grid, &after.grid).map_err(|e| ApiError::new(422, "grid_mismatch", e.to_string()))?;
    Ok(diff_to_json(&d))
}

fn parse_bbox(text: &str) -> Option<(u32, u32)> {
    let (w, h) = text.split_once('x')?;
    Some((w.parse().ok().filter(|&n| n > 0)?, h.parse().ok().filter(|&n| n > 0)?))
}

fn catalog_shape(name: &str, query: &str) -> Result<Value, ApiError> {
    let entry = catalog::entry(name).map_err(|e| ApiError::new(404, "unknown_catalog_name", e.to_string()))?;
    let mut bbox = entry.default_bbox;
    for (key, value) in query_pairs(query) {
        bbox = match (key, parse_bbox(value)) {
            ("bbox", Some(b)) => b,
            _ => return Err(ApiError::new(400, "bad_query", format!("unsupported query parameter {key}={value}"))),
        };
    }
    if let Err(e @ CatalogError::TooSmall { .. }) = catalog::build(name, Some(bbox)) {
        return Err(ApiError::new(422, "too_small", e.to_string()));
    }
    let scene = Scene::new(GridSpec::new(bbox.0, bbox.1)).with_item(Item::Catalog {
        name: entry.name.to_string(),
        bbox: Rect::new(0, 0, bbox.0 as i32, bbox.1 as i32),
    });
    let rendered = render_scene_with(&scene, RenderOptions::default())?;
    Ok(json!({
        "name": entry.name,
        "bbox": [bbox.0, bbox.1],
        "grid": grid_to_json(&rendered.grid),
        "lint": rendered.lint(),
    }))
}

fn route(method: &str, path: &str, query: &str, body: &[u8]) -> Result<Value, ApiError> {
    match (method, path) {
        ("GET", "/api/health") => Ok(json!({"ok": true})),
        ("GET", "/api/catalog") => Ok(catalog_to_json()),
        ("POST", "/api/render") => render(body, query),
        ("POST", "/api/lint") => lint(body, query),
        ("POST", "/api/diff") => diff(body, query),
        ("GET", p) => match p.strip_prefix("/api/catalog/") {
            Some(name) if !name.is_empty() && !name.contains('/') => catalog_shape(name, query),
            _ => Err(ApiError::not_found(method, path)),
        },
        _ => Err(ApiError::not_found(method, path)),
    }
}

/// Answers one request. `target` is the request path with its optional query.
pub fn handle(method: &str, target: &str, body: &[u8]) -> ApiResponse {
    let (path, query) = target.split_once('?').unwrap_or((target, ""));
    match catch_unwind(AssertUnwindSafe(|| route(method, path, query, body))) {
        Ok(Ok(value)) => ApiResponse::ok(value),
        Ok(Err(e)) => e.into(),
        Err(_) => ApiError::new(500, "internal", "the request could not be processed").into(),
    }
}

async fn dispatch(method: Method, uri: Uri, body: Bytes) -> Response {
    let target = uri.path_and_query().map(|pq| pq.as_str().to_string()).unwrap_or_else(|| uri.path().to_string());
    let method = method.as_str().to_string();
    let reply = tokio::task::spawn_blocking(move || handle(&method, &target, &body))
        .await
        .unwrap_or_else(|_| ApiError::new(500, "internal", "the request could not be processed").into());
    let status = StatusCode::from_u16(reply.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    (status, [(header::CONTENT_TYPE, "application/json")], reply.body).into_response()
}

/// Every request goes to [`handle`]; any origin may call the API.
pub fn router() -> Router {
    Router::new().fallback(dispatch).layer(CorsLayer::permissive())
}

/// Serves the API on `addr` until the process ends.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router()).await
}
