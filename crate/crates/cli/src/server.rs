//! JSON API behind the annotation UI.
//!
//! * `GET  /api/examples`: id, titles and highlight count of every example
//! * `GET  /api/examples/{id}`: table cells with grid rectangles and the
//!   target sentence; `?reveal=1` adds the reference highlights
//! * `POST /api/examples/{id}/highlights`: `{"highlighted_cells": [[r, c], ...]}`,
//!   appended to the output JSONL
//! * `GET  /api/examples/{id}/compare`: latest submission vs the reference

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tabnoise::compare::compare_highlights;
use tabnoise::totto::read_corpus;
use tabnoise::{resolve_grid, CellLoc, Example, HighlightSet};
use tower_http::services::ServeDir;

#[derive(Debug, Clone, Serialize)]
struct Submission {
    example_id: i64,
    annotator: String,
    timestamp: u64,
    highlighted_cells: Vec<[usize; 2]>,
}

struct Store {
    writer: BufWriter<File>,
    submissions: HashMap<i64, Vec<Submission>>,
}

#[derive(Clone)]
pub struct AppState {
    examples: Arc<Vec<Example>>,
    index: Arc<HashMap<i64, usize>>,
    store: Arc<Mutex<Store>>,
}

impl AppState {
    pub fn new(examples: Vec<Example>, out: &Path) -> anyhow::Result<Self> {
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(out)
            .with_context(|| format!("cannot open {}", out.display()))?;
        let index = examples.iter().enumerate().map(|(i, e)| (e.example_id, i)).collect();
        Ok(AppState {
            examples: Arc::new(examples),
            index: Arc::new(index),
            store: Arc::new(Mutex::new(Store {
                writer: BufWriter::new(file),
                submissions: HashMap::new(),
            })),
        })
    }

    pub fn load(input: &Path, out: &Path) -> anyhow::Result<Self> {
        let file = File::open(input).with_context(|| format!("cannot open {}", input.display()))?;
        let corpus = read_corpus(std::io::BufReader::new(file))?;
        for s in &corpus.report.skipped {
            eprintln!("warning: {}:{}: skipped: {}", input.display(), s.line, s.error);
        }
        Self::new(corpus.into_examples(), out)
    }

    fn example(&self, id: i64) -> Result<&Example, ApiError> {
        self.index
            .get(&id)
            .map(|&i| &self.examples[i])
            .ok_or(ApiError::NotFound(format!("no example {id}")))
    }
}

#[derive(Debug)]
enum ApiError {
    NotFound(String),
    BadRequest(String),
    Internal(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, msg) = match self {
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, m),
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, m),
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, m),
        };
        (status, Json(json!({ "error": msg }))).into_response()
    }
}

pub fn router(state: AppState, assets: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/examples", get(list_examples))
        .route("/api/examples/{id}", get(get_example))
        .route("/api/examples/{id}/highlights", post(post_highlights))
        .route("/api/examples/{id}/compare", get(compare))
        .with_state(state);
    match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

pub async fn serve(state: AppState, port: u16, assets: Option<PathBuf>) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port))
        .await
        .with_context(|| format!("cannot bind port {port}"))?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state, assets)).await?;
    Ok(())
}

async fn list_examples(State(state): State<AppState>) -> Json<serde_json::Value> {
    let items: Vec<_> = state
        .examples
        .iter()
        .map(|e| {
            json!({
                "example_id": e.example_id,
                "page_title": e.page_title,
                "section_title": e.section_title,
                "num_highlights": e.highlights.len(),
            })
        })
        .collect();
    Json(json!(items))
}

#[derive(Debug, Deserialize)]
struct RevealQuery {
    #[serde(default)]
    reveal: Option<String>,
}

async fn get_example(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<i64>,
    Query(q): Query<RevealQuery>,
) -> Result<Json<serde_json::Value>, ApiError> {
    let e = state.example(id)?;
    let grid = resolve_grid(&e.table).map_err(|err| ApiError::Internal(err.to_string()))?;
    let cells: Vec<_> = e
        .table
        .locs()
        .map(|loc| {
            let cell = e.table.cell(loc);
            let r = grid.rect_of(loc);
            json!({
                "row": loc.row,
                "cell": loc.cell,
                "value": cell.value,
                "is_header": cell.is_header,
                "top": r.top,
                "left": r.left,
                "bottom": r.bottom,
                "right": r.right,
            })
        })
        .collect();
    let mut body = json!({
        "example_id": e.example_id,
        "page_title": e.page_title,
        "section_title": e.section_title,
        "section_text": e.section_text,
        "width": grid.width(),
        "height": grid.height(),
        "cells": cells,
        "intention": e.reference(),
    });
    if matches!(q.reveal.as_deref(), Some("1" | "true")) {
        body["highlighted_cells"] = json!(pairs(&e.highlights));
    }
    Ok(Json(body))
}

fn pairs(h: &HighlightSet) -> Vec<[usize; 2]> {
    h.iter().map(|l| [l.row, l.cell]).collect()
}

#[derive(Debug, Deserialize)]
struct AnnotatorQuery {
    #[serde(default)]
    annotator: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HighlightBody {
    highlighted_cells: Vec<(usize, usize)>,
}

/// Validates a submission body against the example's table.
fn parse_submission(e: &Example, body: &[u8]) -> Result<HighlightSet, ApiError> {
    let parsed: HighlightBody =
        serde_json::from_slice(body).map_err(|err| ApiError::BadRequest(format!("malformed body: {err}")))?;
    if parsed.highlighted_cells.is_empty() {
        return Err(ApiError::BadRequest("empty selection".into()));
    }
    let mut h = HighlightSet::new();
    for (row, cell) in parsed.highlighted_cells {
        let loc = CellLoc::new(row, cell);
        if !e.table.contains(loc) {
            return Err(ApiError::BadRequest(format!("cell {loc} is outside the table")));
        }
        h.insert(loc);
    }
    Ok(h)
}

async fn post_highlights(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<i64>,
    Query(q): Query<AnnotatorQuery>,
    body: Bytes,
) -> Result<(StatusCode, Json<serde_json::Value>), ApiError> {
    let e = state.example(id)?;
    let h = parse_submission(e, &body)?;
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let sub = Submission {
        example_id: id,
        annotator: q.annotator.unwrap_or_else(|| "anonymous".into()),
        timestamp,
        highlighted_cells: pairs(&h),
    };
    let line = serde_json::to_string(&sub).expect("submission serializes");
    let mut store = state
        .store
        .lock()
        .map_err(|_| ApiError::Internal("store poisoned".into()))?;
    writeln!(store.writer, "{line}")
        .and_then(|_| store.writer.flush())
        .map_err(|err| ApiError::Internal(err.to_string()))?;
    store.submissions.entry(id).or_default().push(sub.clone());
    Ok((StatusCode::CREATED, Json(json!(sub))))
}

async fn compare(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<i64>,
    Query(q): Query<AnnotatorQuery>,
) -> Result<Json<serde_json::Value>, ApiError> {
    let e = state.example(id)?;
    let submitted: HighlightSet = {
        let store = state
            .store
            .lock()
            .map_err(|_| ApiError::Internal("store poisoned".into()))?;
        let latest = store
            .submissions
            .get(&id)
            .and_then(|subs| {
                subs.iter()
                    .rev()
                    .find(|s| q.annotator.as_ref().is_none_or(|a| *a == s.annotator))
            })
            .ok_or_else(|| ApiError::NotFound(format!("no submission for example {id}")))?;
        latest
            .highlighted_cells
            .iter()
            .map(|&[r, c]| CellLoc::new(r, c))
            .collect()
    };
    let cmp =
        compare_highlights(&e.table, &e.highlights, &submitted).map_err(|err| ApiError::Internal(err.to_string()))?;
    Ok(Json(json!({
        "example_id": id,
        "reference": pairs(&e.highlights),
        "submitted": pairs(&submitted),
        "comparison": cmp,
    })))
}
