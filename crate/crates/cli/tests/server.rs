use std::path::Path;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tabnoise_cli::server::{router, AppState};
use tempfile::TempDir;
use tower::ServiceExt;

fn app(dir: &TempDir) -> Router {
    let input = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/sample.jsonl");
    let state = AppState::load(&input, &dir.path().join("annotations.jsonl")).unwrap();
    router(state, None)
}

async fn send(app: &Router, method: &str, uri: &str, body: &str) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let json = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, json)
}

async fn first_id(app: &Router) -> i64 {
    let (status, list) = send(app, "GET", "/api/examples", "").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(list.as_array().unwrap().len(), 6);
    list[0]["example_id"].as_i64().unwrap()
}

#[tokio::test]
async fn example_hides_highlights_unless_revealed() {
    let dir = TempDir::new().unwrap();
    let app = app(&dir);
    let id = first_id(&app).await;
    let (status, e) = send(&app, "GET", &format!("/api/examples/{id}"), "").await;
    assert_eq!(status, StatusCode::OK);
    assert!(e.get("highlighted_cells").is_none());
    assert!(e["intention"].is_string());
    let cells = e["cells"].as_array().unwrap();
    assert!(!cells.is_empty());
    for c in cells {
        assert!(c["bottom"].as_u64() >= c["top"].as_u64());
        assert!(c["right"].as_u64() < e["width"].as_u64());
    }
    let (_, e) = send(&app, "GET", &format!("/api/examples/{id}?reveal=1"), "").await;
    assert!(!e["highlighted_cells"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn unknown_ids_are_404() {
    let dir = TempDir::new().unwrap();
    let app = app(&dir);
    assert_eq!(
        send(&app, "GET", "/api/examples/12345", "").await.0,
        StatusCode::NOT_FOUND
    );
    let body = r#"{"highlighted_cells":[[0,0]]}"#;
    assert_eq!(
        send(&app, "POST", "/api/examples/12345/highlights", body).await.0,
        StatusCode::NOT_FOUND
    );
}

#[tokio::test]
async fn bad_submissions_are_400_and_not_stored() {
    let dir = TempDir::new().unwrap();
    let app = app(&dir);
    let id = first_id(&app).await;
    let uri = format!("/api/examples/{id}/highlights");
    for body in [
        "",
        "{",
        r#"{"highlighted_cells":[]}"#,
        r#"{"highlighted_cells":[[99,0]]}"#,
        r#"{"cells":[[0,0]]}"#,
    ] {
        let (status, v) = send(&app, "POST", &uri, body).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{body:?}");
        assert!(v["error"].is_string());
    }
    let written = std::fs::read_to_string(dir.path().join("annotations.jsonl")).unwrap();
    assert!(written.is_empty());
}

#[tokio::test]
async fn submission_is_appended_and_compared() {
    let dir = TempDir::new().unwrap();
    let app = app(&dir);
    let id = first_id(&app).await;
    assert_eq!(
        send(&app, "GET", &format!("/api/examples/{id}/compare"), "").await.0,
        StatusCode::NOT_FOUND
    );

    // reference is [[1,0],[1,2]]: add the Year header, drop the position
    let body = r#"{"highlighted_cells":[[1,0],[0,0]]}"#;
    let (status, sub) = send(
        &app,
        "POST",
        &format!("/api/examples/{id}/highlights?annotator=ann1"),
        body,
    )
    .await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(sub["annotator"], "ann1");

    let (status, cmp) = send(&app, "GET", &format!("/api/examples/{id}/compare"), "").await;
    assert_eq!(status, StatusCode::OK);
    let c = &cmp["comparison"];
    assert_eq!(c["precision"].as_f64().unwrap(), 0.5);
    assert_eq!(c["recall"].as_f64().unwrap(), 0.5);
    let kinds: Vec<(String, String)> = c["discrepancies"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| {
            (
                d["kind"].as_str().unwrap().to_string(),
                d["classification"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    assert!(kinds.contains(&("extra".into(), "n2-like".into())), "{kinds:?}");
    assert!(kinds.contains(&("missing".into(), "n4-like".into())), "{kinds:?}");

    let written = std::fs::read_to_string(dir.path().join("annotations.jsonl")).unwrap();
    let line: Value = serde_json::from_str(written.lines().next().unwrap()).unwrap();
    assert_eq!(line["example_id"], id);
    assert!(line["timestamp"].as_u64().unwrap() > 0);
    assert_eq!(line["highlighted_cells"], serde_json::json!([[1, 0], [0, 0]]));
}

#[tokio::test]
async fn concurrent_submissions_each_get_one_line() {
    let dir = TempDir::new().unwrap();
    let app = app(&dir);
    let id = first_id(&app).await;
    let mut tasks = Vec::new();
    for i in 0..32 {
        let app = app.clone();
        tasks.push(tokio::spawn(async move {
            let uri = format!("/api/examples/{id}/highlights?annotator=a{i}");
            send(&app, "POST", &uri, r#"{"highlighted_cells":[[1,1]]}"#).await.0
        }));
    }
    for t in tasks {
        assert_eq!(t.await.unwrap(), StatusCode::CREATED);
    }
    let written = std::fs::read_to_string(dir.path().join("annotations.jsonl")).unwrap();
    assert_eq!(written.lines().count(), 32);
    assert!(written.lines().all(|l| serde_json::from_str::<Value>(l).is_ok()));
}
