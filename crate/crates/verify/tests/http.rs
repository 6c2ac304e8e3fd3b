use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use pointvos_core::sampling::{Candidate, CandidateSet, FrameCandidates, ProposedLabel};
use pointvos_core::Pixel;
use pointvos_verify::http::router;
use pointvos_verify::SessionStore;
use serde_json::{json, Value};
use tower::ServiceExt;

fn candidates() -> CandidateSet {
    let c = |x, proposed| Candidate { point: Pixel::new(x, 3), proposed };
    CandidateSet {
        object_id: 2,
        frames: vec![
            FrameCandidates {
                frame: 5,
                candidates: vec![c(1, ProposedLabel::Uncertain), c(2, ProposedLabel::Foreground)],
            },
            FrameCandidates {
                frame: 1,
                candidates: vec![c(3, ProposedLabel::Background), c(4, ProposedLabel::Foreground)],
            },
        ],
    }
}

async fn call(app: &axum::Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap_or(Value::Null) };
    (status, value)
}

fn app(root: &std::path::Path) -> axum::Router {
    router(Arc::new(SessionStore::open(root).unwrap()))
}

#[tokio::test]
async fn full_session_over_http() {
    let tmp = tempfile::tempdir().unwrap();
    let app = app(tmp.path());

    let (s, created) = call(&app, "POST", "/sessions", Some(json!({
        "video_id": "clip",
        "candidates": candidates(),
        "overlay": {"kind": "points", "frame": 1, "points": [{"x": 4, "y": 3}]},
    }))).await;
    assert_eq!(s, StatusCode::CREATED);
    assert_eq!(created["items"], 4);
    let id = created["session_id"].as_str().unwrap().to_string();

    let (s, first) = call(&app, "GET", &format!("/sessions/{id}/next"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(first["status"], "item");
    assert_eq!(first["item"]["proposed"], "foreground");
    assert_eq!(first["item"]["frame"], 1);
    assert_eq!(first["image"], "/frames/clip/00001.jpg");
    assert_eq!(first["overlay"]["kind"], "points");
    let (_, again) = call(&app, "GET", &format!("/sessions/{id}/next"), None).await;
    assert_eq!(first, again);

    let (s, err) = call(&app, "POST", &format!("/sessions/{id}/export"), None).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(err["remaining"], json!([0, 1, 2, 3]));

    let verdicts = ["accept", "reject", "accept", "ambiguous"];
    for (i, d) in verdicts.iter().enumerate() {
        let (s, p) = call(&app, "POST", &format!("/sessions/{id}/verdicts"),
            Some(json!({"item": i, "decision": d, "duration": 0.8}))).await;
        assert_eq!(s, StatusCode::OK, "{p}");
        assert_eq!(p["cursor"], i + 1);
    }
    let (s, _) = call(&app, "POST", &format!("/sessions/{id}/verdicts"),
        Some(json!({"item": 1, "decision": "accept", "duration": 0.8}))).await;
    assert_eq!(s, StatusCode::CONFLICT);

    let (_, done) = call(&app, "GET", &format!("/sessions/{id}/next"), None).await;
    assert_eq!(done["status"], "done");

    let (_, progress) = call(&app, "GET", &format!("/sessions/{id}/progress"), None).await;
    assert_eq!(progress["foreground"], json!({"accept": 1, "reject": 1, "ambiguous": 0}));
    assert_eq!(progress["uncertain"]["ambiguous"], 1);

    let (s, export) = call(&app, "POST", &format!("/sessions/{id}/export"), None).await;
    assert_eq!(s, StatusCode::OK);
    let labels: Vec<&str> = export["points"].as_array().unwrap().iter().map(|p| p["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["positive", "negative", "ambiguous"]);
    assert_eq!(export["rejected"].as_array().unwrap().len(), 1);

    let (_, flipped) = call(&app, "POST", &format!("/sessions/{id}/export"), Some(json!({"label_flip": true}))).await;
    assert_eq!(flipped["points"].as_array().unwrap().len(), 4);
    assert_eq!(flipped["points"][1]["source"], "rejected-candidate");

    let (_, listing) = call(&app, "GET", "/sessions", None).await;
    assert_eq!(listing[0]["session_id"], id.as_str());
}

#[tokio::test]
async fn error_statuses() {
    let tmp = tempfile::tempdir().unwrap();
    let app = app(tmp.path());
    let (s, _) = call(&app, "GET", "/sessions/missing/next", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);

    let empty = CandidateSet { object_id: 1, frames: vec![] };
    let (s, _) = call(&app, "POST", "/sessions", Some(json!({"video_id": "v", "candidates": empty}))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);

    let (_, created) = call(&app, "POST", "/sessions", Some(json!({"video_id": "v", "candidates": candidates()}))).await;
    let id = created["session_id"].as_str().unwrap();
    let (s, _) = call(&app, "POST", &format!("/sessions/{id}/verdicts"),
        Some(json!({"item": 2, "decision": "accept", "duration": 1.0}))).await;
    assert_eq!(s, StatusCode::CONFLICT);
    let (s, _) = call(&app, "POST", &format!("/sessions/{id}/verdicts"),
        Some(json!({"item": 0, "decision": "accept", "duration": -1.0}))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (_, p) = call(&app, "GET", &format!("/sessions/{id}/progress"), None).await;
    assert_eq!(p["cursor"], 0);
}

#[tokio::test]
async fn config_and_frames() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::create_dir_all(tmp.path().join("frames/clip")).unwrap();
    std::fs::write(tmp.path().join("frames/clip/00001.jpg"), b"jpegbytes").unwrap();
    let app = app(tmp.path());

    let (s, cfg) = call(&app, "GET", "/config", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(cfg["hotkeys"], json!({"accept": "a", "reject": "r", "ambiguous": "x"}));
    assert!(cfg["colors"]["foreground"].is_string());

    let resp = app.clone()
        .oneshot(Request::get("/frames/clip/00001.jpg").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    assert_eq!(&resp.into_body().collect().await.unwrap().to_bytes()[..], b"jpegbytes");
    let (s, _) = call(&app, "GET", "/frames/clip/00002.jpg", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}
