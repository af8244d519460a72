use std::path::Path;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use relocviz_core::arc_geometry::ArcParams;
use relocviz_core::engine::TimeWindow;
use relocviz_core::scene::{compile_scene, scene_json, CardPlacement, ViewState};
use relocviz_core::styling::StyleParams;
use relocviz_service::api::{router, AppState};
use relocviz_service::commands::{load, DatasetPaths};
use serde_json::{json, Value};
use tower::ServiceExt;

fn state() -> Arc<AppState> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures");
    let dataset = load(&DatasetPaths {
        polygons: dir.join("campus.poly"),
        colors: dir.join("campus.colors"),
        relocations: dir.join("campus.reloc"),
    })
    .unwrap();
    Arc::new(AppState {
        dataset,
        style: StyleParams::default(),
        arc: ArcParams::default(),
    })
}

async fn get(app: &Router, uri: &str) -> (StatusCode, String) {
    let resp = app
        .clone()
        .oneshot(Request::get(uri).body(Body::empty()).unwrap())
        .await
        .unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

#[tokio::test]
async fn meta_echoes_the_dataset() {
    let app = router(state(), None);
    let (status, body) = get(&app, "/api/meta").await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["periods"], json!(["P1", "P2", "P3", "P4"]));
    assert_eq!(v["canvas"], json!({"w": 64, "h": 48}));
    assert_eq!(
        v["buildings"][0],
        json!({"id": 0, "name": "A", "color": "FF0000", "anchor": [12.0, 10.0]})
    );
    assert_eq!(v["buildings"].as_array().unwrap().len(), 3);
}

#[tokio::test]
async fn scene_equals_library_output() {
    let st = state();
    let app = router(st.clone(), None);
    let (status, body) = get(&app, "/api/scene?from=0&to=1&threshold=3").await;
    assert_eq!(status, StatusCode::OK);
    let mut vs = ViewState::new(TimeWindow::new(0, 1, 4).unwrap());
    vs.threshold = 3;
    let want = compile_scene(&st.dataset, &vs, &st.style, &st.arc).unwrap();
    assert_eq!(body, scene_json(&want));
}

#[tokio::test]
async fn scene_defaults_and_cards() {
    let st = state();
    let app = router(st.clone(), None);
    let (_, body) = get(&app, "/api/scene").await;
    let vs = ViewState::new(TimeWindow::full(4));
    assert_eq!(body, scene_json(&compile_scene(&st.dataset, &vs, &st.style, &st.arc).unwrap()));

    let (status, body) = get(&app, "/api/scene?selected=0,2&armed=1&cards=2:120.5:80:1").await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let mut vs = ViewState::new(TimeWindow::full(4));
    vs.selected.extend([0, 2]);
    vs.armed = Some(1);
    vs.cards.push(CardPlacement {
        building: 2,
        x: 120.5,
        y: 80.0,
        pinned: true,
    });
    assert_eq!(body, scene_json(&compile_scene(&st.dataset, &vs, &st.style, &st.arc).unwrap()));
}

#[tokio::test]
async fn malformed_parameters_are_json_400s() {
    let app = router(state(), None);
    let cases = [
        ("/api/scene?from=9&to=1", "window out of range"),
        ("/api/scene?from=3&to=2", "lo > hi"),
        ("/api/scene?threshold=0", "threshold must be at least 1"),
        ("/api/scene?threshold=abc", "invalid threshold: `abc`"),
        ("/api/scene?selected=0,7", "unknown building id 7"),
        ("/api/scene?armed=-1", "invalid armed: `-1`"),
        ("/api/scene?from=0&from=1", "duplicate parameter `from`"),
        ("/api/scene?zoom=2", "unknown parameter `zoom`"),
        ("/api/scene?cards=0:1:2:1", "card for building 0, which is not selected"),
        ("/api/scene?selected=0&cards=0:1:2", "invalid card `0:1:2`, expected id:x:y:pinned"),
        ("/api/summary/9", "unknown building id 9"),
        ("/api/summary/x", "invalid building: `x`"),
    ];
    for (uri, message) in cases {
        let (status, body) = get(&app, uri).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{uri}");
        assert_eq!(serde_json::from_str::<Value>(&body).unwrap(), json!({"error": message}), "{uri}");
    }
}

#[tokio::test]
async fn summary_card_payload() {
    let app = router(state(), None);
    let (status, body) = get(&app, "/api/summary/0?from=0&to=3").await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!((v["out"].as_u64(), v["in"].as_u64(), v["net"].as_i64()), (Some(10), Some(5), Some(-5)));
    assert_eq!(v["partners"], json!([{"id": 1, "out": 8, "in": 1}, {"id": 2, "out": 2, "in": 4}]));
    let (_, body) = get(&app, "/api/summary/2?from=3&to=3").await;
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!((v["out"].as_u64(), v["in"].as_u64(), v["net"].as_i64()), (Some(4), Some(10), Some(6)));
}

#[tokio::test]
async fn static_assets_and_index() {
    let (status, body) = get(&router(state(), None), "/").await;
    assert_eq!(status, StatusCode::OK);
    assert!(body.contains("/api/scene"));

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<p>ui</p>").unwrap();
    let app = router(state(), Some(dir.path().to_path_buf()));
    assert_eq!(get(&app, "/").await, (StatusCode::OK, "<p>ui</p>".to_string()));
    assert_eq!(get(&app, "/missing.js").await.0, StatusCode::NOT_FOUND);
    assert_eq!(get(&app, "/api/meta").await.0, StatusCode::OK);
}
