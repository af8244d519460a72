//! HTTP JSON API. All view state arrives in the query string; the dataset
//! is shared read-only and a fresh scene is compiled per request.
//!
//! * `GET /api/meta`
//! * `GET /api/scene?from&to&threshold&selected&armed&cards`
//! * `GET /api/summary/{id}?from&to`
//! * anything else: static UI assets, or a small index page

use std::collections::{BTreeSet, HashSet};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use relocviz_core::arc_geometry::ArcParams;
use relocviz_core::dataset_io::Dataset;
use relocviz_core::engine::{aggregate, building_summary, PartnerFlow, TimeWindow};
use relocviz_core::scene::{compile_scene, scene_json, CardPlacement, ViewState};
use relocviz_core::styling::StyleParams;
use relocviz_core::{Color, Point};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;
use tower_http::services::ServeDir;

pub struct AppState {
    pub dataset: Dataset,
    pub style: StyleParams,
    pub arc: ArcParams,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ApiError(pub String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (StatusCode::BAD_REQUEST, Json(json!({ "error": self.0 }))).into_response()
    }
}

type Params = Vec<(String, String)>;

pub fn router(state: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/meta", get(meta))
        .route("/api/scene", get(scene))
        .route("/api/summary/{id}", get(summary))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(index)),
    }
}

pub async fn serve(
    state: Arc<AppState>,
    static_dir: Option<PathBuf>,
    addr: SocketAddr,
) -> Result<(), ServeError> {
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|source| ServeError::Bind { addr, source })?;
    eprintln!("listening on http://{addr}");
    axum::serve(listener, router(state, static_dir))
        .await
        .map_err(ServeError::Io)
}

#[derive(Debug, Error)]
pub enum ServeError {
    #[error("cannot listen on {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(std::io::Error),
}

#[derive(Serialize)]
struct MetaBuilding<'a> {
    id: usize,
    name: &'a str,
    color: Color,
    anchor: Point,
}

async fn meta(State(st): State<Arc<AppState>>) -> Response {
    let ds = &st.dataset;
    let buildings: Vec<MetaBuilding> = ds
        .buildings
        .iter()
        .map(|b| MetaBuilding {
            id: b.id,
            name: &b.name,
            color: b.color,
            anchor: b.anchor,
        })
        .collect();
    Json(json!({
        "periods": ds.series.period_labels(),
        "buildings": buildings,
        "canvas": { "w": ds.width, "h": ds.height },
    }))
    .into_response()
}

async fn scene(
    State(st): State<Arc<AppState>>,
    query: Result<Query<Params>, QueryRejection>,
) -> Result<Response, ApiError> {
    let Query(params) = query.map_err(|e| ApiError(e.body_text()))?;
    let vs = parse_view(&st.dataset, &params)?;
    let scene = compile_scene(&st.dataset, &vs, &st.style, &st.arc)
        .map_err(|e| ApiError(e.to_string()))?;
    Ok(([(header::CONTENT_TYPE, "application/json")], scene_json(&scene)).into_response())
}

#[derive(Serialize)]
struct SummaryBody<'a> {
    building: usize,
    name: &'a str,
    lo: usize,
    hi: usize,
    out: u64,
    #[serde(rename = "in")]
    inflow: u64,
    net: i64,
    internal: u64,
    partners: Vec<PartnerFlow>,
}

async fn summary(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    query: Result<Query<Params>, QueryRejection>,
) -> Result<Response, ApiError> {
    let Query(params) = query.map_err(|e| ApiError(e.body_text()))?;
    let ds = &st.dataset;
    let id = parse_id(ds, "building", &id)?;
    let q = QueryParams::new(&params, &["from", "to"])?;
    let window = parse_window(ds, &q)?;
    let agg = aggregate(&ds.series, window).map_err(|e| ApiError(e.to_string()))?;
    let card = building_summary(&agg, id);
    Ok(Json(SummaryBody {
        building: id,
        name: &ds.buildings[id].name,
        lo: window.lo(),
        hi: window.hi(),
        out: card.out_total,
        inflow: card.in_total,
        net: card.net,
        internal: card.internal,
        partners: card.partners,
    })
    .into_response())
}

async fn index() -> Html<&'static str> {
    Html(INDEX)
}

const INDEX: &str = "<!doctype html>
<html><head><meta charset=\"utf-8\"><title>relocviz</title></head>
<body><h1>relocviz</h1><ul>
<li><a href=\"/api/meta\">/api/meta</a></li>
<li><a href=\"/api/scene\">/api/scene</a>?from&amp;to&amp;threshold&amp;selected&amp;armed&amp;cards</li>
<li>/api/summary/{id}?from&amp;to</li>
</ul></body></html>
";

struct QueryParams<'a> {
    params: &'a [(String, String)],
}

impl<'a> QueryParams<'a> {
    fn new(params: &'a [(String, String)], allowed: &[&str]) -> Result<Self, ApiError> {
        let mut seen = HashSet::new();
        for (key, _) in params {
            if !allowed.contains(&key.as_str()) {
                return Err(ApiError(format!("unknown parameter `{key}`")));
            }
            if !seen.insert(key.as_str()) {
                return Err(ApiError(format!("duplicate parameter `{key}`")));
            }
        }
        Ok(Self { params })
    }

    /// Present and non-empty.
    fn get(&self, key: &str) -> Option<&'a str> {
        self.params
            .iter()
            .find(|(k, v)| k == key && !v.is_empty())
            .map(|(_, v)| v.as_str())
    }
}

fn parse_number<T: std::str::FromStr>(name: &str, raw: &str) -> Result<T, ApiError> {
    raw.trim()
        .parse()
        .map_err(|_| ApiError(format!("invalid {name}: `{raw}`")))
}

fn parse_id(ds: &Dataset, name: &str, raw: &str) -> Result<usize, ApiError> {
    let id: usize = parse_number(name, raw)?;
    if id >= ds.buildings.len() {
        return Err(ApiError(format!("unknown building id {id}")));
    }
    Ok(id)
}

fn parse_window(ds: &Dataset, q: &QueryParams) -> Result<TimeWindow, ApiError> {
    let periods = ds.series.periods();
    let lo = match q.get("from") {
        Some(raw) => parse_number("from", raw)?,
        None => 0,
    };
    let hi = match q.get("to") {
        Some(raw) => parse_number("to", raw)?,
        None => periods - 1,
    };
    TimeWindow::new(lo, hi, periods).map_err(|e| ApiError(e.to_string()))
}

/// Builds a view from `/api/scene` parameters. Defaults: the full window,
/// threshold 1, nothing selected or armed. `selected` is a comma-separated
/// id list; `cards` is a comma-separated list of `id:x:y:pinned` with
/// `pinned` 0 or 1.
pub fn parse_view(ds: &Dataset, params: &[(String, String)]) -> Result<ViewState, ApiError> {
    let q = QueryParams::new(params, &["from", "to", "threshold", "selected", "armed", "cards"])?;
    let mut vs = ViewState::new(parse_window(ds, &q)?);
    if let Some(raw) = q.get("threshold") {
        vs.threshold = parse_number("threshold", raw)?;
        if vs.threshold == 0 {
            return Err(ApiError("threshold must be at least 1".into()));
        }
    }
    if let Some(raw) = q.get("selected") {
        vs.selected = raw
            .split(',')
            .map(|id| parse_id(ds, "selected id", id))
            .collect::<Result<BTreeSet<_>, _>>()?;
    }
    if let Some(raw) = q.get("armed") {
        vs.armed = Some(parse_id(ds, "armed", raw)?);
    }
    if let Some(raw) = q.get("cards") {
        vs.cards = raw
            .split(',')
            .map(|card| parse_card(ds, card))
            .collect::<Result<_, _>>()?;
    }
    vs.validate(ds).map_err(|e| ApiError(e.to_string()))?;
    Ok(vs)
}

fn parse_card(ds: &Dataset, raw: &str) -> Result<CardPlacement, ApiError> {
    let fields: Vec<&str> = raw.split(':').collect();
    let [id, x, y, pinned] = fields[..] else {
        return Err(ApiError(format!("invalid card `{raw}`, expected id:x:y:pinned")));
    };
    let pinned = match pinned {
        "1" | "true" => true,
        "0" | "false" => false,
        _ => return Err(ApiError(format!("invalid card pinned flag `{pinned}`"))),
    };
    let x: f64 = parse_number("card x", x)?;
    let y: f64 = parse_number("card y", y)?;
    if !(x.is_finite() && y.is_finite()) {
        return Err(ApiError(format!("invalid card position `{raw}`")));
    }
    Ok(CardPlacement {
        building: parse_id(ds, "card id", id)?,
        x,
        y,
        pinned,
    })
}
