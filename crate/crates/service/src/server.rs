//! HTTP API over interaction sessions. Search work runs on a bounded pool
//! of blocking workers; handlers only touch in-memory state and the store.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use archsteer_core::config::RunConfig;
use archsteer_core::evaluation::Evaluator;
use archsteer_core::indicators::{kde_grid, pca_project};
use archsteer_core::interaction::{InteractionPoint, NodeStatus};
use archsteer_core::model::{load_model, serialize};
use archsteer_core::interaction::SessionTree;
use archsteer_core::Error as CoreError;
use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::sync::Semaphore;
use tower_http::services::ServeDir;

use crate::store::{now, SessionDocument, Store, SESSION_FORMAT};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub data_dir: PathBuf,
    pub workers: usize,
    pub ui_dir: Option<PathBuf>,
}

pub struct Session {
    doc: Mutex<SessionDocument>,
    evaluator: Arc<Evaluator>,
    /// Serializes document writes so a later snapshot always lands last.
    write: Mutex<()>,
}

pub struct AppState {
    store: Store,
    sessions: RwLock<BTreeMap<String, Arc<Session>>>,
    workers: Arc<Semaphore>,
}

impl AppState {
    /// Opens the store and restores every saved session. Points that were
    /// scheduled or running when the previous process stopped are marked
    /// failed.
    pub fn open(config: &ServiceConfig) -> std::io::Result<Arc<Self>> {
        let store = Store::open(&config.data_dir)?;
        let (docs, bad) = store.load_all()?;
        for (path, err) in bad {
            tracing::warn!(path = %path.display(), %err, "skipping unreadable session document");
        }
        let mut sessions = BTreeMap::new();
        for mut doc in docs {
            let evaluator = match Evaluator::new(doc.model.clone(), doc.config.eval_settings()) {
                Ok(e) => Arc::new(e),
                Err(err) => {
                    tracing::warn!(id = %doc.id, %err, "skipping session with unusable model");
                    continue;
                }
            };
            let failed = doc.tree.fail_interrupted();
            if !failed.is_empty() {
                tracing::info!(id = %doc.id, points = ?failed, "marked interrupted points failed");
                doc.updated = now();
                store.save(&doc)?;
            }
            sessions.insert(
                doc.id.clone(),
                Arc::new(Session {
                    doc: Mutex::new(doc),
                    evaluator,
                    write: Mutex::new(()),
                }),
            );
        }
        Ok(Arc::new(Self {
            store,
            sessions: RwLock::new(sessions),
            workers: Arc::new(Semaphore::new(config.workers.max(1))),
        }))
    }

    fn session(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        self.sessions
            .read()
            .expect("session map lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(format!("unknown session '{id}'")))
    }

    fn persist(&self, session: &Session) -> std::io::Result<()> {
        let _w = session.write.lock().expect("write lock");
        let snapshot = {
            let mut doc = session.doc.lock().expect("session lock");
            doc.updated = now();
            doc.clone()
        };
        self.store.save(&snapshot)
    }
}

pub fn router(state: Arc<AppState>, ui_dir: Option<PathBuf>) -> Router {
    let mut app = Router::new()
        .route("/healthz", get(healthz))
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/tree", get(get_tree))
        .route("/sessions/{id}/nodes/{nid}", get(get_node))
        .route("/sessions/{id}/nodes/{nid}/choose", post(choose))
        .route("/sessions/{id}/nodes/{nid}/landscape", get(landscape));
    if let Some(dir) = ui_dir {
        app = app.nest_service("/ui", ServeDir::new(dir).append_index_html_on_directories(true));
    }
    app.with_state(state)
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self {
            status,
            body: json!({ "error": code, "message": message.into() }),
        }
    }

    fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not-found", message)
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "malformed", message)
    }

    fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl From<CoreError> for ApiError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::Validation(v) => Self {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                body: json!({ "error": "validation", "message": msg, "violations": v }),
            },
            CoreError::Parse { .. } => Self::new(StatusCode::UNPROCESSABLE_ENTITY, "parse", msg),
            CoreError::Divisibility { .. } => {
                Self::new(StatusCode::UNPROCESSABLE_ENTITY, "divisibility", msg)
            }
            CoreError::Config(_) => Self::new(StatusCode::UNPROCESSABLE_ENTITY, "config", msg),
            CoreError::DepthExceeded { .. } => {
                Self::new(StatusCode::UNPROCESSABLE_ENTITY, "depth-exceeded", msg)
            }
            CoreError::UnknownCluster(_) => {
                Self::new(StatusCode::UNPROCESSABLE_ENTITY, "unknown-cluster", msg)
            }
            CoreError::NotReady(_) => Self::new(StatusCode::CONFLICT, "not-ready", msg),
            CoreError::UnknownPoint(_) => Self::not_found(msg),
            CoreError::Degenerate(_) | CoreError::Empty(_) => {
                Self::new(StatusCode::UNPROCESSABLE_ENTITY, "degenerate", msg)
            }
            _ => Self::internal(msg),
        }
    }
}

impl From<std::io::Error> for ApiError {
    fn from(e: std::io::Error) -> Self {
        Self::internal(format!("storage error: {e}"))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult = Result<Response, ApiError>;

fn ok(status: StatusCode, body: Value) -> ApiResult {
    Ok((status, Json(body)).into_response())
}

async fn healthz() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

#[derive(Deserialize)]
struct CreateRequest {
    model: Value,
    #[serde(default)]
    config: Option<Value>,
    #[serde(default)]
    seed: Option<u64>,
}

async fn create_session(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult {
    let req: CreateRequest =
        serde_json::from_slice(&body).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let model = load_model(&serde_json::to_vec(&req.model).expect("value serializes"))?;
    let config: RunConfig = match req.config {
        Some(v) => serde_json::from_value(v).map_err(|e| CoreError::Config(e.to_string()))?,
        None => RunConfig::default(),
    };
    config.validate()?;
    let seed = req.seed.unwrap_or(config.search.seed);
    let tree = SessionTree::new(config.search.clone(), config.clustering.clone(), seed)?;
    let evaluator = Arc::new(Evaluator::new(model.clone(), config.eval_settings())?);

    let id = uuid::Uuid::new_v4().simple().to_string();
    let t = now();
    let mut doc = SessionDocument {
        format: SESSION_FORMAT,
        id: id.clone(),
        model,
        config,
        tree,
        created: t,
        updated: t,
    };
    doc.tree.mark_running(0)?;
    let session = Arc::new(Session {
        doc: Mutex::new(doc),
        evaluator,
        write: Mutex::new(()),
    });
    state.persist(&session)?;
    state
        .sessions
        .write()
        .expect("session map lock")
        .insert(id.clone(), Arc::clone(&session));
    schedule(&state, session, 0);
    ok(StatusCode::CREATED, json!({ "id": id, "root": 0 }))
}

async fn list_sessions(State(state): State<Arc<AppState>>) -> ApiResult {
    let sessions: Vec<Arc<Session>> = state.sessions.read().expect("session map lock").values().cloned().collect();
    let list: Vec<Value> = sessions
        .iter()
        .map(|s| {
            let d = s.doc.lock().expect("session lock");
            json!({ "id": d.id, "model": d.model.name, "created": d.created, "updated": d.updated })
        })
        .collect();
    ok(StatusCode::OK, json!({ "sessions": list }))
}

async fn get_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let s = state.session(&id)?;
    let d = s.doc.lock().expect("session lock");
    ok(
        StatusCode::OK,
        json!({
            "id": d.id,
            "format": d.format,
            "model": d.model.name,
            "model_document": serde_json::from_str::<Value>(&serialize(&d.model)).expect("model json"),
            "config": d.config,
            "seed": d.tree.seed,
            "created": d.created,
            "updated": d.updated,
            "plan": d.tree.search.plan()?,
            "nodes": d.tree.summary(),
        }),
    )
}

async fn get_tree(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let s = state.session(&id)?;
    let d = s.doc.lock().expect("session lock");
    let nodes = d.tree.summary();
    let edges: Vec<Value> = nodes
        .iter()
        .flat_map(|n| {
            n.children
                .iter()
                .map(move |(c, child)| json!({ "parent": n.id, "cluster": c, "child": child }))
        })
        .collect();
    ok(
        StatusCode::OK,
        json!({ "session": d.id, "interactions": d.tree.search.interactions, "nodes": nodes, "edges": edges }),
    )
}

fn node_view(tree: &SessionTree, p: &InteractionPoint) -> Result<Value, ApiError> {
    let plan = tree.search.plan()?;
    let of = plan[p.depth].iterations;
    let mut view = json!({
        "id": p.id,
        "parent": p.parent,
        "via_cluster": p.via_cluster,
        "depth": p.depth,
        "status": p.status,
        "generation": p.generation,
        "of": of,
        "frozen_prefix": p.frozen_prefix,
        "children": p.children,
        "can_expand": p.depth < tree.search.interactions,
    });
    if let Some(e) = &p.error {
        view["error"] = json!(e);
    }
    if p.status != NodeStatus::Done {
        return Ok(view);
    }
    let (Some(archive), Some(cs)) = (&p.archive, &p.clusters) else {
        return Ok(view);
    };
    let solutions: Vec<Value> = p
        .clustered
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let entry = &archive.entries[e];
            let label = cs.point_labels[i];
            json!({
                "index": i,
                "entry": e,
                "chromosome": entry.chromosome,
                "objectives": entry.objectives,
                "cluster": cs.assignments.get(i),
                "label": label.words(),
                "caption": label.to_string(),
                "medoid": cs.medoids.contains(&i),
            })
        })
        .collect();
    let clusters: Vec<Value> = (0..cs.k)
        .map(|c| {
            let m = cs.medoids[c];
            let entry = &archive.entries[p.clustered[m]];
            json!({
                "id": c,
                "medoid": m,
                "size": cs.members(c).len(),
                "objectives": entry.objectives,
                "chromosome": entry.chromosome,
                "label": cs.labels[c].words(),
                "caption": cs.labels[c].to_string(),
                "child": p.children.get(&c),
            })
        })
        .collect();
    view["nps"] = json!(archive.nps());
    view["k"] = json!(cs.k);
    view["silhouette"] = json!(cs.silhouette);
    view["front"] = json!(solutions);
    view["clusters"] = json!(clusters);
    Ok(view)
}

fn point_of<'a>(doc: &'a SessionDocument, nid: &str) -> Result<&'a InteractionPoint, ApiError> {
    let n: usize = nid
        .parse()
        .map_err(|_| ApiError::not_found(format!("unknown node '{nid}'")))?;
    Ok(doc.tree.point(n)?)
}

async fn get_node(State(state): State<Arc<AppState>>, Path((id, nid)): Path<(String, String)>) -> ApiResult {
    let s = state.session(&id)?;
    let d = s.doc.lock().expect("session lock");
    let p = point_of(&d, &nid)?;
    ok(StatusCode::OK, node_view(&d.tree, p)?)
}

#[derive(Deserialize)]
struct ChooseRequest {
    cluster: usize,
}

async fn choose(
    State(state): State<Arc<AppState>>,
    Path((id, nid)): Path<(String, String)>,
    body: Bytes,
) -> ApiResult {
    let s = state.session(&id)?;
    let (child, status) = {
        let mut d = s.doc.lock().expect("session lock");
        let node = point_of(&d, &nid)?.id;
        let req: ChooseRequest =
            serde_json::from_slice(&body).map_err(|e| ApiError::bad_request(e.to_string()))?;
        let (child, created) = d.tree.register_child(node, req.cluster)?;
        let rerun = d.tree.point(child)?.status == NodeStatus::Failed;
        if created || rerun {
            d.tree.mark_running(child)?;
            (child, StatusCode::ACCEPTED)
        } else {
            (child, StatusCode::OK)
        }
    };
    if status == StatusCode::ACCEPTED {
        state.persist(&s)?;
        schedule(&state, Arc::clone(&s), child);
    }
    let d = s.doc.lock().expect("session lock");
    let p = d.tree.point(child)?;
    ok(status, json!({ "child": child, "status": p.status, "depth": p.depth }))
}

#[derive(Deserialize)]
struct LandscapeQuery {
    #[serde(default)]
    scope: Option<String>,
    #[serde(default)]
    grid: Option<usize>,
}

async fn landscape(
    State(state): State<Arc<AppState>>,
    Path((id, nid)): Path<(String, String)>,
    Query(q): Query<LandscapeQuery>,
) -> ApiResult {
    let s = state.session(&id)?;
    let (entries, objectives, scope) = {
        let d = s.doc.lock().expect("session lock");
        let p = point_of(&d, &nid)?;
        let Some(archive) = &p.archive else {
            return Err(CoreError::NotReady(p.id).into());
        };
        let scope = q.scope.unwrap_or_else(|| "front".into());
        let entries: Vec<usize> = match scope.as_str() {
            "front" => p.clustered.clone(),
            "archive" => (0..archive.entries.len()).filter(|&i| archive.entries[i].feasible).collect(),
            other => return Err(ApiError::bad_request(format!("unknown scope '{other}'"))),
        };
        let objectives: Vec<[f64; 4]> = entries
            .iter()
            .map(|&e| archive.entries[e].objectives.as_array())
            .collect();
        (entries, objectives, scope)
    };
    let size = q.grid.unwrap_or(64).clamp(1, 256);
    let proj = pca_project(&objectives)?;
    let kde = kde_grid(&proj.points, None, size)?;
    let points: Vec<Value> = entries
        .iter()
        .zip(&proj.points)
        .map(|(e, p)| json!({ "entry": e, "x": p[0], "y": p[1] }))
        .collect();
    ok(
        StatusCode::OK,
        json!({
            "scope": scope,
            "points": points,
            "explained": proj.explained,
            "loadings": proj.loadings,
            "kde": kde,
        }),
    )
}

/// Runs a point's segment on the worker pool. The point must already be
/// marked running.
fn schedule(state: &Arc<AppState>, session: Arc<Session>, point: usize) {
    let state = Arc::clone(state);
    tokio::spawn(async move {
        let Ok(_permit) = Arc::clone(&state.workers).acquire_owned().await else {
            return;
        };
        let (job, search, clustering) = {
            let d = session.doc.lock().expect("session lock");
            match d.tree.job(point) {
                Ok(j) => (j, d.tree.search.clone(), d.tree.clustering.clone()),
                Err(e) => {
                    drop(d);
                    finish(&state, &session, point, Err(e));
                    return;
                }
            }
        };
        let worker_session = Arc::clone(&session);
        let outcome = tokio::task::spawn_blocking(move || {
            let progress = |g: usize| {
                let mut d = worker_session.doc.lock().expect("session lock");
                let _ = d.tree.set_progress(point, g);
            };
            job.run(&worker_session.evaluator, &search, &clustering, &progress)
        })
        .await;
        let result = match outcome {
            Ok(r) => r,
            Err(e) => Err(CoreError::Config(format!("worker stopped: {e}"))),
        };
        let state2 = Arc::clone(&state);
        let _ = tokio::task::spawn_blocking(move || finish(&state2, &session, point, result)).await;
    });
}

fn finish(
    state: &AppState,
    session: &Session,
    point: usize,
    result: archsteer_core::Result<archsteer_core::interaction::PointResult>,
) {
    {
        let mut d = session.doc.lock().expect("session lock");
        let id = d.id.clone();
        match result {
            Ok(r) => {
                let _ = d.tree.complete(point, r);
            }
            Err(e) => {
                tracing::warn!(session = %id, point, error = %e, "segment failed");
                let _ = d.tree.fail(point, e.to_string());
            }
        }
    }
    if let Err(e) = state.persist(session) {
        tracing::error!(error = %e, "could not persist session");
    }
}

/// Binds and serves until the process is stopped.
pub async fn serve(config: ServiceConfig, port: u16) -> std::io::Result<()> {
    let state = AppState::open(&config)?;
    let app = router(state, config.ui_dir.clone());
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, app).await
}
