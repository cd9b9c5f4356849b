//! HTTP API over the requirement library: live formalization, requirement
//! set CRUD, metrics and interactive monitor sessions.
//!
//! Every route lives under `/api`. Errors share one body shape,
//! `{"error": code, "message": text}`, plus `errors` (located diagnostics)
//! on parse failures.

#![recursion_limit = "256"]

mod error;
mod parse;
pub mod schema;
mod sets;
mod simulate;
mod wire;

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};
use std::time::Duration;

use axum::http::HeaderValue;
use axum::routing::{get, patch, post};
use axum::{Json, Router};
use serde_json::json;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

use reqforge_core::store::RequirementSet;

pub use error::{ApiError, Diagnostic};
pub use wire::{formalize, Formalization, RequirementDoc, Rewrite};

pub const DEFAULT_SESSION_IDLE: Duration = Duration::from_secs(30 * 60);

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    /// Directory that `POST /api/sets/{p}/save` writes into.
    pub save_dir: PathBuf,
    /// Simulation sessions untouched for this long answer 410.
    pub session_idle: Duration,
    /// Origins allowed by CORS; empty allows any origin.
    pub cors_origins: Vec<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            save_dir: PathBuf::from("."),
            session_idle: DEFAULT_SESSION_IDLE,
            cors_origins: Vec::new(),
        }
    }
}

/// Shared service state. Sets are immutable snapshots swapped whole under
/// the write lock, so a reader holds either the old set or the new one.
#[derive(Clone)]
pub struct AppState(Arc<Inner>);

struct Inner {
    config: ServiceConfig,
    sets: RwLock<BTreeMap<String, Arc<RequirementSet>>>,
    sessions: Mutex<HashMap<String, Arc<Mutex<simulate::Session>>>>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        AppState(Arc::new(Inner {
            config,
            sets: RwLock::new(BTreeMap::new()),
            sessions: Mutex::new(HashMap::new()),
        }))
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.0.config
    }

    /// Adds or replaces a set under its project name.
    pub fn insert_set(&self, set: RequirementSet) {
        let mut sets = self.0.sets.write().expect("set table poisoned");
        sets.insert(set.project.clone(), Arc::new(set));
    }

    pub fn set(&self, project: &str) -> Option<Arc<RequirementSet>> {
        self.0.sets.read().expect("set table poisoned").get(project).cloned()
    }

    pub fn projects(&self) -> Vec<String> {
        self.0.sets.read().expect("set table poisoned").keys().cloned().collect()
    }
}

pub fn router(state: AppState) -> Router {
    let cors = cors_layer(&state.0.config.cors_origins);
    Router::new()
        .route("/api/health", get(health))
        .route("/api/schema", get(|| async { Json(schema::published()) }))
        .route("/api/requirements/parse", post(parse::parse))
        .route("/api/sets", get(sets::list).post(sets::create))
        .route("/api/sets/{p}", get(sets::get_set).delete(sets::delete_set))
        .route(
            "/api/sets/{p}/requirements",
            get(sets::list_requirements).post(sets::create_requirement),
        )
        .route(
            "/api/sets/{p}/requirements/{id}",
            get(sets::get_requirement)
                .put(sets::put_requirement)
                .delete(sets::delete_requirement),
        )
        .route("/api/sets/{p}/metrics", get(sets::metrics))
        .route("/api/sets/{p}/save", post(sets::save))
        .route("/api/simulate", post(simulate::start))
        .route("/api/simulate/{session}", patch(simulate::step))
        .layer(cors)
        .with_state(state)
}

fn cors_layer(origins: &[String]) -> CorsLayer {
    let layer = CorsLayer::new().allow_methods(Any).allow_headers(Any);
    if origins.is_empty() {
        return layer.allow_origin(Any);
    }
    let list: Vec<HeaderValue> = origins.iter().filter_map(|o| o.parse().ok()).collect();
    layer.allow_origin(AllowOrigin::list(list))
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({"status": "ok", "version": env!("CARGO_PKG_VERSION")}))
}

/// Serves until ctrl-c. Binding is the caller's job so that bind failures
/// surface before anything runs.
pub async fn serve(listener: tokio::net::TcpListener, state: AppState) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

pub async fn bind(addr: SocketAddr) -> std::io::Result<tokio::net::TcpListener> {
    tokio::net::TcpListener::bind(addr).await
}
