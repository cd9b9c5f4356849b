//! Interactive monitor sessions.
//!
//! A session owns one monitor and the verdicts it has produced. Sessions
//! close on END; a session idle past the configured timeout answers 410,
//! and is dropped from memory after twice that.

use std::sync::{Arc, Mutex, TryLockError};
use std::time::Instant;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::Json;
use serde::{Deserialize, Serialize};

use reqforge_core::monitor::{IncrementalMonitor, MonitorState, TraceEvent, Verdict};
use reqforge_core::semantics::{to_past_ltl, TemporalFormula};

use crate::error::{ApiError, Body, Diagnostic};
use crate::AppState;

pub struct Session {
    monitor: IncrementalMonitor,
    state: MonitorState,
    verdicts: Vec<Verdict>,
    last_tick: Option<u64>,
    last_used: Instant,
}

impl Session {
    fn apply(&mut self, e: &TraceEvent) -> Result<(), ApiError> {
        if self.state.ended {
            return Err(ApiError::Gone("session is closed".into()));
        }
        if let (Some(t), Some(prev)) = (e.tick(), self.last_tick) {
            if t <= prev {
                return Err(ApiError::Unprocessable(format!("tick {t} does not increase on {prev}")));
            }
        }
        let v = self.monitor.step(&mut self.state, e)?;
        self.verdicts.push(v);
        self.last_tick = e.tick().or(self.last_tick);
        Ok(())
    }

    fn view(&self, id: &str) -> SessionView {
        SessionView {
            session: id.to_string(),
            formula: self.monitor.formula().to_string(),
            verdicts: self.verdicts.clone(),
            state: StateView {
                verdict: self.state.verdict,
                r#final: self.state.is_final(),
                ended: self.state.ended,
                events: self.state.events,
            },
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartRequest {
    #[serde(default)]
    project: Option<String>,
    #[serde(default)]
    requirement_id: Option<String>,
    #[serde(default)]
    formula: Option<String>,
    #[serde(default)]
    events: Vec<TraceEvent>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepRequest {
    event: TraceEvent,
}

#[derive(Debug, Serialize)]
pub struct StateView {
    verdict: Verdict,
    r#final: bool,
    ended: bool,
    events: u64,
}

/// `verdicts` holds one entry per event the session has consumed.
#[derive(Debug, Serialize)]
pub struct SessionView {
    session: String,
    formula: String,
    verdicts: Vec<Verdict>,
    state: StateView,
}

fn new_token() -> String {
    format!("{:032x}", rand::random::<u128>())
}

fn monitored_formula(st: &AppState, req: &StartRequest) -> Result<TemporalFormula, ApiError> {
    match (&req.requirement_id, &req.formula) {
        (Some(id), None) => {
            let p = req
                .project
                .as_deref()
                .ok_or_else(|| ApiError::BadRequest("`requirement_id` needs `project`".into()))?;
            let set = st.set(p).ok_or_else(|| ApiError::NotFound(format!("unknown set `{p}`")))?;
            let r = set
                .get(id)
                .ok_or_else(|| ApiError::NotFound(format!("unknown requirement `{id}`")))?;
            to_past_ltl(r, &set.modes).map_err(|e| ApiError::Unprocessable(e.to_string()))
        }
        (None, Some(text)) => {
            TemporalFormula::parse(text).map_err(|e| ApiError::Parse(vec![Diagnostic::of(&e, text)]))
        }
        _ => Err(ApiError::BadRequest(
            "give exactly one of `requirement_id` and `formula`".into(),
        )),
    }
}

pub async fn start(
    State(st): State<AppState>,
    Body(req): Body<StartRequest>,
) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let formula = monitored_formula(&st, &req)?;
    let monitor = IncrementalMonitor::new(&formula)?;
    let mut session = Session {
        state: monitor.initial_state(),
        monitor,
        verdicts: Vec::new(),
        last_tick: None,
        last_used: Instant::now(),
    };
    for e in &req.events {
        session.apply(e)?;
    }
    let id = new_token();
    let view = session.view(&id);
    let mut sessions = st.0.sessions.lock().expect("session table poisoned");
    let idle = st.0.config.session_idle;
    sessions.retain(|_, s| match s.try_lock() {
        Ok(s) => s.last_used.elapsed() <= idle * 2,
        Err(_) => true,
    });
    sessions.insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(view)))
}

pub async fn step(
    State(st): State<AppState>,
    Path(id): Path<String>,
    Body(req): Body<StepRequest>,
) -> Result<Json<SessionView>, ApiError> {
    let session = st
        .0
        .sessions
        .lock()
        .expect("session table poisoned")
        .get(&id)
        .cloned()
        .ok_or_else(|| ApiError::NotFound(format!("unknown session `{id}`")))?;
    let mut s = match session.try_lock() {
        Ok(s) => s,
        Err(TryLockError::WouldBlock) => {
            return Err(ApiError::Conflict("another step on this session is in progress".into()))
        }
        Err(TryLockError::Poisoned(_)) => return Err(ApiError::Internal("session poisoned".into())),
    };
    if s.last_used.elapsed() > st.0.config.session_idle {
        return Err(ApiError::Gone("session expired".into()));
    }
    s.last_used = Instant::now();
    s.apply(&req.event)?;
    Ok(Json(s.view(&id)))
}
