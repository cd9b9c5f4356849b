use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};
use serde_json::json;

use reqforge_core::store::{export_set, import_set, metrics as set_metrics, metrics_json, RequirementSet, SetFormat};
use reqforge_core::{Requirement, SourceText};

use crate::error::{ApiError, Body, Diagnostic};
use crate::wire::RequirementDoc;
use crate::AppState;

#[derive(Serialize)]
pub struct SetSummary {
    project: String,
    requirements: usize,
}

impl SetSummary {
    fn of(set: &RequirementSet) -> Self {
        SetSummary {
            project: set.project.clone(),
            requirements: set.len(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequirementInput {
    #[serde(default)]
    id: Option<String>,
    #[serde(default)]
    parent_id: Option<String>,
    text: String,
    #[serde(default)]
    rationale: Option<String>,
}

#[derive(Deserialize)]
pub struct ListQuery {
    subtree: Option<String>,
}

fn json_bytes(body: impl Into<axum::body::Body>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], body.into()).into_response()
}

impl AppState {
    fn snapshot(&self, p: &str) -> Result<Arc<RequirementSet>, ApiError> {
        self.set(p).ok_or_else(|| ApiError::NotFound(format!("unknown set `{p}`")))
    }

    /// Replaces set `p` by `f` of its current value. Writers are serialized by
    /// the table lock; readers keep whatever snapshot they already hold.
    fn update<F>(&self, p: &str, f: F) -> Result<Arc<RequirementSet>, ApiError>
    where
        F: FnOnce(&RequirementSet) -> Result<RequirementSet, ApiError>,
    {
        let mut sets = self.0.sets.write().expect("set table poisoned");
        let cur = sets.get(p).ok_or_else(|| ApiError::NotFound(format!("unknown set `{p}`")))?;
        let next = Arc::new(f(cur)?);
        sets.insert(p.to_string(), next.clone());
        Ok(next)
    }
}

pub async fn list(State(st): State<AppState>) -> Json<serde_json::Value> {
    let sets = st.0.sets.read().expect("set table poisoned");
    let list: Vec<SetSummary> = sets.values().map(|s| SetSummary::of(s)).collect();
    Json(json!({ "sets": list }))
}

/// Body is a set file: canonical JSON, or CSV when sent as `text/csv`.
pub async fn create(State(st): State<AppState>, headers: HeaderMap, body: Bytes) -> Result<Response, ApiError> {
    let csv = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("text/csv"));
    let set = import_set(&body, if csv { SetFormat::Csv } else { SetFormat::Json })?;
    check_project_name(&set.project)?;
    let mut sets = st.0.sets.write().expect("set table poisoned");
    if sets.contains_key(&set.project) {
        return Err(ApiError::Conflict(format!("set `{}` already exists", set.project)));
    }
    let summary = SetSummary::of(&set);
    sets.insert(set.project.clone(), Arc::new(set));
    Ok((StatusCode::CREATED, Json(summary)).into_response())
}

pub async fn get_set(State(st): State<AppState>, Path(p): Path<String>) -> Result<Response, ApiError> {
    Ok(json_bytes(export_set(&*st.snapshot(&p)?, SetFormat::Json)))
}

pub async fn delete_set(State(st): State<AppState>, Path(p): Path<String>) -> Result<StatusCode, ApiError> {
    let mut sets = st.0.sets.write().expect("set table poisoned");
    match sets.remove(&p) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError::NotFound(format!("unknown set `{p}`"))),
    }
}

/// All requirements in id order, or with `?subtree=id` the descendants of
/// that requirement in preorder.
pub async fn list_requirements(
    State(st): State<AppState>,
    Path(p): Path<String>,
    Query(q): Query<ListQuery>,
) -> Result<Json<serde_json::Value>, ApiError> {
    let set = st.snapshot(&p)?;
    let docs: Vec<RequirementDoc> = match &q.subtree {
        Some(id) => set.descendants(id)?.into_iter().map(RequirementDoc::of).collect(),
        None => set.iter().map(RequirementDoc::of).collect(),
    };
    Ok(Json(json!({ "requirements": docs })))
}

fn build(id: String, input: RequirementInput, project: &str) -> Result<Requirement, ApiError> {
    let mut r = Requirement::parse(id, &input.text)
        .map_err(|e| ApiError::Parse(vec![Diagnostic::of(&e, &input.text)]))?;
    r.parent_id = input.parent_id;
    r.rationale = input.rationale;
    r.project = project.to_string();
    r.source = Some(SourceText::new(input.text));
    Ok(r)
}

pub async fn create_requirement(
    State(st): State<AppState>,
    Path(p): Path<String>,
    Body(input): Body<RequirementInput>,
) -> Result<Response, ApiError> {
    let id = input
        .id
        .clone()
        .ok_or_else(|| ApiError::BadRequest("missing field `id`".into()))?;
    let set = st.update(&p, |set| {
        if set.contains(&id) {
            return Err(ApiError::Conflict(format!("requirement `{id}` already exists")));
        }
        Ok(set.upsert(build(id.clone(), input, &set.project)?)?)
    })?;
    let doc = RequirementDoc::of(set.get(&id).expect("just inserted"));
    Ok((StatusCode::CREATED, Json(doc)).into_response())
}

pub async fn get_requirement(
    State(st): State<AppState>,
    Path((p, id)): Path<(String, String)>,
) -> Result<Json<RequirementDoc>, ApiError> {
    let set = st.snapshot(&p)?;
    let r = set.get(&id).ok_or_else(|| reqforge_core::store::StoreError::UnknownId(id.clone()))?;
    Ok(Json(RequirementDoc::of(r)))
}

/// Creates or replaces; the body's `id`, when given, must match the path.
pub async fn put_requirement(
    State(st): State<AppState>,
    Path((p, id)): Path<(String, String)>,
    Body(input): Body<RequirementInput>,
) -> Result<Json<RequirementDoc>, ApiError> {
    if input.id.as_ref().is_some_and(|b| *b != id) {
        return Err(ApiError::BadRequest(format!("body id does not match `{id}`")));
    }
    let set = st.update(&p, |set| Ok(set.upsert(build(id.clone(), input, &set.project)?)?))?;
    Ok(Json(RequirementDoc::of(set.get(&id).expect("just inserted"))))
}

pub async fn delete_requirement(
    State(st): State<AppState>,
    Path((p, id)): Path<(String, String)>,
) -> Result<StatusCode, ApiError> {
    st.update(&p, |set| Ok(set.remove(&id)?))?;
    Ok(StatusCode::NO_CONTENT)
}

/// Exactly the bytes `reqforge metrics --format json` prints.
pub async fn metrics(State(st): State<AppState>, Path(p): Path<String>) -> Result<Response, ApiError> {
    Ok(json_bytes(metrics_json(&set_metrics(&*st.snapshot(&p)?))))
}

/// Writes the canonical JSON file `<save_dir>/<project>.json`.
pub async fn save(State(st): State<AppState>, Path(p): Path<String>) -> Result<Json<serde_json::Value>, ApiError> {
    check_project_name(&p)?;
    let set = st.snapshot(&p)?;
    let path = st.0.config.save_dir.join(format!("{p}.json"));
    std::fs::write(&path, export_set(&set, SetFormat::Json))
        .map_err(|e| ApiError::Internal(format!("cannot write {}: {e}", path.display())))?;
    Ok(Json(json!({ "path": path.display().to_string(), "requirements": set.len() })))
}

/// Project names double as file names.
fn check_project_name(p: &str) -> Result<(), ApiError> {
    let ok = !p.is_empty()
        && !p.starts_with('.')
        && p.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'));
    if ok {
        Ok(())
    } else {
        Err(ApiError::BadRequest(format!(
            "project name `{p}` must be non-empty ASCII letters, digits, `.`, `_` or `-`"
        )))
    }
}
