use axum::Json;
use serde::Deserialize;

use reqforge_core::semantics::{ModeModel, TickConfig};
use reqforge_core::{parse_requirement, SourceText};

use crate::error::{ApiError, Body, Diagnostic};
use crate::wire::{formalize, Formalization};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParseRequest {
    text: String,
    #[serde(default)]
    mode_var: Option<String>,
    #[serde(default)]
    tick_ms: Option<u64>,
}

pub async fn parse(Body(req): Body<ParseRequest>) -> Result<Json<Formalization>, ApiError> {
    let ticks = match req.tick_ms {
        Some(ms) => TickConfig::new(ms).map_err(|e| ApiError::BadRequest(e.to_string()))?,
        None => TickConfig::default(),
    };
    let mm = req.mode_var.map(ModeModel::new).unwrap_or_default();
    let (r, spans) = parse_requirement(&SourceText::new(req.text.as_str()))
        .map_err(|e| ApiError::Parse(vec![Diagnostic::of(&e, &req.text)]))?;
    let mut out = formalize(&r, &mm, &ticks);
    out.spans = Some(spans);
    Ok(Json(out))
}
