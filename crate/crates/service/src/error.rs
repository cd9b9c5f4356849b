use axum::extract::rejection::JsonRejection;
use axum::extract::{FromRequest, Request};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use serde_json::json;

use reqforge_core::monitor::MonitorError;
use reqforge_core::store::StoreError;
use reqforge_core::ParseError;

/// One located parse problem. Offsets are character offsets into the
/// submitted text; line and column are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub message: String,
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub col: usize,
}

impl Diagnostic {
    pub fn of(e: &ParseError, text: &str) -> Self {
        let (line, col) = e.line_col(text);
        Diagnostic {
            message: e.kind.to_string(),
            start: e.span.start,
            end: e.span.end,
            line,
            col,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Gone(String),
    #[error("text does not parse")]
    Parse(Vec<Diagnostic>),
    #[error("{0}")]
    Unprocessable(String),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Monitor(#[from] MonitorError),
    #[error("{0}")]
    Internal(String),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::Conflict(_) => StatusCode::CONFLICT,
            ApiError::Gone(_) => StatusCode::GONE,
            ApiError::Parse(_) | ApiError::Unprocessable(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Store(e) => match e {
                StoreError::UnknownId(_) => StatusCode::NOT_FOUND,
                StoreError::UnknownParent { .. } | StoreError::CycleDetected(_) | StoreError::HasChildren { .. } => {
                    StatusCode::CONFLICT
                }
                StoreError::Schema { .. } => StatusCode::BAD_REQUEST,
                StoreError::Invalid { .. } | StoreError::Parse { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            },
            ApiError::Monitor(e) => match e {
                MonitorError::EventAfterEnd => StatusCode::GONE,
                _ => StatusCode::UNPROCESSABLE_ENTITY,
            },
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            ApiError::BadRequest(_) => "bad_request",
            ApiError::NotFound(_) => "not_found",
            ApiError::Conflict(_) => "conflict",
            ApiError::Gone(_) => "gone",
            ApiError::Parse(_) => "parse_error",
            ApiError::Unprocessable(_) => "unprocessable",
            ApiError::Store(e) => match e {
                StoreError::UnknownId(_) => "unknown_id",
                StoreError::UnknownParent { .. } => "unknown_parent",
                StoreError::CycleDetected(_) => "cycle_detected",
                StoreError::HasChildren { .. } => "has_children",
                StoreError::Invalid { .. } => "invalid_requirement",
                StoreError::Schema { .. } => "schema_error",
                StoreError::Parse { .. } => "parse_error",
            },
            ApiError::Monitor(e) => match e {
                MonitorError::MissingVariable(_) => "missing_variable",
                MonitorError::EventAfterEnd => "session_closed",
                _ => "monitor_error",
            },
            ApiError::Internal(_) => "internal",
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({"error": self.code(), "message": self.to_string()});
        if let ApiError::Parse(diags) = &self {
            body["errors"] = serde_json::to_value(diags).expect("diagnostics serialize");
        }
        (self.status(), Json(body)).into_response()
    }
}

/// JSON body extractor whose rejections are all 400 with the API's error
/// body, so that 422 stays reserved for content the service understood but
/// refused.
pub struct Body<T>(pub T);

impl<S, T> FromRequest<S> for Body<T>
where
    Json<T>: FromRequest<S, Rejection = JsonRejection>,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(Body(v)),
            Err(e) => Err(ApiError::BadRequest(e.body_text())),
        }
    }
}
