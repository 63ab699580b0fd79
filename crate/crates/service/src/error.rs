use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

#[derive(Debug)]
pub enum ApiError {
    NotFound(String),
    Unprocessable(Vec<String>),
    Conflict { expected: u64, current: u64 },
    Internal(String),
}

#[derive(Serialize)]
struct Body {
    error: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    version: Option<u64>,
}

impl ApiError {
    pub fn unprocessable(msg: impl Into<String>) -> Self {
        Self::Unprocessable(vec![msg.into()])
    }

    pub(crate) fn from_engine(e: venue_core::Error) -> Self {
        match e {
            venue_core::Error::Invalid(v) => Self::Unprocessable(v),
            venue_core::Error::InvalidThresholds(m) => Self::unprocessable(m),
            venue_core::Error::UnknownParticipant(p) => Self::NotFound(format!("unknown participant {p}")),
            other => Self::Internal(other.to_string()),
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            Self::NotFound(_) => StatusCode::NOT_FOUND,
            Self::Unprocessable(_) => StatusCode::UNPROCESSABLE_ENTITY,
            Self::Conflict { .. } => StatusCode::CONFLICT,
            Self::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = self.status();
        let body = match self {
            Self::NotFound(m) | Self::Internal(m) => Body {
                error: m,
                violations: Vec::new(),
                version: None,
            },
            Self::Unprocessable(v) => Body {
                error: "validation failed".to_owned(),
                violations: v,
                version: None,
            },
            Self::Conflict { expected, current } => Body {
                error: format!("stale write: expected version {expected}, current is {current}"),
                violations: Vec::new(),
                version: Some(current),
            },
        };
        (status, Json(body)).into_response()
    }
}
