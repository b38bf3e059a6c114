use std::path::Path;

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ServerError {
    #[error("unknown session token")]
    UnknownToken,
    #[error("slot must be 1 or 2, got {0}")]
    BadSlot(u8),
    #[error("this puzzle is already finished")]
    SessionClosed,
    #[error("both puzzles must be finished before the survey")]
    PairIncomplete,
    #[error("a survey was already submitted for this pair")]
    DuplicateSurvey,
    #[error("invalid survey: {0}")]
    InvalidSurvey(String),
    #[error("no {0} puzzles loaded")]
    EmptyPool(&'static str),
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("puzzle set: {0}")]
    Puzzles(String),
    #[error("corrupt data: {0}")]
    Corrupt(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("internal: {0}")]
    Internal(String),
}

impl ServerError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        ServerError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Stable machine-readable name sent to clients.
    pub fn code(&self) -> &'static str {
        match self {
            ServerError::UnknownToken => "unknown_token",
            ServerError::BadSlot(_) => "bad_slot",
            ServerError::SessionClosed => "session_closed",
            ServerError::PairIncomplete => "pair_incomplete",
            ServerError::DuplicateSurvey => "duplicate_survey",
            ServerError::InvalidSurvey(_) => "invalid_survey",
            ServerError::EmptyPool(_) => "empty_pool",
            ServerError::BadRequest(_) => "bad_request",
            ServerError::Puzzles(_) | ServerError::Corrupt(_) | ServerError::Io { .. } | ServerError::Internal(_) => {
                "internal"
            }
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ServerError::UnknownToken => StatusCode::UNAUTHORIZED,
            ServerError::BadSlot(_) | ServerError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServerError::SessionClosed | ServerError::PairIncomplete | ServerError::DuplicateSurvey => {
                StatusCode::CONFLICT
            }
            ServerError::InvalidSurvey(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServerError::EmptyPool(_) => StatusCode::SERVICE_UNAVAILABLE,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

/// Error body for every non-2xx response.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
}

impl IntoResponse for ServerError {
    fn into_response(self) -> Response {
        if self.status().is_server_error() {
            log::error!("{self}");
        }
        let body = ErrorBody {
            error: self.code().to_owned(),
            message: self.to_string(),
        };
        (self.status(), Json(body)).into_response()
    }
}
