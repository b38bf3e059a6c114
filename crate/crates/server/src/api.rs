//! HTTP routes. Every handler takes the study lock, so state changes for
//! one pair are serialized and log appends are acknowledged in order.

use std::sync::{Arc, Mutex, MutexGuard};

use axum::extract::{FromRequest, FromRequestParts, Path, Request, State};
use axum::http::request::Parts;
use axum::routing::{get, post};
use axum::{Json, Router};
use connections_core::analysis::SurveyResponse;
use serde::{Deserialize, Serialize};

use crate::study::{BoardView, GuessReply, Health, IssuedPair, Study, SurveyAck};
use crate::ServerError;

pub const TOKEN_HEADER: &str = "x-session-token";

pub type SharedStudy = Arc<Mutex<Study>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuessRequest {
    pub slot: u8,
    pub words: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuffleRequest {
    pub slot: u8,
}

/// The `x-session-token` header.
pub struct Token(pub String);

impl<S: Send + Sync> FromRequestParts<S> for Token {
    type Rejection = ServerError;

    async fn from_request_parts(parts: &mut Parts, _: &S) -> Result<Self, Self::Rejection> {
        parts
            .headers
            .get(TOKEN_HEADER)
            .and_then(|v| v.to_str().ok())
            .map(|v| Token(v.trim().to_owned()))
            .ok_or(ServerError::UnknownToken)
    }
}

/// JSON body whose rejections use the API error format.
pub struct Body<T>(pub T);

impl<S: Send + Sync, T: serde::de::DeserializeOwned> FromRequest<S> for Body<T> {
    type Rejection = ServerError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        Json::<T>::from_request(req, state)
            .await
            .map(|Json(v)| Body(v))
            .map_err(|e| ServerError::BadRequest(e.body_text()))
    }
}

/// Slot path segment with the API error format.
pub struct Slot(pub u8);

impl<S: Send + Sync> FromRequestParts<S> for Slot {
    type Rejection = ServerError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, Self::Rejection> {
        Path::<u8>::from_request_parts(parts, state)
            .await
            .map(|Path(n)| Slot(n))
            .map_err(|e| ServerError::BadRequest(e.body_text()))
    }
}

fn lock(study: &SharedStudy) -> Result<MutexGuard<'_, Study>, ServerError> {
    study.lock().map_err(|_| ServerError::Internal("study lock poisoned".into()))
}

async fn health(State(s): State<SharedStudy>) -> Result<Json<Health>, ServerError> {
    Ok(Json(lock(&s)?.health()))
}

async fn pair(State(s): State<SharedStudy>) -> Result<Json<IssuedPair>, ServerError> {
    Ok(Json(lock(&s)?.issue_pair()?))
}

async fn board(State(s): State<SharedStudy>, Token(t): Token, Slot(slot): Slot) -> Result<Json<BoardView>, ServerError> {
    Ok(Json(lock(&s)?.board(&t, slot)?))
}

async fn guess(
    State(s): State<SharedStudy>,
    Token(t): Token,
    Body(req): Body<GuessRequest>,
) -> Result<Json<GuessReply>, ServerError> {
    Ok(Json(lock(&s)?.guess(&t, req.slot, &req.words)?))
}

async fn shuffle(
    State(s): State<SharedStudy>,
    Token(t): Token,
    Body(req): Body<ShuffleRequest>,
) -> Result<Json<BoardView>, ServerError> {
    Ok(Json(lock(&s)?.shuffle(&t, req.slot)?))
}

async fn survey(
    State(s): State<SharedStudy>,
    Token(t): Token,
    Body(req): Body<serde_json::Value>,
) -> Result<Json<SurveyAck>, ServerError> {
    let req: SurveyResponse = serde_json::from_value(req).map_err(|e| ServerError::InvalidSurvey(e.to_string()))?;
    Ok(Json(lock(&s)?.submit_survey(&t, req)?))
}

pub fn router(study: SharedStudy) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/pair", post(pair))
        .route("/api/board/{slot}", get(board))
        .route("/api/guess", post(guess))
        .route("/api/shuffle", post(shuffle))
        .route("/api/survey", post(survey))
        .with_state(study)
}
