//! JSON-over-HTTP front end.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use passpoints_core::ClickPoint;
use serde::{Deserialize, Serialize};

use crate::error::StudyError;
use crate::export::{export_records, write_export, ExportFilter};
use crate::questionnaire::Questionnaire;
use crate::service::Study;

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    opens_at: Option<i64>,
}

pub struct ApiError(StudyError);

impl From<StudyError> for ApiError {
    fn from(e: StudyError) -> Self {
        Self(e)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        Self(StudyError::Schema(e.body_text()))
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        Self(StudyError::Schema(e.body_text()))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match &self.0 {
            StudyError::UnknownUser => StatusCode::NOT_FOUND,
            StudyError::MobileClient => StatusCode::FORBIDDEN,
            StudyError::Unauthorized => StatusCode::UNAUTHORIZED,
            StudyError::DuplicateEnrollment
            | StudyError::SessionNotOpen { .. }
            | StudyError::WrongStep { .. }
            | StudyError::WrongSession { .. }
            | StudyError::ResetNotAllowed
            | StudyError::AlreadySubmitted(_) => StatusCode::CONFLICT,
            StudyError::Invalid(_) | StudyError::Schema(_) => StatusCode::UNPROCESSABLE_ENTITY,
            StudyError::Config(_) | StudyError::Log { .. } | StudyError::Replay { .. } | StudyError::Io(_) => {
                StatusCode::INTERNAL_SERVER_ERROR
            }
        };
        let opens_at = match &self.0 {
            StudyError::SessionNotOpen { opens_at, .. } => *opens_at,
            _ => None,
        };
        let body = ErrorBody {
            error: self.0.code(),
            message: self.0.to_string(),
            opens_at,
        };
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;
type Body<T> = Result<Json<T>, JsonRejection>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnrollRequest {
    user_id: String,
    #[serde(default)]
    mobile: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct UserRequest {
    user_id: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsRequest {
    user_id: String,
    points: Vec<ClickPoint>,
    #[serde(default)]
    session: Option<u8>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResetRequest {
    user_id: String,
    #[serde(default)]
    session: Option<u8>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuestionnaireRequest {
    user_id: String,
    answers: Questionnaire,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SusRequest {
    user_id: String,
    answers: Vec<u8>,
}

#[derive(Debug, Deserialize)]
struct ExportQuery {
    #[serde(default = "default_filter")]
    filter: String,
}

fn default_filter() -> String {
    "qualified".into()
}

#[derive(Debug, Serialize)]
struct Displayed {
    displayed_at: i64,
}

/// Client hint header (`Sec-CH-UA-Mobile: ?1`) or the self-reported flag.
fn is_mobile(headers: &HeaderMap, reported: bool) -> bool {
    reported
        || headers
            .get("sec-ch-ua-mobile")
            .and_then(|v| v.to_str().ok())
            .is_some_and(|v| v.trim() == "?1")
}

async fn enroll(State(study): State<Arc<Study>>, headers: HeaderMap, body: Body<EnrollRequest>) -> Response {
    let result = (|| -> Result<_, ApiError> {
        let Json(req) = body?;
        Ok(study.enroll(&req.user_id, is_mobile(&headers, req.mobile))?)
    })();
    match result {
        Ok(a) => (StatusCode::CREATED, Json(a)).into_response(),
        Err(e) => e.into_response(),
    }
}

async fn assignment(State(study): State<Arc<Study>>, query: Result<Query<UserRequest>, QueryRejection>) -> ApiResult<crate::Assignment> {
    let Query(q) = query?;
    Ok(Json(study.assignment(&q.user_id)?))
}

async fn practice_complete(State(study): State<Arc<Study>>, body: Body<UserRequest>) -> ApiResult<crate::Assignment> {
    let Json(req) = body?;
    Ok(Json(study.practice_complete(&req.user_id)?))
}

async fn image_displayed(State(study): State<Arc<Study>>, body: Body<UserRequest>) -> ApiResult<Displayed> {
    let Json(req) = body?;
    Ok(Json(Displayed {
        displayed_at: study.image_displayed(&req.user_id)?,
    }))
}

async fn password(State(study): State<Arc<Study>>, body: Body<PointsRequest>) -> ApiResult<crate::CreateOutcome> {
    let Json(req) = body?;
    if let Some(s) = req.session.filter(|&s| s != 1) {
        return Err(StudyError::WrongSession {
            requested: s,
            current: 1,
        }
        .into());
    }
    Ok(Json(study.create_password(&req.user_id, &req.points)?))
}

async fn login(State(study): State<Arc<Study>>, body: Body<PointsRequest>) -> ApiResult<crate::LoginOutcome> {
    let Json(req) = body?;
    Ok(Json(study.login(&req.user_id, &req.points, req.session)?))
}

async fn reset(State(study): State<Arc<Study>>, body: Body<ResetRequest>) -> ApiResult<crate::ResetOutcome> {
    let Json(req) = body?;
    Ok(Json(study.reset(&req.user_id, req.session)?))
}

async fn questionnaire(State(study): State<Arc<Study>>, body: Body<QuestionnaireRequest>) -> ApiResult<crate::Assignment> {
    let Json(req) = body?;
    Ok(Json(study.submit_questionnaire(&req.user_id, req.answers)?))
}

async fn sus(State(study): State<Arc<Study>>, body: Body<SusRequest>) -> ApiResult<crate::SusOutcome> {
    let Json(req) = body?;
    Ok(Json(study.submit_sus(&req.user_id, &req.answers)?))
}

/// Admin only: the corpus contains passwords, so it requires the configured
/// bearer token and is never reachable with participant credentials.
async fn export(
    State(study): State<Arc<Study>>,
    headers: HeaderMap,
    query: Result<Query<ExportQuery>, QueryRejection>,
) -> Result<Response, ApiError> {
    let expected = study.config().admin_token.as_deref().ok_or(StudyError::Unauthorized)?;
    let given = headers
        .get(header::AUTHORIZATION)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.strip_prefix("Bearer "));
    if given != Some(expected) {
        return Err(StudyError::Unauthorized.into());
    }
    let Query(q) = query?;
    let filter: ExportFilter = q.filter.parse().map_err(StudyError::Schema)?;
    let records = study.with_state(|s| export_records(s, study.config(), filter));
    let mut body = Vec::new();
    write_export(&mut body, &records).map_err(StudyError::Io)?;
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], body).into_response())
}

async fn image_asset(State(study): State<Arc<Study>>, Path(name): Path<String>) -> Response {
    let Some(dir) = study.config().asset_dir.as_ref() else {
        return StatusCode::NOT_FOUND.into_response();
    };
    let safe = !name.is_empty()
        && !name.starts_with('.')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || "._-".contains(c));
    if !safe {
        return StatusCode::NOT_FOUND.into_response();
    }
    let mime = match name.rsplit('.').next().map(str::to_ascii_lowercase).as_deref() {
        Some("png") => "image/png",
        Some("jpg" | "jpeg") => "image/jpeg",
        Some("gif") => "image/gif",
        Some("webp") => "image/webp",
        _ => "application/octet-stream",
    };
    match std::fs::read(dir.join(&name)) {
        Ok(bytes) => ([(header::CONTENT_TYPE, mime)], bytes).into_response(),
        Err(_) => StatusCode::NOT_FOUND.into_response(),
    }
}

pub fn router(study: Arc<Study>) -> Router {
    Router::new()
        .route("/enroll", post(enroll))
        .route("/assignment", get(assignment))
        .route("/practice-complete", post(practice_complete))
        .route("/image-displayed", post(image_displayed))
        .route("/password", post(password))
        .route("/login", post(login))
        .route("/reset", post(reset))
        .route("/questionnaire", post(questionnaire))
        .route("/sus", post(sus))
        .route("/export", get(export))
        .route("/images/{name}", get(image_asset))
        .with_state(study)
}

pub async fn serve(study: Arc<Study>, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(study)).await
}
