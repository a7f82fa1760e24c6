use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        FieldError {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Error responses. Bodies are JSON objects with an `error` message plus
/// `fields` (400) or `missing` (404).
#[derive(Debug, Clone, PartialEq)]
pub enum ApiError {
    Invalid(Vec<FieldError>),
    NotFound { kind: &'static str, keys: Vec<String> },
}

impl ApiError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ApiError::Invalid(vec![FieldError::new(field, message)])
    }

    pub fn not_found(kind: &'static str, key: impl Into<String>) -> Self {
        ApiError::NotFound {
            kind,
            keys: vec![key.into()],
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::Invalid(_) => StatusCode::BAD_REQUEST,
            ApiError::NotFound { .. } => StatusCode::NOT_FOUND,
        }
    }
}

#[derive(Serialize)]
struct Body<'a> {
    error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    fields: Option<&'a [FieldError]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    missing: Option<&'a [String]>,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = match &self {
            ApiError::Invalid(fields) => Body {
                error: "invalid request".into(),
                fields: Some(fields),
                missing: None,
            },
            ApiError::NotFound { kind, keys } => Body {
                error: format!("unknown {kind}"),
                fields: None,
                missing: Some(keys),
            },
        };
        (self.status(), Json(body)).into_response()
    }
}
