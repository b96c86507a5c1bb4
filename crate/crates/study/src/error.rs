use crate::state::Stage;

pub type Result<T> = std::result::Result<T, StudyError>;

#[derive(Debug, thiserror::Error)]
pub enum StudyError {
    #[error("user is already enrolled")]
    DuplicateEnrollment,
    #[error("mobile devices cannot take part in this study")]
    MobileClient,
    #[error("unknown user")]
    UnknownUser,
    #[error("session {session} is not open yet")]
    SessionNotOpen { session: u8, opens_at: Option<i64> },
    #[error("expected step {expected}, but the user is at {actual}")]
    WrongStep { expected: &'static str, actual: Stage },
    #[error("request names session {requested} but the user is in session {current}")]
    WrongSession { requested: u8, current: u8 },
    #[error("password resets are not allowed in session 3")]
    ResetNotAllowed,
    #[error("{0} was already submitted")]
    AlreadySubmitted(&'static str),
    #[error("invalid input: {0}")]
    Invalid(#[from] passpoints_core::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("missing or wrong admin token")]
    Unauthorized,
    #[error("event log line {line}: {reason}")]
    Log { line: usize, reason: String },
    #[error("event {seq} cannot be applied: {reason}")]
    Replay { seq: u64, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl StudyError {
    /// Stable machine-readable code used in HTTP error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            Self::DuplicateEnrollment => "duplicate_enrollment",
            Self::MobileClient => "mobile_client",
            Self::UnknownUser => "unknown_user",
            Self::SessionNotOpen { .. } => "session_not_open",
            Self::WrongStep { .. } => "wrong_step",
            Self::WrongSession { .. } => "wrong_session",
            Self::ResetNotAllowed => "reset_not_allowed",
            Self::AlreadySubmitted(_) => "already_submitted",
            Self::Invalid(_) => "invalid_input",
            Self::Schema(_) => "schema_violation",
            Self::Config(_) => "invalid_config",
            Self::Unauthorized => "unauthorized",
            Self::Log { .. } | Self::Replay { .. } | Self::Io(_) => "internal",
        }
    }
}
