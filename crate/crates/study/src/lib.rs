//! Study service for PassPoints-style passwords with directional priming.
//!
//! Participants are assigned to a control group or one of two curtain-reveal
//! groups, create a five-point password in session 1 and log in again in
//! sessions 2 and 3. All state is a fold over an append-only event log.

mod clock;
mod config;
mod error;
mod event;
pub mod export;
pub mod http;
mod log;
mod questionnaire;
mod service;
mod state;

pub use clock::{Clock, SystemClock, VirtualClock};
pub use config::{StudyConfig, HOUR_MS};
pub use error::{Result, StudyError};
pub use event::{EventPayload, Group, RevealDirection, StudyEvent};
pub use export::{export_records, hash_user_id, write_export, ExportFilter, ExportRecord};
pub use log::{read_events, EventLog, Snapshot};
pub use questionnaire::{Demographics, ExitAnswers, Questionnaire, Session1Answers, Strategy};
pub use service::{
    Assignment, CreateOutcome, LoginOutcome, ResetOutcome, RevealSpec, SessionView, Study,
    SusOutcome,
};
pub use state::{Participant, SessionRecord, SessionRules, Stage, StudyState};
