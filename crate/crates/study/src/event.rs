use passpoints_core::ClickPoint;
use passpoints_stats::SusResponse;
use serde::{Deserialize, Serialize};

use crate::questionnaire::Questionnaire;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    #[serde(rename = "control")]
    Control,
    #[serde(rename = "LTR")]
    Ltr,
    #[serde(rename = "RTL")]
    Rtl,
}

impl Group {
    pub const ALL: [Group; 3] = [Group::Control, Group::Ltr, Group::Rtl];

    /// Same text as the serialized form, which is also the corpus group label.
    pub fn label(self) -> &'static str {
        match self {
            Group::Control => "control",
            Group::Ltr => "LTR",
            Group::Rtl => "RTL",
        }
    }

    pub fn is_primed(self) -> bool {
        self != Group::Control
    }

    pub fn reveal(self) -> RevealDirection {
        match self {
            Group::Control => RevealDirection::None,
            Group::Ltr => RevealDirection::Ltr,
            Group::Rtl => RevealDirection::Rtl,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RevealDirection {
    #[serde(rename = "LTR")]
    Ltr,
    #[serde(rename = "RTL")]
    Rtl,
    #[serde(rename = "none")]
    None,
}

/// One line of the event log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyEvent {
    pub seq: u64,
    /// Milliseconds since the Unix epoch.
    pub timestamp: i64,
    pub user_id: String,
    #[serde(flatten)]
    pub payload: EventPayload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventPayload {
    Enrolled { group: Group, image_id: String },
    PracticeDone,
    /// The client showed the background image; login and creation times start here.
    ImageDisplayed,
    PasswordCreated { points: Vec<ClickPoint> },
    LoginAttempt { session: u8, success: bool },
    PasswordReset { session: u8 },
    Questionnaire { answers: Questionnaire },
    SusSubmitted { answers: SusResponse },
}
