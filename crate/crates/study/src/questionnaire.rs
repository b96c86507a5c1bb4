use passpoints_core::{ClickPoint, ImageSize};
use serde::{Deserialize, Serialize};

use crate::event::Group;

/// Password selection strategies offered in the session-1 drop-down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Colours,
    Shapes,
    GeometricPatterns,
    FirstAttentionObject,
    Other,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Demographics {
    pub sex: Option<String>,
    pub age: Option<String>,
    pub first_language: Option<String>,
    pub field: Option<String>,
    /// Self-rated 1..=5.
    pub computer_skill: Option<u8>,
    /// Self-rated 1..=5.
    pub security_skill: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Session1Answers {
    #[serde(default)]
    pub demographics: Demographics,
    pub seen_image_before: bool,
    pub touch_screen: bool,
    pub first_attention_point: Option<ClickPoint>,
    /// Primed groups only.
    pub watched_reveal: Option<bool>,
    /// Primed groups only.
    pub distracted: Option<bool>,
    pub strategy: Strategy,
    #[serde(default)]
    pub strategy_details: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExitAnswers {
    pub touch_screen_any_session: bool,
    pub recorded_password: bool,
    /// Primed groups only.
    pub noticed_priming_only_at_creation: Option<bool>,
    #[serde(default)]
    pub comments: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Questionnaire {
    Session1(Session1Answers),
    Exit(ExitAnswers),
}

impl Questionnaire {
    pub fn session(&self) -> u8 {
        match self {
            Questionnaire::Session1(_) => 1,
            Questionnaire::Exit(_) => 3,
        }
    }

    /// Checks what serde cannot: skill ranges, bounds, and the primed-only
    /// questions being answered by (and only by) primed participants.
    pub fn validate(&self, group: Group, size: ImageSize) -> Result<(), String> {
        let primed_only = |present: bool, what: &str| match (group.is_primed(), present) {
            (true, false) => Err(format!("{what} is required for primed groups")),
            (false, true) => Err(format!("{what} applies to primed groups only")),
            _ => Ok(()),
        };
        match self {
            Questionnaire::Session1(a) => {
                for skill in [a.demographics.computer_skill, a.demographics.security_skill]
                    .into_iter()
                    .flatten()
                {
                    if !(1..=5).contains(&skill) {
                        return Err(format!("skill rating {skill} is outside 1..=5"));
                    }
                }
                if let Some(p) = a.first_attention_point {
                    size.check(p).map_err(|e| e.to_string())?;
                }
                primed_only(a.watched_reveal.is_some(), "watched_reveal")?;
                primed_only(a.distracted.is_some(), "distracted")
            }
            Questionnaire::Exit(a) => primed_only(
                a.noticed_priming_only_at_creation.is_some(),
                "noticed_priming_only_at_creation",
            ),
        }
    }
}
