use std::collections::BTreeMap;
use std::fmt;

use passpoints_core::ClickPoint;
use passpoints_stats::SusResponse;
use serde::{Deserialize, Serialize};

use crate::event::{EventPayload, Group, StudyEvent};
use crate::questionnaire::{ExitAnswers, Questionnaire, Session1Answers};

/// Gaps between sessions, in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionRules {
    pub session2_gap_ms: i64,
    pub session3_gap_ms: i64,
    pub reset_delay_ms: i64,
}

/// Where a participant is in the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Practice,
    Create,
    /// Session-1 questionnaire, between creation and the confirmation login.
    Questionnaire,
    ConfirmLogin,
    Session2,
    /// Login, then the exit survey (questionnaire and SUS).
    Session3,
    Finished,
}

impl Stage {
    pub fn session(self) -> u8 {
        match self {
            Stage::Practice | Stage::Create | Stage::Questionnaire | Stage::ConfirmLogin => 1,
            Stage::Session2 => 2,
            Stage::Session3 | Stage::Finished => 3,
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Practice => "practice",
            Stage::Create => "create",
            Stage::Questionnaire => "questionnaire",
            Stage::ConfirmLogin => "confirm_login",
            Stage::Session2 => "session2",
            Stage::Session3 => "session3",
            Stage::Finished => "finished",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub opens_at: Option<i64>,
    pub completed_at: Option<i64>,
    pub first_attempt_at: Option<i64>,
    pub successful_logins: u32,
    pub unsuccessful_attempts: u32,
    /// Successful login time minus the preceding image display.
    pub login_time_ms: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Participant {
    pub user_id: String,
    pub group: Group,
    pub image_id: String,
    pub enrolled_at: i64,
    pub stage: Stage,
    /// Latest created password; kept through a reset until replaced.
    pub password: Option<Vec<ClickPoint>>,
    pub password_created_at: Option<i64>,
    pub creation_duration_ms: Option<i64>,
    pub sessions: [SessionRecord; 3],
    pub resets: u32,
    pub reset_sessions: Vec<u8>,
    /// Earliest session-2 opening imposed by a session-2 reset.
    pub session2_not_before: Option<i64>,
    pub session1_answers: Option<Session1Answers>,
    pub exit_answers: Option<ExitAnswers>,
    pub sus: Option<SusResponse>,
    pub last_display: Option<i64>,
}

impl Participant {
    pub fn session(&self) -> u8 {
        self.stage.session()
    }

    /// Control participants always qualify; primed ones only if they watched
    /// the whole reveal without being distracted.
    pub fn qualified(&self) -> bool {
        if !self.group.is_primed() {
            return true;
        }
        self.session1_answers
            .as_ref()
            .is_some_and(|a| a.watched_reveal == Some(true) && a.distracted == Some(false))
    }

    /// First session-2 attempt came more than `late_after_ms` after session 1.
    pub fn session2_late(&self, late_after_ms: i64) -> bool {
        match (self.sessions[0].completed_at, self.sessions[1].first_attempt_at) {
            (Some(done), Some(first)) => first - done > late_after_ms,
            _ => false,
        }
    }

    pub fn sus_score(&self) -> Option<f64> {
        self.sus.map(|s| s.score())
    }

    /// Session-3 exit survey can be taken once there was at least one attempt.
    pub fn exit_survey_available(&self) -> bool {
        self.stage == Stage::Session3
            && self.sessions[2].successful_logins + self.sessions[2].unsuccessful_attempts > 0
    }

    fn maybe_finish(&mut self, at: i64) {
        if self.stage == Stage::Session3 && self.exit_answers.is_some() && self.sus.is_some() {
            self.stage = Stage::Finished;
            self.sessions[2].completed_at = Some(at);
        }
    }
}

/// Everything the service knows, rebuilt by folding the event log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyState {
    pub rules: SessionRules,
    pub participants: BTreeMap<String, Participant>,
    pub last_seq: u64,
    pub last_timestamp: i64,
    pub enrollments: u64,
}

impl StudyState {
    pub fn new(rules: SessionRules) -> Self {
        Self {
            rules,
            participants: BTreeMap::new(),
            last_seq: 0,
            last_timestamp: i64::MIN,
            enrollments: 0,
        }
    }

    pub fn replay<'a>(
        rules: SessionRules,
        events: impl IntoIterator<Item = &'a StudyEvent>,
    ) -> Result<Self, (u64, String)> {
        let mut state = Self::new(rules);
        for ev in events {
            state.apply(ev)?;
        }
        Ok(state)
    }

    /// Folds one event in. Events at or below `last_seq` were already applied
    /// and are skipped, so re-applying a log prefix changes nothing. Returns
    /// whether the event was new.
    pub fn apply(&mut self, ev: &StudyEvent) -> Result<bool, (u64, String)> {
        if ev.seq <= self.last_seq {
            return Ok(false);
        }
        let fail = |reason: String| Err((ev.seq, reason));
        if ev.seq != self.last_seq + 1 {
            return fail(format!("expected sequence number {}", self.last_seq + 1));
        }
        if ev.timestamp < self.last_timestamp {
            return fail("timestamp goes backwards".into());
        }
        let rules = self.rules;
        let ts = ev.timestamp;

        if let EventPayload::Enrolled { group, image_id } = &ev.payload {
            if self.participants.contains_key(&ev.user_id) {
                return fail("user enrolled twice".into());
            }
            self.participants.insert(
                ev.user_id.clone(),
                Participant {
                    user_id: ev.user_id.clone(),
                    group: *group,
                    image_id: image_id.clone(),
                    enrolled_at: ts,
                    stage: Stage::Practice,
                    password: None,
                    password_created_at: None,
                    creation_duration_ms: None,
                    sessions: Default::default(),
                    resets: 0,
                    reset_sessions: Vec::new(),
                    session2_not_before: None,
                    session1_answers: None,
                    exit_answers: None,
                    sus: None,
                    last_display: None,
                },
            );
            self.enrollments += 1;
        } else {
            let Some(p) = self.participants.get_mut(&ev.user_id) else {
                return fail("event for a user who never enrolled".into());
            };
            let stage = p.stage;
            let mismatch = || Err((ev.seq, format!("{:?} not allowed at stage {stage}", ev.payload)));
            match &ev.payload {
                EventPayload::Enrolled { .. } => unreachable!(),
                EventPayload::PracticeDone => {
                    if stage != Stage::Practice {
                        return mismatch();
                    }
                    p.stage = Stage::Create;
                }
                EventPayload::ImageDisplayed => p.last_display = Some(ts),
                EventPayload::PasswordCreated { points } => {
                    if stage != Stage::Create {
                        return mismatch();
                    }
                    p.password = Some(points.clone());
                    p.password_created_at = Some(ts);
                    p.creation_duration_ms = p.last_display.take().map(|d| ts - d);
                    p.stage = if p.session1_answers.is_some() {
                        Stage::ConfirmLogin
                    } else {
                        Stage::Questionnaire
                    };
                }
                EventPayload::Questionnaire { answers } => match (answers, stage) {
                    (Questionnaire::Session1(a), Stage::Questionnaire) => {
                        p.session1_answers = Some(a.clone());
                        p.stage = Stage::ConfirmLogin;
                    }
                    (Questionnaire::Exit(a), Stage::Session3) => {
                        p.exit_answers = Some(a.clone());
                        p.maybe_finish(ts);
                    }
                    _ => return mismatch(),
                },
                EventPayload::SusSubmitted { answers } => {
                    if stage != Stage::Session3 {
                        return mismatch();
                    }
                    p.sus = Some(*answers);
                    p.maybe_finish(ts);
                }
                EventPayload::LoginAttempt { session, success } => {
                    if !matches!(stage, Stage::ConfirmLogin | Stage::Session2 | Stage::Session3)
                        || *session != stage.session()
                    {
                        return mismatch();
                    }
                    let i = usize::from(*session - 1);
                    let rec = &mut p.sessions[i];
                    rec.first_attempt_at.get_or_insert(ts);
                    if !*success {
                        rec.unsuccessful_attempts += 1;
                    } else {
                        rec.successful_logins += 1;
                        rec.login_time_ms = p.last_display.map(|d| ts - d);
                        p.last_display = None;
                        match stage {
                            Stage::ConfirmLogin => {
                                rec.completed_at = Some(ts);
                                let opens = ts + rules.session2_gap_ms;
                                p.sessions[1].opens_at =
                                    Some(p.session2_not_before.map_or(opens, |nb| opens.max(nb)));
                                p.stage = Stage::Session2;
                            }
                            Stage::Session2 => {
                                rec.completed_at = Some(ts);
                                p.sessions[2].opens_at = Some(ts + rules.session3_gap_ms);
                                p.stage = Stage::Session3;
                            }
                            // session 3 ends with the exit survey
                            _ => {}
                        }
                    }
                }
                EventPayload::PasswordReset { session } => {
                    if *session != stage.session() {
                        return mismatch();
                    }
                    match stage {
                        Stage::Questionnaire | Stage::ConfirmLogin => {}
                        Stage::Session2 => {
                            p.sessions[0].completed_at = None;
                            p.sessions[0].login_time_ms = None;
                            p.sessions[1].opens_at = None;
                            p.session2_not_before = Some(ts + rules.reset_delay_ms);
                        }
                        _ => return mismatch(),
                    }
                    p.resets += 1;
                    p.reset_sessions.push(*session);
                    p.last_display = None;
                    p.stage = Stage::Create;
                }
            }
        }
        self.last_seq = ev.seq;
        self.last_timestamp = ts;
        Ok(true)
    }
}
