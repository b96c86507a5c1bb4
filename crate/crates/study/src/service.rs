use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};

use passpoints_core::{verify_points, ClickPoint, GraphicalPassword};
use passpoints_stats::SusResponse;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clock::Clock;
use crate::config::StudyConfig;
use crate::error::{Result, StudyError};
use crate::event::{EventPayload, Group, RevealDirection, StudyEvent};
use crate::log::{EventLog, Snapshot};
use crate::questionnaire::Questionnaire;
use crate::state::{Participant, Stage, StudyState};

const MAX_USER_ID_LEN: usize = 128;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevealSpec {
    pub direction: RevealDirection,
    pub duration_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub number: u8,
    pub step: Stage,
    pub opens_at: Option<i64>,
    pub open: bool,
}

/// What a participant's client needs to run the current step. Never contains
/// the password.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub user_id: String,
    pub group: Group,
    pub image_id: String,
    pub practice_image_id: String,
    pub reveal: RevealSpec,
    pub session: SessionView,
    pub exit_survey_available: bool,
    pub instructions: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreateOutcome {
    pub next_step: Stage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoginOutcome {
    pub success: bool,
    pub session: u8,
    pub session_completed: bool,
    pub unsuccessful_attempts: u32,
    pub next_step: Stage,
    pub next_session_opens_at: Option<i64>,
    pub exit_survey_available: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResetOutcome {
    pub resets: u32,
    pub next_step: Stage,
    /// Session 2 will not open before this time.
    pub session2_not_before: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SusOutcome {
    pub score: f64,
    pub next_step: Stage,
}

struct Writer {
    log: Option<EventLog>,
    since_snapshot: u64,
}

/// A running study. Reads take a shared lock on the folded state; every
/// mutation goes through one writer lock, which orders events totally.
pub struct Study {
    config: StudyConfig,
    clock: Arc<dyn Clock>,
    writer: Mutex<Writer>,
    state: RwLock<StudyState>,
}

impl std::fmt::Debug for Study {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Study").field("config", &self.config).finish_non_exhaustive()
    }
}

impl Study {
    /// A study whose events live only in memory.
    pub fn in_memory(config: StudyConfig, clock: Arc<dyn Clock>) -> Result<Self> {
        config.validate()?;
        let state = StudyState::new(config.rules());
        Ok(Self::assemble(config, clock, None, state))
    }

    /// Opens a study backed by the log at `path`, restoring state from the
    /// snapshot (if it matches the log and rules) plus the events after it.
    pub fn open(config: StudyConfig, clock: Arc<dyn Clock>, path: &Path) -> Result<Self> {
        config.validate()?;
        let (log, events) = EventLog::open(path, config.fsync)?;
        let rules = config.rules();
        let snapshot = Snapshot::read(&log.snapshot_path())
            .map(|s| s.state)
            .filter(|s| {
                s.rules == rules
                    && events
                        .iter()
                        .find(|e| e.seq == s.last_seq)
                        .is_some_and(|e| e.timestamp == s.last_timestamp)
            });
        let mut state = snapshot.unwrap_or_else(|| StudyState::new(rules));
        for ev in &events {
            state
                .apply(ev)
                .map_err(|(seq, reason)| StudyError::Replay { seq, reason })?;
        }
        Ok(Self::assemble(config, clock, Some(log), state))
    }

    fn assemble(config: StudyConfig, clock: Arc<dyn Clock>, log: Option<EventLog>, state: StudyState) -> Self {
        Self {
            config,
            clock,
            writer: Mutex::new(Writer {
                log,
                since_snapshot: 0,
            }),
            state: RwLock::new(state),
        }
    }

    pub fn config(&self) -> &StudyConfig {
        &self.config
    }

    pub fn now(&self) -> i64 {
        self.clock.now_ms()
    }

    /// Copy of the current folded state.
    pub fn state(&self) -> StudyState {
        self.state.read().expect("state lock poisoned").clone()
    }

    pub fn with_state<T>(&self, f: impl FnOnce(&StudyState) -> T) -> T {
        f(&self.state.read().expect("state lock poisoned"))
    }

    /// Decides an event against the current state, appends it, then folds it in.
    fn commit<T>(
        &self,
        user_id: &str,
        decide: impl FnOnce(&StudyState, i64) -> Result<EventPayload>,
        reply: impl FnOnce(&StudyState, &StudyEvent) -> T,
    ) -> Result<T> {
        let mut writer = self.writer.lock().expect("writer lock poisoned");
        let (event, snapshot_due) = {
            let state = self.state.read().expect("state lock poisoned");
            let now = self.clock.now_ms().max(state.last_timestamp);
            let payload = decide(&state, now)?;
            let event = StudyEvent {
                seq: state.last_seq + 1,
                timestamp: now,
                user_id: user_id.to_string(),
                payload,
            };
            let due = self.config.snapshot_every > 0
                && writer.since_snapshot + 1 >= self.config.snapshot_every;
            (event, due)
        };
        if let Some(log) = writer.log.as_mut() {
            log.append(&event)?;
        }
        let mut state = self.state.write().expect("state lock poisoned");
        state
            .apply(&event)
            .map_err(|(seq, reason)| StudyError::Replay { seq, reason })?;
        writer.since_snapshot += 1;
        if snapshot_due {
            if let Some(log) = writer.log.as_ref() {
                Snapshot {
                    state: state.clone(),
                }
                .write(&log.snapshot_path())?;
                writer.since_snapshot = 0;
            }
        }
        Ok(reply(&state, &event))
    }

    fn participant<'a>(state: &'a StudyState, user_id: &str) -> Result<&'a Participant> {
        state.participants.get(user_id).ok_or(StudyError::UnknownUser)
    }

    fn check_session(p: &Participant, requested: Option<u8>) -> Result<()> {
        match requested {
            Some(s) if s != p.session() => Err(StudyError::WrongSession {
                requested: s,
                current: p.session(),
            }),
            _ => Ok(()),
        }
    }

    fn check_open(p: &Participant, now: i64) -> Result<()> {
        let session = p.session();
        if session == 1 {
            return Ok(());
        }
        let opens_at = p.sessions[usize::from(session - 1)].opens_at;
        match opens_at {
            Some(t) if now >= t => Ok(()),
            _ => Err(StudyError::SessionNotOpen { session, opens_at }),
        }
    }

    /// Group (and image) for the `index`-th enrollment: a pure function of the
    /// seed, so a restarted service keeps assigning the same sequence.
    fn assign(&self, index: u64) -> (Group, String) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(index);
        let group = Group::ALL[rng.random_range(0..Group::ALL.len())];
        let image = self.config.images[rng.random_range(0..self.config.images.len())].clone();
        (group, image)
    }

    pub fn enroll(&self, user_id: &str, mobile: bool) -> Result<Assignment> {
        if mobile {
            return Err(StudyError::MobileClient);
        }
        if user_id.trim().is_empty() || user_id.len() > MAX_USER_ID_LEN {
            return Err(StudyError::Schema(format!(
                "user_id must be 1..={MAX_USER_ID_LEN} bytes and not blank"
            )));
        }
        self.commit(
            user_id,
            |state, _| {
                if state.participants.contains_key(user_id) {
                    return Err(StudyError::DuplicateEnrollment);
                }
                let (group, image_id) = self.assign(state.enrollments);
                Ok(EventPayload::Enrolled { group, image_id })
            },
            |state, _| self.view(&state.participants[user_id]),
        )
    }

    fn view(&self, p: &Participant) -> Assignment {
        let number = p.session();
        let opens_at = if number == 1 {
            Some(p.enrolled_at)
        } else {
            p.sessions[usize::from(number - 1)].opens_at
        };
        let now = self.clock.now_ms();
        Assignment {
            user_id: p.user_id.clone(),
            group: p.group,
            image_id: p.image_id.clone(),
            practice_image_id: self.config.practice_image.clone(),
            reveal: RevealSpec {
                direction: p.group.reveal(),
                duration_secs: self.config.reveal_duration_secs,
            },
            session: SessionView {
                number,
                step: p.stage,
                opens_at,
                open: p.stage != Stage::Finished && Self::check_open(p, now).is_ok(),
            },
            exit_survey_available: p.exit_survey_available(),
            instructions: self.config.instructions.clone(),
        }
    }

    pub fn assignment(&self, user_id: &str) -> Result<Assignment> {
        self.with_state(|s| Self::participant(s, user_id).map(|p| self.view(p)))
    }

    pub fn practice_complete(&self, user_id: &str) -> Result<Assignment> {
        self.commit(
            user_id,
            |state, _| {
                let p = Self::participant(state, user_id)?;
                if p.stage != Stage::Practice {
                    return Err(StudyError::WrongStep {
                        expected: "practice",
                        actual: p.stage,
                    });
                }
                Ok(EventPayload::PracticeDone)
            },
            |state, _| self.view(&state.participants[user_id]),
        )
    }

    /// Marks the moment the background image appeared on the client.
    pub fn image_displayed(&self, user_id: &str) -> Result<i64> {
        self.commit(
            user_id,
            |state, now| {
                let p = Self::participant(state, user_id)?;
                if p.stage == Stage::Finished {
                    return Err(StudyError::WrongStep {
                        expected: "an unfinished session",
                        actual: p.stage,
                    });
                }
                Self::check_open(p, now)?;
                Ok(EventPayload::ImageDisplayed)
            },
            |state, _| state.last_timestamp,
        )
    }

    pub fn create_password(&self, user_id: &str, points: &[ClickPoint]) -> Result<CreateOutcome> {
        self.commit(
            user_id,
            |state, _| {
                let p = Self::participant(state, user_id)?;
                if p.stage != Stage::Create {
                    return Err(StudyError::WrongStep {
                        expected: "create",
                        actual: p.stage,
                    });
                }
                let pw = GraphicalPassword::new(p.image_id.clone(), points)?;
                pw.check_bounds(self.config.image_size)?;
                Ok(EventPayload::PasswordCreated {
                    points: points.to_vec(),
                })
            },
            |state, _| CreateOutcome {
                next_step: state.participants[user_id].stage,
            },
        )
    }

    pub fn login(&self, user_id: &str, points: &[ClickPoint], session: Option<u8>) -> Result<LoginOutcome> {
        self.commit(
            user_id,
            |state, now| {
                let p = Self::participant(state, user_id)?;
                Self::check_session(p, session)?;
                let allowed = match p.stage {
                    Stage::ConfirmLogin | Stage::Session2 => true,
                    Stage::Session3 => p.sessions[2].successful_logins == 0 && p.exit_answers.is_none(),
                    _ => false,
                };
                if !allowed {
                    return Err(StudyError::WrongStep {
                        expected: "login",
                        actual: p.stage,
                    });
                }
                Self::check_open(p, now)?;
                let stored = p.password.as_deref().expect("login stages follow creation");
                let success = verify_points(stored, points, self.config.tolerance, self.config.image_size)?;
                Ok(EventPayload::LoginAttempt {
                    session: p.session(),
                    success,
                })
            },
            |state, event| {
                let p = &state.participants[user_id];
                let EventPayload::LoginAttempt { session: s, success } = event.payload else {
                    unreachable!("login commits a login attempt")
                };
                let rec = &p.sessions[usize::from(s - 1)];
                LoginOutcome {
                    success,
                    session: s,
                    session_completed: rec.completed_at.is_some() || (s == 3 && success),
                    unsuccessful_attempts: rec.unsuccessful_attempts,
                    next_step: p.stage,
                    next_session_opens_at: match s {
                        1 | 2 => p.sessions[usize::from(s)].opens_at,
                        _ => None,
                    },
                    exit_survey_available: p.exit_survey_available(),
                }
            },
        )
    }

    pub fn reset(&self, user_id: &str, session: Option<u8>) -> Result<ResetOutcome> {
        self.commit(
            user_id,
            |state, now| {
                let p = Self::participant(state, user_id)?;
                Self::check_session(p, session)?;
                match p.stage {
                    Stage::Session3 | Stage::Finished => return Err(StudyError::ResetNotAllowed),
                    Stage::Questionnaire | Stage::ConfirmLogin => {}
                    Stage::Session2 => Self::check_open(p, now)?,
                    Stage::Practice | Stage::Create => {
                        return Err(StudyError::WrongStep {
                            expected: "a created password",
                            actual: p.stage,
                        })
                    }
                }
                Ok(EventPayload::PasswordReset {
                    session: p.session(),
                })
            },
            |state, _| {
                let p = &state.participants[user_id];
                ResetOutcome {
                    resets: p.resets,
                    next_step: p.stage,
                    session2_not_before: p.session2_not_before,
                }
            },
        )
    }

    pub fn submit_questionnaire(&self, user_id: &str, answers: Questionnaire) -> Result<Assignment> {
        self.commit(
            user_id,
            |state, now| {
                let p = Self::participant(state, user_id)?;
                match &answers {
                    Questionnaire::Session1(_) => {
                        if p.session1_answers.is_some() {
                            return Err(StudyError::AlreadySubmitted("session 1 questionnaire"));
                        }
                        if p.stage != Stage::Questionnaire {
                            return Err(StudyError::WrongStep {
                                expected: "questionnaire",
                                actual: p.stage,
                            });
                        }
                    }
                    Questionnaire::Exit(_) => {
                        if p.exit_answers.is_some() {
                            return Err(StudyError::AlreadySubmitted("exit survey"));
                        }
                        Self::check_exit(p, now)?;
                    }
                }
                answers
                    .validate(p.group, self.config.image_size)
                    .map_err(StudyError::Schema)?;
                Ok(EventPayload::Questionnaire {
                    answers: answers.clone(),
                })
            },
            |state, _| self.view(&state.participants[user_id]),
        )
    }

    fn check_exit(p: &Participant, now: i64) -> Result<()> {
        if !p.exit_survey_available() {
            return Err(StudyError::WrongStep {
                expected: "exit survey after a session-3 login attempt",
                actual: p.stage,
            });
        }
        Self::check_open(p, now)
    }

    pub fn submit_sus(&self, user_id: &str, answers: &[u8]) -> Result<SusOutcome> {
        let response = SusResponse::new(answers).map_err(|e| StudyError::Schema(e.to_string()))?;
        self.commit(
            user_id,
            |state, now| {
                let p = Self::participant(state, user_id)?;
                if p.sus.is_some() {
                    return Err(StudyError::AlreadySubmitted("SUS questionnaire"));
                }
                Self::check_exit(p, now)?;
                Ok(EventPayload::SusSubmitted { answers: response })
            },
            |state, _| SusOutcome {
                score: response.score(),
                next_step: state.participants[user_id].stage,
            },
        )
    }
}
