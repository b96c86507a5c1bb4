//! Corpus export: one JSONL record per participant with a password, readable
//! directly as a `passpoints_core::corpus::CorpusRecord`.

use std::io::Write;
use std::str::FromStr;

use passpoints_core::ClickPoint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{StudyConfig, HOUR_MS};
use crate::event::Group;
use crate::questionnaire::Strategy;
use crate::state::StudyState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportFilter {
    Qualified,
    All,
}

impl FromStr for ExportFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "qualified" => Ok(Self::Qualified),
            "all" => Ok(Self::All),
            other => Err(format!("unknown filter {other:?} (expected qualified or all)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportRecord {
    /// Salted SHA-256 of the user id, hex encoded.
    pub user: String,
    pub group: Group,
    pub image_id: String,
    /// Latest password.
    pub points: Vec<ClickPoint>,
    pub qualified: bool,
    pub sessions_completed: [bool; 3],
    pub login_time_ms: [Option<i64>; 3],
    pub unsuccessful_attempts: [u32; 3],
    pub resets: u32,
    pub creation_duration_ms: Option<i64>,
    pub strategy: Option<Strategy>,
    pub sus: Option<f64>,
    /// First session-2 attempt came after the late threshold.
    pub session2_late: bool,
}

pub fn hash_user_id(salt: &str, user_id: &str) -> String {
    let mut h = Sha256::new();
    h.update(salt.as_bytes());
    h.update([0u8]);
    h.update(user_id.as_bytes());
    hex::encode(h.finalize())
}

/// Records sorted by hashed id, so output order does not leak enrollment order.
pub fn export_records(state: &StudyState, config: &StudyConfig, filter: ExportFilter) -> Vec<ExportRecord> {
    let late_after = i64::from(config.session2_late_after_hours) * HOUR_MS;
    let mut out: Vec<ExportRecord> = state
        .participants
        .values()
        .filter(|p| filter == ExportFilter::All || p.qualified())
        .filter_map(|p| {
            let points = p.password.clone()?;
            Some(ExportRecord {
                user: hash_user_id(&config.export_salt, &p.user_id),
                group: p.group,
                image_id: p.image_id.clone(),
                points,
                qualified: p.qualified(),
                sessions_completed: p.sessions.each_ref().map(|s| s.completed_at.is_some()),
                login_time_ms: p.sessions.each_ref().map(|s| s.login_time_ms),
                unsuccessful_attempts: p.sessions.each_ref().map(|s| s.unsuccessful_attempts),
                resets: p.resets,
                creation_duration_ms: p.creation_duration_ms,
                strategy: p.session1_answers.as_ref().map(|a| a.strategy),
                sus: p.sus_score(),
                session2_late: p.session2_late(late_after),
            })
        })
        .collect();
    out.sort_by(|a, b| a.user.cmp(&b.user));
    out
}

pub fn write_export<W: Write>(mut out: W, records: &[ExportRecord]) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}
