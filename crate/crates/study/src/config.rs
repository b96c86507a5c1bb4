use std::path::{Path, PathBuf};

use passpoints_core::{ImageSize, ToleranceConfig};
use serde::{Deserialize, Serialize};

use crate::error::{Result, StudyError};
use crate::state::SessionRules;

pub const HOUR_MS: i64 = 3_600_000;

/// Every tunable of a study. Missing fields take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    pub image_size: ImageSize,
    pub tolerance: ToleranceConfig,
    pub reveal_duration_secs: f64,
    /// Session 2 opens this long after session 1 is completed.
    pub session2_gap_hours: u32,
    /// A first session-2 attempt later than this after session 1 is flagged late.
    pub session2_late_after_hours: u32,
    /// Session 3 opens this long after session 2 is completed.
    pub session3_gap_hours: u32,
    /// Minimum wait before session 2 after a session-2 reset.
    pub reset_delay_hours: u32,
    /// Background images; each participant gets one at enrollment.
    pub images: Vec<String>,
    pub practice_image: String,
    pub seed: u64,
    /// Bearer token for `/export`; export over HTTP is disabled when unset.
    pub admin_token: Option<String>,
    pub export_salt: String,
    /// Write a state snapshot every this many events (0 disables).
    pub snapshot_every: u64,
    pub fsync: bool,
    pub asset_dir: Option<PathBuf>,
    pub instructions: String,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            image_size: ImageSize::STUDY,
            tolerance: ToleranceConfig::default(),
            reveal_duration_secs: 20.0,
            session2_gap_hours: 24,
            session2_late_after_hours: 48,
            session3_gap_hours: 5 * 24,
            reset_delay_hours: 24,
            images: vec!["grid".into()],
            practice_image: "practice".into(),
            seed: 0,
            admin_token: None,
            export_salt: String::new(),
            snapshot_every: 1000,
            fsync: true,
            asset_dir: None,
            instructions: "Click five points on the image. Remember them and their order.".into(),
        }
    }
}

impl StudyConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| StudyError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(StudyError::Config(m.into()));
        if self.images.is_empty() {
            return bad("at least one image is required");
        }
        if self.images.iter().chain([&self.practice_image]).any(|s| s.is_empty()) {
            return bad("image ids must be non-empty");
        }
        if !(self.reveal_duration_secs.is_finite() && self.reveal_duration_secs > 0.0) {
            return bad("reveal_duration_secs must be positive");
        }
        if self.image_size.width == 0 || self.image_size.height == 0 {
            return bad("image_size must be non-empty");
        }
        if self.session2_late_after_hours < self.session2_gap_hours {
            return bad("session2_late_after_hours must be at least session2_gap_hours");
        }
        Ok(())
    }

    pub fn rules(&self) -> SessionRules {
        SessionRules {
            session2_gap_ms: i64::from(self.session2_gap_hours) * HOUR_MS,
            session3_gap_ms: i64::from(self.session3_gap_hours) * HOUR_MS,
            reset_delay_ms: i64::from(self.reset_delay_hours) * HOUR_MS,
        }
    }
}
