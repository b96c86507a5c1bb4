use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// LOD base distance used when none is given: three tile widths at `T = 10`.
pub const DEFAULT_LOD_BASE: u32 = 63;

/// Relaxation values reported in the crack-rate tables.
pub const STANDARD_TAUS: [u32; 3] = [0, 21, 42];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum AttackFamily {
    Line,
    Diag,
    Lod,
}

impl AttackFamily {
    pub const ALL: [AttackFamily; 3] = [AttackFamily::Line, AttackFamily::Diag, AttackFamily::Lod];

    pub fn name(self) -> &'static str {
        match self {
            AttackFamily::Line => "LINE",
            AttackFamily::Diag => "DIAG",
            AttackFamily::Lod => "LOD",
        }
    }
}

impl fmt::Display for AttackFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttackFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "LINE" => Ok(AttackFamily::Line),
            "DIAG" => Ok(AttackFamily::Diag),
            "LOD" => Ok(AttackFamily::Lod),
            other => Err(Error::InvalidSpec(format!("unknown attack family {other:?}"))),
        }
    }
}

/// Step distance used by LOD.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LodMetric {
    #[default]
    Chebyshev,
    Euclidean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AttackSpec {
    pub family: AttackFamily,
    pub tau: u32,
    /// Only consulted by LOD.
    pub lod_base: u32,
    #[serde(default)]
    pub lod_metric: LodMetric,
}

impl AttackSpec {
    pub fn new(family: AttackFamily, tau: u32) -> Self {
        Self {
            family,
            tau,
            lod_base: DEFAULT_LOD_BASE,
            lod_metric: LodMetric::Chebyshev,
        }
    }

    pub fn line(tau: u32) -> Self {
        Self::new(AttackFamily::Line, tau)
    }

    pub fn diag(tau: u32) -> Self {
        Self::new(AttackFamily::Diag, tau)
    }

    pub fn lod(tau: u32, lod_base: u32) -> Self {
        Self {
            lod_base,
            ..Self::new(AttackFamily::Lod, tau)
        }
    }

    pub fn with_metric(mut self, metric: LodMetric) -> Self {
        self.lod_metric = metric;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.lod_base == 0 {
            return Err(Error::InvalidSpec("lod_base must be at least 1".into()));
        }
        Ok(())
    }

    /// Every family at every standard relaxation, LINE first.
    pub fn standard_grid(lod_base: u32) -> Vec<AttackSpec> {
        AttackFamily::ALL
            .iter()
            .flat_map(|&family| {
                STANDARD_TAUS.iter().map(move |&tau| AttackSpec {
                    lod_base,
                    ..AttackSpec::new(family, tau)
                })
            })
            .collect()
    }

    /// Short column label such as `DIAG42`.
    pub fn label(&self) -> String {
        format!("{}{}", self.family, self.tau)
    }
}

impl fmt::Display for AttackSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            AttackFamily::Lod => write!(
                f,
                "LOD({}; base={}px {:?})",
                self.tau, self.lod_base, self.lod_metric
            ),
            family => write!(f, "{family}({})", self.tau),
        }
    }
}

/// Parses labels of the form `LINE0`, `diag21` or `LOD(42)`.
impl FromStr for AttackSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let split = s
            .find(|c: char| !c.is_ascii_alphabetic())
            .ok_or_else(|| Error::InvalidSpec(format!("missing tau in {s:?}")))?;
        let family: AttackFamily = s[..split].parse()?;
        let tau = s[split..]
            .trim_matches(|c| c == '(' || c == ')')
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("bad tau in {s:?}")))?;
        Ok(AttackSpec::new(family, tau))
    }
}
