use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Direction of the alternative hypothesis, stated for the first sample
/// (or the top-left cell of a 2x2 table).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alternative {
    TwoSided,
    Less,
    Greater,
}

impl Alternative {
    pub fn flipped(self) -> Self {
        match self {
            Alternative::TwoSided => Alternative::TwoSided,
            Alternative::Less => Alternative::Greater,
            Alternative::Greater => Alternative::Less,
        }
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alternative::TwoSided => "two-sided",
            Alternative::Less => "less",
            Alternative::Greater => "greater",
        })
    }
}

impl FromStr for Alternative {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "two-sided" | "two_sided" | "both" => Ok(Alternative::TwoSided),
            "less" => Ok(Alternative::Less),
            "greater" => Ok(Alternative::Greater),
            other => Err(format!("unknown alternative {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    MannWhitneyExact,
    MannWhitneyNormal,
    FisherExact,
    StudentTPooled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EffectSize {
    RankBiserial,
    OddsRatio,
    CohensD,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: Method,
    pub alternative: Alternative,
    pub statistic: f64,
    pub p_value: f64,
    /// Infinite or NaN odds ratios serialize as `null`.
    pub effect_size: f64,
    pub effect_size_kind: EffectSize,
    pub n1: usize,
    pub n2: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub df: Option<f64>,
}
