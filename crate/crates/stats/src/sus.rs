use serde::{Deserialize, Serialize};

use crate::error::{Result, StatsError};

pub const SUS_ITEMS: usize = 10;

/// One completed System Usability Scale questionnaire: ten Likert answers,
/// 1 (strongly disagree) to 5 (strongly agree), in question order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct SusResponse {
    answers: [u8; SUS_ITEMS],
}

impl SusResponse {
    pub fn new(answers: &[u8]) -> Result<Self> {
        let answers: [u8; SUS_ITEMS] = answers
            .try_into()
            .map_err(|_| StatsError::SusLength(answers.len()))?;
        if let Some((index, &value)) = answers
            .iter()
            .enumerate()
            .find(|(_, a)| !(1..=5).contains(*a))
        {
            return Err(StatsError::SusAnswer { index, value });
        }
        Ok(Self { answers })
    }

    pub fn answers(&self) -> &[u8; SUS_ITEMS] {
        &self.answers
    }

    /// Score on 0..=100 in steps of 2.5. Odd-numbered questions contribute
    /// `answer - 1`, even-numbered ones `5 - answer`.
    pub fn score(&self) -> f64 {
        let raw: u32 = self
            .answers
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let a = u32::from(a);
                if i % 2 == 0 {
                    a - 1
                } else {
                    5 - a
                }
            })
            .sum();
        f64::from(raw) * 2.5
    }
}

impl TryFrom<Vec<u8>> for SusResponse {
    type Error = StatsError;

    fn try_from(v: Vec<u8>) -> Result<Self> {
        Self::new(&v)
    }
}

impl From<SusResponse> for Vec<u8> {
    fn from(r: SusResponse) -> Self {
        r.answers.to_vec()
    }
}
