//! JSONL password corpora: one `{"group", "image_id", "points"}` object per line.
//!
//! Unknown fields are ignored, so richer export records can be read as-is.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::point::{ClickPoint, GraphicalPassword};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub group: String,
    pub image_id: String,
    pub points: Vec<ClickPoint>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CorpusRecord {
    pub fn password(&self) -> Result<GraphicalPassword, Error> {
        GraphicalPassword::new(self.image_id.clone(), &self.points)
    }
}

/// Reads records, skipping blank lines. Line numbers in errors are 1-based.
pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Vec<CorpusRecord>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|source| CorpusError::Json {
            line: i + 1,
            source,
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn write_jsonl<W: Write>(mut out: W, records: &[CorpusRecord]) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Converts records into `(group, password)` pairs, keeping only `image_id`
/// when given.
pub fn labeled_passwords(
    records: &[CorpusRecord],
    image_id: Option<&str>,
) -> Result<Vec<(String, GraphicalPassword)>, CorpusError> {
    records
        .iter()
        .enumerate()
        .filter(|(_, r)| image_id.is_none_or(|id| r.image_id == id))
        .map(|(i, r)| {
            r.password()
                .map(|pw| (r.group.clone(), pw))
                .map_err(|source| CorpusError::Invalid { line: i + 1, source })
        })
        .collect()
}
