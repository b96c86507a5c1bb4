use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Result, StudyError};
use crate::event::StudyEvent;
use crate::state::StudyState;

/// Parses a JSONL event log. A final line without its newline is a torn
/// write and is dropped; any other bad line is an error.
pub fn read_events(path: &Path) -> Result<Vec<StudyEvent>> {
    Ok(read_with_len(path)?.0)
}

fn read_with_len(path: &Path) -> Result<(Vec<StudyEvent>, u64)> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((Vec::new(), 0)),
        Err(e) => return Err(e.into()),
    };
    let mut reader = BufReader::new(file);
    let mut events = Vec::new();
    let mut good_len = 0u64;
    let mut buf = String::new();
    for line in 1.. {
        buf.clear();
        let n = reader.read_line(&mut buf)?;
        if n == 0 {
            break;
        }
        let complete = buf.ends_with('\n');
        if buf.trim().is_empty() {
            good_len += n as u64;
            continue;
        }
        match serde_json::from_str::<StudyEvent>(buf.trim_end()) {
            Ok(ev) if complete => {
                events.push(ev);
                good_len += n as u64;
            }
            Ok(_) => break,
            Err(_) if !complete => break,
            Err(e) => {
                return Err(StudyError::Log {
                    line,
                    reason: e.to_string(),
                })
            }
        }
    }
    Ok((events, good_len))
}

/// Append-only JSONL log of study events.
#[derive(Debug)]
pub struct EventLog {
    path: PathBuf,
    file: File,
    fsync: bool,
}

impl EventLog {
    /// Opens (creating if needed) the log and returns the events already in it.
    /// A torn final line is truncated away.
    pub fn open(path: &Path, fsync: bool) -> Result<(Self, Vec<StudyEvent>)> {
        let (events, good_len) = read_with_len(path)?;
        let file = OpenOptions::new()
            .create(true)
            .read(true)
            .append(true)
            .open(path)?;
        if file.metadata()?.len() > good_len {
            file.set_len(good_len)?;
        }
        let log = Self {
            path: path.to_path_buf(),
            file,
            fsync,
        };
        Ok((log, events))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, event: &StudyEvent) -> Result<()> {
        let mut line = serde_json::to_vec(event).map_err(std::io::Error::other)?;
        line.push(b'\n');
        self.file.write_all(&line)?;
        self.file.flush()?;
        if self.fsync {
            self.file.sync_data()?;
        }
        Ok(())
    }

    pub fn snapshot_path(&self) -> PathBuf {
        snapshot_path(&self.path)
    }
}

/// `events.jsonl` keeps its snapshot in `events.jsonl.snapshot`.
pub fn snapshot_path(log: &Path) -> PathBuf {
    let mut name = log.as_os_str().to_owned();
    name.push(".snapshot");
    PathBuf::from(name)
}

/// State as of event `state.last_seq`, so replay can start after it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub state: StudyState,
}

impl Snapshot {
    /// Written to a temporary file and renamed, so readers never see half a snapshot.
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        let bytes = serde_json::to_vec(self).map_err(std::io::Error::other)?;
        std::fs::write(&tmp, bytes)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    /// `None` when missing or unreadable; the log is the source of truth.
    pub fn read(path: &Path) -> Option<Self> {
        let bytes = std::fs::read(path).ok()?;
        serde_json::from_slice(&bytes).ok()
    }
}
