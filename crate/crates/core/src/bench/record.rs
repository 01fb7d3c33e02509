//! Episode records and the append-only JSONL results log.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, DurationRound, SecondsFormat, TimeDelta, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::validate::{Outcome, TraceResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RecordOutcome {
    Success,
    Failure,
    NoPlan,
}

impl RecordOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            RecordOutcome::Success => "success",
            RecordOutcome::Failure => "failure",
            RecordOutcome::NoPlan => "noPlan",
        }
    }
}

impl From<&Outcome> for RecordOutcome {
    fn from(o: &Outcome) -> Self {
        match o {
            Outcome::Success => RecordOutcome::Success,
            Outcome::Failure(_) => RecordOutcome::Failure,
            Outcome::NoPlan(_) => RecordOutcome::NoPlan,
        }
    }
}

fn rfc3339<S: serde::Serializer>(t: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_rfc3339_opts(SecondsFormat::Millis, true))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpisodeRecord {
    pub planner: String,
    pub domain: String,
    pub problem: String,
    pub outcome: RecordOutcome,
    pub failure_reason: Option<String>,
    pub plan_length: usize,
    pub executed_actions: usize,
    pub planning_time_s: f64,
    #[serde(serialize_with = "rfc3339")]
    pub timestamp: DateTime<Utc>,
    pub raw_digest: String,
    pub run_id: String,
}

/// Identity of an episode for resume and duplicate detection.
pub type EpisodeKey = (String, String, String, String);

impl EpisodeRecord {
    pub fn from_trace(planner: &str, domain: &str, problem: &str, trace: &TraceResult, planning_time_s: f64, raw_digest: String, run_id: &str) -> Self {
        EpisodeRecord {
            planner: planner.into(),
            domain: domain.into(),
            problem: problem.into(),
            outcome: (&trace.outcome).into(),
            failure_reason: trace.outcome.reason().map(str::to_owned),
            plan_length: trace.plan_length,
            executed_actions: trace.executed_actions,
            planning_time_s: planning_time_s.max(0.0),
            // the log keeps milliseconds; match it so a reread record compares equal
            timestamp: Utc::now().duration_trunc(TimeDelta::milliseconds(1)).unwrap_or_else(|_| Utc::now()),
            raw_digest,
            run_id: run_id.into(),
        }
    }

    pub fn key(&self) -> EpisodeKey {
        (self.planner.clone(), self.domain.clone(), self.problem.clone(), self.run_id.clone())
    }

    /// Checks the per-record invariants carried over from the validator.
    pub fn check(&self) -> Result<(), String> {
        if self.executed_actions > self.plan_length {
            return Err("executed_actions exceeds plan_length".into());
        }
        if self.outcome == RecordOutcome::Success && self.executed_actions != self.plan_length {
            return Err("success with executed_actions != plan_length".into());
        }
        if self.outcome == RecordOutcome::NoPlan && self.plan_length != 0 {
            return Err("noPlan with non-zero plan_length".into());
        }
        if self.planning_time_s.is_nan() || self.planning_time_s < 0.0 {
            return Err("negative planning_time_s".into());
        }
        Ok(())
    }
}

pub fn digest(raw: &str) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(raw.as_bytes())))
}

/// Stores `raw` under `dir/<hex>.txt` unless already present; returns the digest.
pub fn store_raw(dir: &Path, raw: &str) -> io::Result<String> {
    let d = digest(raw);
    let path = dir.join(format!("{}.txt", &d["sha256:".len()..]));
    if !path.exists() {
        fs::create_dir_all(dir)?;
        let tmp = tempfile_name(&path);
        fs::write(&tmp, raw)?;
        fs::rename(&tmp, &path)?;
    }
    Ok(d)
}

fn tempfile_name(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap().to_os_string();
    name.push(format!(".{}.tmp", std::process::id()));
    path.with_file_name(name)
}

#[derive(Debug, Error)]
pub enum LogError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{line}: malformed record: {detail}")]
    Malformed { path: PathBuf, line: usize, detail: String },
}

fn parse_lines(path: &Path, text: &str) -> Result<Vec<EpisodeRecord>, LogError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: EpisodeRecord = serde_json::from_str(line)
            .map_err(|e| LogError::Malformed { path: path.to_path_buf(), line: i + 1, detail: e.to_string() })?;
        rec.check().map_err(|detail| LogError::Malformed { path: path.to_path_buf(), line: i + 1, detail })?;
        out.push(rec);
    }
    Ok(out)
}

/// Reads every complete line. A trailing fragment without a newline (a write
/// cut short by a crash) is ignored.
pub fn read_records(path: &Path) -> Result<Vec<EpisodeRecord>, LogError> {
    let text = fs::read_to_string(path).map_err(|source| LogError::Io { path: path.to_path_buf(), source })?;
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    parse_lines(path, complete)
}

/// Append-only writer. Each record goes out as one `write` of a full line,
/// followed by a flush and fsync, so a crash never leaves a half record
/// in front of later ones.
pub struct ResultsLog {
    path: PathBuf,
    file: File,
}

impl ResultsLog {
    /// Opens (creating if needed) and drops any partial trailing line.
    pub fn open(path: &Path) -> Result<Self, LogError> {
        let io_err = |source| LogError::Io { path: path.to_path_buf(), source };
        let mut file = OpenOptions::new().create(true).read(true).append(true).open(path).map_err(io_err)?;
        let text = fs::read_to_string(path).map_err(io_err)?;
        let keep = text.rfind('\n').map(|i| i + 1).unwrap_or(0);
        if keep < text.len() {
            log::warn!("{}: dropping {} bytes of incomplete trailing record", path.display(), text.len() - keep);
            file.set_len(keep as u64).map_err(io_err)?;
            file.seek(SeekFrom::End(0)).map_err(io_err)?;
        }
        Ok(ResultsLog { path: path.to_path_buf(), file })
    }

    pub fn append(&mut self, record: &EpisodeRecord) -> Result<(), LogError> {
        let mut line = serde_json::to_string(record).expect("record serializes");
        line.push('\n');
        let io_err = |source| LogError::Io { path: self.path.clone(), source };
        self.file.write_all(line.as_bytes()).map_err(io_err)?;
        self.file.flush().map_err(io_err)?;
        self.file.sync_data().map_err(io_err)
    }
}
