//! Fast Downward as an external process.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::sas::parse_sas_plan;
use super::PlannerResponse;

pub const DEFAULT_ALIAS: &str = "seq-sat-lama-2011";

/// Extra wall-clock allowance past the planner's own limit before we kill it.
const KILL_GRACE: Duration = Duration::from_secs(30);

fn default_alias() -> String {
    DEFAULT_ALIAS.into()
}

fn default_time_limit() -> u64 {
    600
}

fn default_display_name() -> String {
    "Fast Downward".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FdPlannerConfig {
    #[serde(default = "default_display_name")]
    pub display_name: String,
    /// Path to `fast-downward.py` (or a wrapper). A bare name is looked up on PATH.
    pub binary_path: PathBuf,
    #[serde(default = "default_alias")]
    pub alias: String,
    #[serde(default = "default_time_limit")]
    pub time_limit_seconds: u64,
    /// Scratch directory for this invocation; plan files land here.
    #[serde(default)]
    pub work_dir: PathBuf,
}

impl FdPlannerConfig {
    pub fn new(binary_path: impl Into<PathBuf>, work_dir: impl Into<PathBuf>) -> Self {
        FdPlannerConfig {
            display_name: default_display_name(),
            binary_path: binary_path.into(),
            alias: default_alias(),
            time_limit_seconds: default_time_limit(),
            work_dir: work_dir.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FdError {
    #[error("Fast Downward binary not found: {0}")]
    BinaryNotFound(PathBuf),
    #[error("Fast Downward exited with {} and no plan: {stderr_tail}", exit_text(*.code))]
    SubprocessFailure { code: Option<i32>, stderr_tail: String },
    #[error("Fast Downward found no solution ({})", exit_text(*.code))]
    NoSolutionFound { code: Option<i32> },
    #[error("i/o error: {0}")]
    Io(String),
}

fn exit_text(code: Option<i32>) -> String {
    code.map_or_else(|| "no exit code (killed)".into(), |c| format!("exit code {c}"))
}

impl From<std::io::Error> for FdError {
    fn from(e: std::io::Error) -> Self {
        FdError::Io(e.to_string())
    }
}

/// Resolves `binary` to an existing file, searching PATH for bare names.
pub fn resolve_binary(binary: &Path) -> Option<PathBuf> {
    if binary.components().count() > 1 || binary.is_absolute() {
        return binary.is_file().then(|| binary.to_path_buf());
    }
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path).map(|dir| dir.join(binary)).find(|p| p.is_file())
}

fn plan_file_rank(name: &str) -> Option<u64> {
    if name == "sas_plan" {
        return Some(0);
    }
    name.strip_prefix("sas_plan.")?.parse().ok()
}

/// The highest-numbered plan file in `dir` (`sas_plan` counts as 0).
pub fn last_plan_file(dir: &Path) -> std::io::Result<Option<PathBuf>> {
    let mut best: Option<(u64, PathBuf)> = None;
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name();
        if let Some(rank) = name.to_str().and_then(plan_file_rank) {
            if best.as_ref().is_none_or(|(r, _)| rank > *r) {
                best = Some((rank, entry.path()));
            }
        }
    }
    Ok(best.map(|(_, p)| p))
}

fn tail(path: &Path, max_chars: usize) -> String {
    let text = fs::read_to_string(path).unwrap_or_default();
    let text = text.trim_end();
    let skip = text.chars().count().saturating_sub(max_chars);
    text.chars().skip(skip).collect()
}

/// Exit codes the driver uses for "ran fine, found nothing" (unsolvable,
/// search incomplete, out of time or memory).
fn is_search_exhausted(code: i32) -> bool {
    matches!(code, 10..=12 | 20..=25)
}

pub fn run_fast_downward(config: &FdPlannerConfig, domain_file: &Path, problem_file: &Path) -> Result<PlannerResponse, FdError> {
    let binary = resolve_binary(&config.binary_path).ok_or_else(|| FdError::BinaryNotFound(config.binary_path.clone()))?;
    let domain = fs::canonicalize(domain_file)?;
    let problem = fs::canonicalize(problem_file)?;
    fs::create_dir_all(&config.work_dir)?;
    for entry in fs::read_dir(&config.work_dir)? {
        let entry = entry?;
        if entry.file_name().to_str().and_then(plan_file_rank).is_some() {
            fs::remove_file(entry.path())?;
        }
    }
    let stdout_path = config.work_dir.join("fd.stdout.log");
    let stderr_path = config.work_dir.join("fd.stderr.log");

    let started = Instant::now();
    let mut child = Command::new(&binary)
        .arg("--alias")
        .arg(&config.alias)
        .arg("--overall-time-limit")
        .arg(format!("{}s", config.time_limit_seconds))
        .arg(&domain)
        .arg(&problem)
        .current_dir(&config.work_dir)
        .stdin(Stdio::null())
        .stdout(fs::File::create(&stdout_path)?)
        .stderr(fs::File::create(&stderr_path)?)
        .spawn()?;
    let deadline = Duration::from_secs(config.time_limit_seconds) + KILL_GRACE;
    let status = loop {
        if let Some(status) = child.try_wait()? {
            break Some(status);
        }
        if started.elapsed() > deadline {
            log::warn!("Fast Downward exceeded {} s; killing", deadline.as_secs());
            let _ = child.kill();
            let _ = child.wait();
            break None;
        }
        std::thread::sleep(Duration::from_millis(20));
    };
    let latency_seconds = started.elapsed().as_secs_f64();
    let code = status.and_then(|s| s.code());

    if let Some(plan_path) = last_plan_file(&config.work_dir)? {
        let raw_text = fs::read_to_string(&plan_path)?;
        let (plan, decode_error) = match parse_sas_plan(&raw_text) {
            Ok(mut p) => {
                p.gen_time_seconds = latency_seconds;
                (Some(p), None)
            }
            Err(e) => (None, Some(e.to_string())),
        };
        return Ok(PlannerResponse { raw_text, plan, decode_error, latency_seconds, truncated: false });
    }
    match code {
        None if status.is_none() => Err(FdError::NoSolutionFound { code }),
        Some(c) if c == 0 || is_search_exhausted(c) => Err(FdError::NoSolutionFound { code }),
        _ => {
            let mut stderr_tail = tail(&stderr_path, 400);
            if stderr_tail.is_empty() {
                stderr_tail = tail(&stdout_path, 400);
            }
            Err(FdError::SubprocessFailure { code, stderr_tail })
        }
    }
}
