//! Campaign execution: planners × benchmark sets × problems.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Condvar, Mutex};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::corpus::{load_benchmark_sets, BenchmarkSet, CorpusError};
use super::record::{read_records, store_raw, EpisodeKey, EpisodeRecord, LogError, ResultsLog};
use crate::planners::{
    build_prompt, llm_response_trace, request_llm_plan, run_fast_downward, FdError, FdPlannerConfig, LlmPlannerConfig,
};
use crate::planners::fast_downward::resolve_binary;
use crate::validate::{NoPlanReason, PlanFormat, TraceResult, Validator};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum PlannerConfig {
    Llm(LlmPlannerConfig),
    FastDownward(FdPlannerConfig),
}

impl PlannerConfig {
    pub fn display_name(&self) -> &str {
        match self {
            PlannerConfig::Llm(c) => &c.display_name,
            PlannerConfig::FastDownward(c) => &c.display_name,
        }
    }

    fn endpoint(&self) -> Option<&str> {
        match self {
            PlannerConfig::Llm(c) => Some(&c.endpoint_url),
            PlannerConfig::FastDownward(_) => None,
        }
    }

    /// Why this planner cannot run here, if it cannot.
    fn unavailable(&self) -> Option<String> {
        match self {
            PlannerConfig::Llm(c) if !c.api_key_env_var.is_empty() && std::env::var_os(&c.api_key_env_var).is_none() => {
                Some(format!("environment variable {} is not set", c.api_key_env_var))
            }
            PlannerConfig::FastDownward(c) if resolve_binary(&c.binary_path).is_none() => {
                Some(format!("binary {} not found", c.binary_path.display()))
            }
            _ => None,
        }
    }
}

fn one() -> usize {
    1
}

fn one_u32() -> u32 {
    1
}

fn default_run_id() -> String {
    "run1".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CampaignConfig {
    #[serde(default = "default_run_id")]
    pub run_id: String,
    pub planners: Vec<PlannerConfig>,
    pub benchmark_root: PathBuf,
    /// Subset of set names to run; empty runs every set under the root.
    #[serde(default)]
    pub benchmark_sets: Vec<String>,
    #[serde(default = "one")]
    pub parallelism: usize,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub resume: bool,
    #[serde(default = "one_u32")]
    pub trials: u32,
    #[serde(default = "one")]
    pub max_concurrent_per_endpoint: usize,
}

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("invalid campaign config: {0}")]
    Config(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("output directory {path} is not writable: {detail}")]
    OutputDirUnwritable { path: PathBuf, detail: String },
    #[error(transparent)]
    Log(#[from] LogError),
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() && !p.as_os_str().is_empty() {
        *p = base.join(&*p);
    }
}

impl CampaignConfig {
    /// Reads a config file; relative paths in it are taken relative to the file.
    pub fn from_file(path: &Path) -> Result<Self, CampaignError> {
        let text = fs::read_to_string(path).map_err(|e| CampaignError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: CampaignConfig =
            serde_json::from_str(&text).map_err(|e| CampaignError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        resolve(base, &mut cfg.benchmark_root);
        resolve(base, &mut cfg.output_dir);
        for p in &mut cfg.planners {
            if let PlannerConfig::FastDownward(fd) = p {
                // bare names are looked up on PATH
                if fd.binary_path.components().count() > 1 {
                    resolve(base, &mut fd.binary_path);
                }
            }
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), CampaignError> {
        let bad = |m: String| Err(CampaignError::Config(m));
        if self.parallelism == 0 {
            return bad("parallelism must be at least 1".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.max_concurrent_per_endpoint == 0 {
            return bad("maxConcurrentPerEndpoint must be at least 1".into());
        }
        if self.run_id.trim().is_empty() {
            return bad("runId must not be empty".into());
        }
        let mut seen = HashSet::new();
        for p in &self.planners {
            if !seen.insert(p.display_name()) {
                return bad(format!("duplicate planner name `{}`", p.display_name()));
            }
            match p {
                PlannerConfig::Llm(c) => c.check().map_err(CampaignError::Config)?,
                PlannerConfig::FastDownward(c) if c.time_limit_seconds == 0 => {
                    return bad(format!("{}: timeLimitSeconds must be positive", c.display_name));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Run id recorded for trial `k` (1-based). Trial 1 uses the run id as is.
    pub fn trial_run_id(&self, k: u32) -> String {
        if k == 1 {
            self.run_id.clone()
        } else {
            format!("{}.t{k}", self.run_id)
        }
    }

    pub fn results_path(&self) -> PathBuf {
        self.output_dir.join("results.jsonl")
    }
}

#[derive(Debug, Default)]
pub struct CampaignSummary {
    /// Records written by this invocation, in write order.
    pub records: Vec<EpisodeRecord>,
    /// Episodes skipped because the log already had them.
    pub resumed: usize,
    pub skipped_planners: Vec<String>,
}

struct Job<'a> {
    planner: usize,
    seq: usize,
    set: &'a BenchmarkSet,
    problem: PathBuf,
    problem_id: String,
    run_id: String,
}

/// Counting semaphore per LLM endpoint.
struct Gates {
    slots: HashMap<String, (Mutex<usize>, Condvar)>,
}

struct GateGuard<'a>(Option<&'a (Mutex<usize>, Condvar)>);

impl Gates {
    fn new(planners: &[PlannerConfig], cap: usize) -> Self {
        let slots = planners
            .iter()
            .filter_map(PlannerConfig::endpoint)
            .map(|e| (e.to_string(), (Mutex::new(cap), Condvar::new())))
            .collect();
        Gates { slots }
    }

    fn acquire(&self, endpoint: Option<&str>) -> GateGuard<'_> {
        let Some(slot) = endpoint.and_then(|e| self.slots.get(e)) else {
            return GateGuard(None);
        };
        let mut free = slot.0.lock().unwrap();
        while *free == 0 {
            free = slot.1.wait(free).unwrap();
        }
        *free -= 1;
        GateGuard(Some(slot))
    }
}

impl Drop for GateGuard<'_> {
    fn drop(&mut self) {
        if let Some(slot) = self.0 {
            *slot.0.lock().unwrap() += 1;
            slot.1.notify_one();
        }
    }
}

fn slug(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' }).collect()
}

/// Runs one episode. Never fails: planner trouble becomes a no-plan trace.
/// Returns the trace, planning time and the raw planner output.
pub fn run_episode(planner: &PlannerConfig, set: &BenchmarkSet, problem_path: &Path, work_dir: &Path) -> (TraceResult, f64, String) {
    let started = Instant::now();
    let problem = match set.load_problem(problem_path) {
        Ok(p) => p,
        Err(e) => return (TraceResult::no_plan(NoPlanReason::PlannerError, e.to_string()), 0.0, format!("error: {e}")),
    };
    let validator = Validator::new(&set.domain, &problem);
    match planner {
        PlannerConfig::Llm(cfg) => {
            let texts = fs::read_to_string(&set.domain_file).and_then(|d| Ok((d, fs::read_to_string(problem_path)?)));
            let (domain_text, problem_text) = match texts {
                Ok(t) => t,
                Err(e) => return (TraceResult::no_plan(NoPlanReason::PlannerError, e.to_string()), 0.0, format!("error: {e}")),
            };
            let (system, user) = build_prompt(&domain_text, &problem_text);
            match request_llm_plan(cfg, &system, &user) {
                Ok(resp) => (llm_response_trace(&validator, &resp), resp.latency_seconds, resp.raw_text),
                Err(e) => {
                    log::warn!("{} {}/{}: {e}", cfg.display_name, set.name, BenchmarkSet::problem_id(problem_path));
                    let elapsed = started.elapsed().as_secs_f64();
                    (TraceResult::no_plan(NoPlanReason::PlannerError, e.to_string()), elapsed, format!("error: {e}"))
                }
            }
        }
        PlannerConfig::FastDownward(cfg) => {
            let cfg = FdPlannerConfig { work_dir: work_dir.to_path_buf(), ..cfg.clone() };
            match run_fast_downward(&cfg, &set.domain_file, problem_path) {
                Ok(resp) => {
                    let _ = fs::remove_dir_all(work_dir);
                    (validator.validate_text(&resp.raw_text, PlanFormat::Sas), resp.latency_seconds, resp.raw_text)
                }
                Err(e) => {
                    let elapsed = started.elapsed().as_secs_f64();
                    let reason = match e {
                        FdError::NoSolutionFound { .. } => NoPlanReason::NoSolutionFound,
                        _ => {
                            log::warn!("{} {}/{}: {e}", cfg.display_name, set.name, BenchmarkSet::problem_id(problem_path));
                            NoPlanReason::PlannerError
                        }
                    };
                    (TraceResult::no_plan(reason, e.to_string()), elapsed, format!("error: {e}"))
                }
            }
        }
    }
}

/// Serializes completed episodes into the log, holding back records that
/// finish early so each planner's records appear in job order.
struct Sink<'a> {
    log: ResultsLog,
    next: Vec<usize>,
    pending: Vec<BTreeMap<usize, EpisodeRecord>>,
    written: Vec<EpisodeRecord>,
    progress: &'a (dyn Fn(&EpisodeRecord) + Sync),
}

impl Sink<'_> {
    fn accept(&mut self, planner: usize, seq: usize, rec: EpisodeRecord) -> Result<(), LogError> {
        self.pending[planner].insert(seq, rec);
        while let Some(rec) = self.pending[planner].remove(&self.next[planner]) {
            self.log.append(&rec)?;
            (self.progress)(&rec);
            self.written.push(rec);
            self.next[planner] += 1;
        }
        Ok(())
    }
}

fn execute(job: &Job, planners: &[PlannerConfig], gates: &Gates, cfg: &CampaignConfig) -> Result<EpisodeRecord, CampaignError> {
    let planner = &planners[job.planner];
    let work_dir = cfg
        .output_dir
        .join("work")
        .join(slug(planner.display_name()))
        .join(&job.set.name)
        .join(format!("{}-{}", job.problem_id, slug(&job.run_id)));
    let (trace, time, raw) = {
        let _gate = gates.acquire(planner.endpoint());
        run_episode(planner, job.set, &job.problem, &work_dir)
    };
    let digest = store_raw(&cfg.output_dir.join("raw"), &raw)
        .map_err(|e| CampaignError::OutputDirUnwritable { path: cfg.output_dir.clone(), detail: e.to_string() })?;
    Ok(EpisodeRecord::from_trace(planner.display_name(), &job.set.name, &job.problem_id, &trace, time, digest, &job.run_id))
}

pub fn run_campaign(cfg: &CampaignConfig, progress: &(dyn Fn(&EpisodeRecord) + Sync)) -> Result<CampaignSummary, CampaignError> {
    cfg.check()?;
    let mut sets = load_benchmark_sets(&cfg.benchmark_root)?;
    if !cfg.benchmark_sets.is_empty() {
        for wanted in &cfg.benchmark_sets {
            if !sets.iter().any(|s| &s.name == wanted) {
                return Err(CampaignError::Config(format!("benchmark set `{wanted}` not found under {}", cfg.benchmark_root.display())));
            }
        }
        sets.retain(|s| cfg.benchmark_sets.contains(&s.name));
    }

    let unwritable = |e: &dyn std::fmt::Display| CampaignError::OutputDirUnwritable { path: cfg.output_dir.clone(), detail: e.to_string() };
    fs::create_dir_all(&cfg.output_dir).map_err(|e| unwritable(&e))?;
    let results = cfg.results_path();
    let existing: HashSet<EpisodeKey> = if results.exists() {
        read_records(&results)?.iter().map(EpisodeRecord::key).collect()
    } else {
        HashSet::new()
    };
    let log = ResultsLog::open(&results).map_err(|e| unwritable(&e))?;

    let mut summary = CampaignSummary::default();
    let mut jobs = Vec::new();
    for (pi, planner) in cfg.planners.iter().enumerate() {
        if let Some(why) = planner.unavailable() {
            log::warn!("skipping planner {}: {why}", planner.display_name());
            summary.skipped_planners.push(planner.display_name().to_string());
            continue;
        }
        let mut seq = 0;
        for trial in 1..=cfg.trials {
            let run_id = cfg.trial_run_id(trial);
            for set in &sets {
                for problem in &set.problem_files {
                    let problem_id = BenchmarkSet::problem_id(problem);
                    let key = (planner.display_name().to_string(), set.name.clone(), problem_id.clone(), run_id.clone());
                    if existing.contains(&key) {
                        if !cfg.resume {
                            return Err(CampaignError::Config(format!(
                                "{} already holds episodes for run `{run_id}`; resume or choose a new runId",
                                results.display()
                            )));
                        }
                        summary.resumed += 1;
                        continue;
                    }
                    jobs.push(Job { planner: pi, seq, set, problem: problem.clone(), problem_id, run_id: run_id.clone() });
                    seq += 1;
                }
            }
        }
    }

    let gates = Gates::new(&cfg.planners, cfg.max_concurrent_per_endpoint);
    let mut sink = Sink {
        log,
        next: vec![0; cfg.planners.len()],
        pending: vec![BTreeMap::new(); cfg.planners.len()],
        written: Vec::new(),
        progress,
    };
    dispatch(&jobs, cfg, &gates, &mut sink)?;
    summary.records = sink.written;
    Ok(summary)
}

#[cfg(feature = "parallel")]
fn dispatch(jobs: &[Job], cfg: &CampaignConfig, gates: &Gates, sink: &mut Sink) -> Result<(), CampaignError> {
    use rayon::prelude::*;
    use std::sync::mpsc;

    if cfg.parallelism == 1 {
        return dispatch_seq(jobs, cfg, gates, sink);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| CampaignError::Config(e.to_string()))?;
    let (tx, rx) = mpsc::channel::<Result<(usize, usize, EpisodeRecord), CampaignError>>();
    std::thread::scope(|scope| {
        scope.spawn(move || {
            pool.install(|| {
                jobs.par_iter().for_each_with(tx, |tx, job| {
                    let _ = tx.send(execute(job, &cfg.planners, gates, cfg).map(|r| (job.planner, job.seq, r)));
                });
            });
        });
        for msg in rx {
            let (planner, seq, rec) = msg?;
            sink.accept(planner, seq, rec)?;
        }
        Ok(())
    })
}

#[cfg(not(feature = "parallel"))]
fn dispatch(jobs: &[Job], cfg: &CampaignConfig, gates: &Gates, sink: &mut Sink) -> Result<(), CampaignError> {
    dispatch_seq(jobs, cfg, gates, sink)
}

fn dispatch_seq(jobs: &[Job], cfg: &CampaignConfig, gates: &Gates, sink: &mut Sink) -> Result<(), CampaignError> {
    for job in jobs {
        let rec = execute(job, &cfg.planners, gates, cfg)?;
        sink.accept(job.planner, job.seq, rec)?;
    }
    Ok(())
}
