//! Aggregation of episode records into success-rate, plan-length,
//! executed-action, fidelity and timing summaries, plus rendered tables
//! and figures.

mod emit;
mod grid;
mod summary;
mod svg;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use crate::bench::{BenchmarkSet, EpisodeRecord};

pub use emit::{emit_report, fmt2, summary_table};
pub use grid::{build_outcome_grid, ordered_domains, planner_order, universe_from_records, GridCell, OutcomeGrid, PlannerRow};
pub use summary::{summarize_domain, summarize_planner, DomainSummary, PlannerSummary};

/// Domain name to sorted problem ids.
pub type Universe = BTreeMap<String, Vec<String>>;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no records")]
    EmptyInput,
    #[error("duplicate episode for {planner} on {domain}/{problem}")]
    DuplicateEpisode { planner: String, domain: String, problem: String },
    #[error("record for {domain}/{problem} is not part of the benchmark")]
    UnknownProblem { domain: String, problem: String },
    #[error("{planner} on {domain}: {records} problems recorded but only {total} in the benchmark")]
    InconsistentCounts { planner: String, domain: String, records: usize, total: usize },
    #[error("log mixes run ids {0:?}; pick one with --run-id")]
    AmbiguousRunId(Vec<String>),
    #[error("no records for run id `{0}`")]
    UnknownRunId(String),
    #[error("output directory {path} is not writable: {detail}")]
    OutputDirUnwritable { path: PathBuf, detail: String },
}

pub fn universe_from_sets(sets: &[BenchmarkSet]) -> Universe {
    sets.iter()
        .map(|s| (s.name.clone(), s.problem_files.iter().map(|p| BenchmarkSet::problem_id(p)).collect()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub run_id: String,
    pub domains: Vec<String>,
    pub planners: Vec<PlannerSummary>,
    pub grid: OutcomeGrid,
}

/// Builds every summary from a results log. Without `universe`, the problem
/// set is inferred from the records (problems no planner attempted are then
/// invisible).
pub fn build_report(records: &[EpisodeRecord], universe: Option<Universe>, run_id: Option<&str>) -> Result<Report, ReportError> {
    if records.is_empty() {
        return Err(ReportError::EmptyInput);
    }
    let run_id = match run_id {
        Some(id) => id.to_string(),
        None => {
            let ids: BTreeSet<&str> = records.iter().map(|r| r.run_id.as_str()).collect();
            if ids.len() > 1 {
                return Err(ReportError::AmbiguousRunId(ids.into_iter().map(String::from).collect()));
            }
            ids.into_iter().next().unwrap().to_string()
        }
    };
    let records: Vec<EpisodeRecord> = records.iter().filter(|r| r.run_id == run_id).cloned().collect();
    if records.is_empty() {
        return Err(ReportError::UnknownRunId(run_id));
    }
    let universe = universe.unwrap_or_else(|| universe_from_records(&records));
    let grid = build_outcome_grid(&records, &universe)?;
    let domains = ordered_domains(&universe);

    let mut planners = Vec::new();
    for planner in planner_order(&records) {
        let mut summaries = Vec::new();
        for d in &domains {
            let recs: Vec<&EpisodeRecord> = records.iter().filter(|r| r.planner == planner && &r.domain == d).collect();
            summaries.push(summarize_domain(&planner, d, &recs, universe[d].len())?);
        }
        planners.push(summarize_planner(&planner, summaries));
    }
    Ok(Report { run_id, domains, planners, grid })
}
