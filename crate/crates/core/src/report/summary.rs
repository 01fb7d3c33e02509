use serde::Serialize;

use super::ReportError;
use crate::bench::{EpisodeRecord, RecordOutcome};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainSummary {
    pub planner: String,
    pub domain: String,
    pub problems_total: usize,
    /// Records present for this planner and domain.
    pub episodes: usize,
    pub solved: usize,
    pub success_rate_pct: f64,
    /// Over episodes that produced a plan; `None` when none did.
    pub mean_plan_length: Option<f64>,
    pub mean_executed_actions: Option<f64>,
    /// No-plan episodes plus problems with no record at all.
    pub no_plan_count: usize,
    pub mean_planning_time_seconds: Option<f64>,
    #[serde(skip)]
    planning_time_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlannerSummary {
    pub planner: String,
    pub problems_total: usize,
    pub solved: usize,
    pub overall_success_rate_pct: f64,
    pub overall_mean_plan_length: Option<f64>,
    pub overall_mean_executed_actions: Option<f64>,
    pub execution_fidelity_pct: Option<f64>,
    pub mean_planning_time_seconds: Option<f64>,
    pub domains: Vec<DomainSummary>,
}

fn mean(sum: f64, n: usize) -> Option<f64> {
    (n > 0).then(|| sum / n as f64)
}

/// Aggregates one planner's records for one domain.
pub fn summarize_domain(planner: &str, domain: &str, records: &[&EpisodeRecord], problems_total: usize) -> Result<DomainSummary, ReportError> {
    let mut problems: Vec<&str> = records.iter().map(|r| r.problem.as_str()).collect();
    problems.sort_unstable();
    problems.dedup();
    if problems.len() > problems_total {
        return Err(ReportError::InconsistentCounts {
            planner: planner.into(),
            domain: domain.into(),
            records: problems.len(),
            total: problems_total,
        });
    }
    if problems_total == 0 {
        return Err(ReportError::EmptyInput);
    }
    let solved = records.iter().filter(|r| r.outcome == RecordOutcome::Success).count();
    let generated: Vec<_> = records.iter().filter(|r| r.outcome != RecordOutcome::NoPlan).collect();
    let pl_sum: usize = generated.iter().map(|r| r.plan_length).sum();
    let ac_sum: usize = generated.iter().map(|r| r.executed_actions).sum();
    let planning_time_sum: f64 = records.iter().map(|r| r.planning_time_s).sum();
    Ok(DomainSummary {
        planner: planner.into(),
        domain: domain.into(),
        problems_total,
        episodes: records.len(),
        solved,
        success_rate_pct: 100.0 * solved as f64 / problems_total as f64,
        mean_plan_length: mean(pl_sum as f64, generated.len()),
        mean_executed_actions: mean(ac_sum as f64, generated.len()),
        no_plan_count: problems_total - generated.len(),
        mean_planning_time_seconds: mean(planning_time_sum, records.len()),
        planning_time_sum,
    })
}

/// Micro-averages across domains, weighting each domain by its problem count.
pub fn summarize_planner(planner: &str, domains: Vec<DomainSummary>) -> PlannerSummary {
    let problems_total: usize = domains.iter().map(|d| d.problems_total).sum();
    let solved: usize = domains.iter().map(|d| d.solved).sum();
    let weighted = |f: fn(&DomainSummary) -> Option<f64>| {
        let (sum, weight) = domains
            .iter()
            .filter_map(|d| f(d).map(|v| (v * d.problems_total as f64, d.problems_total)))
            .fold((0.0, 0), |(s, w), (v, n)| (s + v, w + n));
        mean(sum, weight)
    };
    let pl = weighted(|d| d.mean_plan_length);
    let ac = weighted(|d| d.mean_executed_actions);
    let fidelity = match (pl, ac) {
        (Some(pl), Some(ac)) if pl > 0.0 => Some(100.0 * ac / pl),
        _ => None,
    };
    let episodes: usize = domains.iter().map(|d| d.episodes).sum();
    let time_sum: f64 = domains.iter().map(|d| d.planning_time_sum).sum();
    PlannerSummary {
        planner: planner.into(),
        problems_total,
        solved,
        overall_success_rate_pct: if problems_total == 0 { 0.0 } else { 100.0 * solved as f64 / problems_total as f64 },
        overall_mean_plan_length: pl,
        overall_mean_executed_actions: ac,
        execution_fidelity_pct: fidelity,
        mean_planning_time_seconds: mean(time_sum, episodes),
        domains,
    }
}
