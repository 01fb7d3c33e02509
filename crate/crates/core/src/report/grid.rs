use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{ReportError, Universe};
use crate::bench::corpus::domain_rank;
use crate::bench::{EpisodeRecord, RecordOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridCell {
    pub domain: String,
    pub problem: String,
    pub outcome: RecordOutcome,
    /// False when no record exists and the cell defaults to no-plan.
    pub recorded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlannerRow {
    pub planner: String,
    pub cells: Vec<GridCell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutcomeGrid {
    pub rows: Vec<PlannerRow>,
}

/// Problem universe implied by the records themselves.
pub fn universe_from_records(records: &[EpisodeRecord]) -> Universe {
    let mut u: Universe = BTreeMap::new();
    for r in records {
        u.entry(r.domain.clone()).or_default().push(r.problem.clone());
    }
    for problems in u.values_mut() {
        problems.sort();
        problems.dedup();
    }
    u
}

/// Domains of `universe` in canonical column order.
pub fn ordered_domains(universe: &Universe) -> Vec<String> {
    let mut d: Vec<String> = universe.keys().cloned().collect();
    d.sort_by(|a, b| domain_rank(a).cmp(&domain_rank(b)));
    d
}

/// Planners in order of first appearance in the log.
pub fn planner_order(records: &[EpisodeRecord]) -> Vec<String> {
    let mut seen = Vec::<String>::new();
    for r in records {
        if !seen.contains(&r.planner) {
            seen.push(r.planner.clone());
        }
    }
    seen
}

pub fn build_outcome_grid(records: &[EpisodeRecord], universe: &Universe) -> Result<OutcomeGrid, ReportError> {
    let mut by_key: HashMap<(&str, &str, &str), &EpisodeRecord> = HashMap::new();
    for r in records {
        if !universe.get(&r.domain).is_some_and(|ps| ps.contains(&r.problem)) {
            return Err(ReportError::UnknownProblem { domain: r.domain.clone(), problem: r.problem.clone() });
        }
        if by_key.insert((&r.planner, &r.domain, &r.problem), r).is_some() {
            return Err(ReportError::DuplicateEpisode {
                planner: r.planner.clone(),
                domain: r.domain.clone(),
                problem: r.problem.clone(),
            });
        }
    }
    let domains = ordered_domains(universe);
    let rows = planner_order(records)
        .into_iter()
        .map(|planner| {
            let cells = domains
                .iter()
                .flat_map(|d| universe[d].iter().map(move |p| (d, p)))
                .map(|(d, p)| match by_key.get(&(planner.as_str(), d.as_str(), p.as_str())) {
                    Some(r) => GridCell { domain: d.clone(), problem: p.clone(), outcome: r.outcome, recorded: true },
                    None => GridCell { domain: d.clone(), problem: p.clone(), outcome: RecordOutcome::NoPlan, recorded: false },
                })
                .collect();
            PlannerRow { planner, cells }
        })
        .collect();
    Ok(OutcomeGrid { rows })
}
