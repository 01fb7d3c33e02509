//! Fast Downward's `sas_plan` text format: one `(name arg...)` per line,
//! `;` comment lines (the trailing cost line) ignored.

use std::fmt::Write;

use thiserror::Error;

use crate::validate::{Plan, PlanSource, PlanStep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SasError {
    #[error("malformed plan line {0}")]
    MalformedLine(usize),
}

pub fn parse_sas_plan(text: &str) -> Result<Plan, SasError> {
    let mut steps = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        let inner = line
            .strip_prefix('(')
            .and_then(|l| l.strip_suffix(')'))
            .ok_or(SasError::MalformedLine(i + 1))?;
        let mut words = inner.split_whitespace().map(str::to_lowercase);
        let name = words.next().ok_or(SasError::MalformedLine(i + 1))?;
        if name.contains(['(', ')']) {
            return Err(SasError::MalformedLine(i + 1));
        }
        steps.push(PlanStep { name, parameters: words.collect(), reason: None, confirm_reasoning: None });
    }
    Ok(Plan::new(steps, PlanSource::Classical))
}

pub fn format_sas_plan(plan: &Plan) -> String {
    let mut out = String::new();
    for s in &plan.steps {
        out.push('(');
        out.push_str(&s.name);
        for p in &s.parameters {
            out.push(' ');
            out.push_str(p);
        }
        out.push_str(")\n");
    }
    let _ = writeln!(out, "; cost = {} (unit cost)", plan.steps.len());
    out
}
