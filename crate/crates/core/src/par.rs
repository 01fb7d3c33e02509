//! Batch validation of many plans against one problem.
//!
//! With the `parallel` feature (default) plans are validated on the rayon
//! pool; without it, `validate_batch` is the sequential loop.

use crate::pddl::{Domain, Problem};
use crate::validate::{Plan, TraceResult, Validator};

pub fn validate_batch_seq(domain: &Domain, problem: &Problem, plans: &[Plan]) -> Vec<TraceResult> {
    let v = Validator::new(domain, problem);
    plans.iter().map(|p| v.validate(p)).collect()
}

#[cfg(feature = "parallel")]
pub fn validate_batch(domain: &Domain, problem: &Problem, plans: &[Plan]) -> Vec<TraceResult> {
    use rayon::prelude::*;
    let v = Validator::new(domain, problem);
    plans.par_iter().map(|p| v.validate(p)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn validate_batch(domain: &Domain, problem: &Problem, plans: &[Plan]) -> Vec<TraceResult> {
    validate_batch_seq(domain, problem, plans)
}
