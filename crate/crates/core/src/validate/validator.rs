use crate::pddl::{Domain, Problem};
use crate::planners::plan_json::{decode_plan_json, is_refusal};
use crate::planners::sas::parse_sas_plan;
use crate::world::{
    apply_action, check_applicable, ground_action, initial_state, unsatisfied_goal, GroundingError, State, TypeIndex,
};

use super::plan::{Plan, PlanFormat, PlanStep};
use super::trace::{FailureReason, NoPlanReason, Outcome, TraceResult};

pub const DEFAULT_PREVIEW_CAP: usize = 64;

/// Validator bound to one domain/problem pair. Construction does the work
/// shared by every plan (type index, initial state), so batches of plans for
/// the same problem reuse it.
pub struct Validator<'a> {
    domain: &'a Domain,
    problem: &'a Problem,
    index: TypeIndex,
    init: State,
    preview_cap: usize,
}

fn step_label(step: &PlanStep) -> String {
    let mut s = format!("({}", step.name);
    for p in &step.parameters {
        s.push(' ');
        s.push_str(p);
    }
    s.push(')');
    s
}

fn preview(state: &State, cap: usize) -> Vec<String> {
    state.iter().take(cap).map(|a| a.to_string()).collect()
}

impl<'a> Validator<'a> {
    pub fn new(domain: &'a Domain, problem: &'a Problem) -> Self {
        Validator {
            domain,
            problem,
            index: TypeIndex::build(domain, problem),
            init: initial_state(problem),
            preview_cap: DEFAULT_PREVIEW_CAP,
        }
    }

    pub fn with_preview_cap(mut self, cap: usize) -> Self {
        self.preview_cap = cap;
        self
    }

    pub fn initial_state(&self) -> &State {
        &self.init
    }

    pub fn validate(&self, plan: &Plan) -> TraceResult {
        let plan_length = plan.steps.len();
        let mut state = self.init.clone();
        for (i, step) in plan.steps.iter().enumerate() {
            let failure = match ground_action(self.domain, &step.name, &step.parameters, &self.index) {
                Err(e) => {
                    let reason = match e {
                        GroundingError::UnknownAction(_) => FailureReason::UnknownAction,
                        GroundingError::ArityMismatch { .. } => FailureReason::ArityMismatch,
                        GroundingError::TypeMismatch { .. } => FailureReason::TypeMismatch,
                    };
                    Some((reason, e.to_string()))
                }
                Ok(action) => match check_applicable(&state, &action) {
                    Err(v) => Some((FailureReason::PreconditionViolation, v.to_string())),
                    Ok(()) => {
                        state = apply_action(&state, &action);
                        None
                    }
                },
            };
            if let Some((reason, detail)) = failure {
                return TraceResult {
                    outcome: Outcome::Failure(reason),
                    plan_length,
                    executed_actions: i,
                    failure_step: Some(i),
                    failure_detail: Some(format!("step {i} {}: {detail}", step_label(step))),
                    final_state_preview: Some(preview(&state, self.preview_cap)),
                };
            }
        }
        let (outcome, failure_detail) = match unsatisfied_goal(&state, &self.problem.goal) {
            None => (Outcome::Success, None),
            Some(c) => (Outcome::Failure(FailureReason::GoalNotSatisfied), Some(format!("goal not satisfied: {c}"))),
        };
        TraceResult {
            outcome,
            plan_length,
            executed_actions: plan_length,
            failure_step: None,
            failure_detail,
            final_state_preview: Some(preview(&state, self.preview_cap)),
        }
    }

    /// Decodes `text` and validates it. Decoding problems become no-plan outcomes.
    pub fn validate_text(&self, text: &str, format: PlanFormat) -> TraceResult {
        match format {
            PlanFormat::Json => match decode_plan_json(text) {
                Err(e) => TraceResult::no_plan(NoPlanReason::Unparseable, e.to_string()),
                Ok(plan) if is_refusal(&plan) => {
                    TraceResult::no_plan(NoPlanReason::Refusal, plan.reasoning.unwrap_or_default().join(" "))
                }
                Ok(plan) => self.validate(&plan),
            },
            PlanFormat::Sas => match parse_sas_plan(text) {
                Err(e) => TraceResult::no_plan(NoPlanReason::Unparseable, e.to_string()),
                Ok(plan) if plan.is_empty() && unsatisfied_goal(&self.init, &self.problem.goal).is_some() => {
                    TraceResult::no_plan(NoPlanReason::Empty, "plan file contains no actions")
                }
                Ok(plan) => self.validate(&plan),
            },
        }
    }
}

pub fn validate_plan(domain: &Domain, problem: &Problem, plan: &Plan) -> TraceResult {
    Validator::new(domain, problem).validate(plan)
}

pub fn validate_plan_text(domain: &Domain, problem: &Problem, text: &str, format: PlanFormat) -> TraceResult {
    Validator::new(domain, problem).validate_text(text, format)
}
