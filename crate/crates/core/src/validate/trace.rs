use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    PreconditionViolation,
    UnknownAction,
    ArityMismatch,
    TypeMismatch,
    /// Every step executed but the final state misses the goal.
    GoalNotSatisfied,
}

/// Why an episode produced no plan at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoPlanReason {
    Unparseable,
    Truncated,
    Empty,
    Refusal,
    NoSolutionFound,
    PlannerError,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "reason", rename_all = "camelCase")]
pub enum Outcome {
    Success,
    Failure(FailureReason),
    NoPlan(NoPlanReason),
}

impl FailureReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            FailureReason::PreconditionViolation => "precondition_violation",
            FailureReason::UnknownAction => "unknown_action",
            FailureReason::ArityMismatch => "arity_mismatch",
            FailureReason::TypeMismatch => "type_mismatch",
            FailureReason::GoalNotSatisfied => "goal_not_satisfied",
        }
    }
}

impl NoPlanReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoPlanReason::Unparseable => "unparseable",
            NoPlanReason::Truncated => "truncated",
            NoPlanReason::Empty => "empty",
            NoPlanReason::Refusal => "refusal",
            NoPlanReason::NoSolutionFound => "no_solution_found",
            NoPlanReason::PlannerError => "planner_error",
        }
    }
}

impl Outcome {
    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Success)
    }

    /// `None` for success.
    pub fn reason(&self) -> Option<&'static str> {
        match self {
            Outcome::Success => None,
            Outcome::Failure(r) => Some(r.as_str()),
            Outcome::NoPlan(r) => Some(r.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceResult {
    pub outcome: Outcome,
    /// PL: number of steps in the plan.
    pub plan_length: usize,
    /// Ac: length of the longest executable prefix.
    pub executed_actions: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_step: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_state_preview: Option<Vec<String>>,
}

impl TraceResult {
    pub fn no_plan(reason: NoPlanReason, detail: impl Into<String>) -> Self {
        let detail = detail.into();
        TraceResult {
            outcome: Outcome::NoPlan(reason),
            plan_length: 0,
            executed_actions: 0,
            failure_step: None,
            failure_detail: if detail.is_empty() { None } else { Some(detail) },
            final_state_preview: None,
        }
    }
}
