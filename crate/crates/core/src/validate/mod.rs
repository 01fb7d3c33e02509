//! Step-by-step plan execution: longest executable prefix and outcome.

mod plan;
mod trace;
mod validator;

pub use plan::{Plan, PlanFormat, PlanSource, PlanStep};
pub use trace::{FailureReason, NoPlanReason, Outcome, TraceResult};
pub use validator::{validate_plan, validate_plan_text, Validator, DEFAULT_PREVIEW_CAP};
