//! Plan sources: LLM chat endpoints and Fast Downward.

pub mod fast_downward;
pub mod llm;
pub mod plan_json;
pub mod prompt;
pub mod sas;

use crate::validate::{NoPlanReason, Plan, TraceResult, Validator};

pub use fast_downward::{run_fast_downward, FdError, FdPlannerConfig};
pub use llm::{request_llm_plan, LlmError, LlmPlannerConfig};
pub use plan_json::{decode_plan_json, is_refusal, plan_to_json, DecodeError};
pub use prompt::build_prompt;
pub use sas::{format_sas_plan, parse_sas_plan, SasError};

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerResponse {
    pub raw_text: String,
    pub plan: Option<Plan>,
    pub decode_error: Option<String>,
    pub latency_seconds: f64,
    /// The provider reported hitting the output-token limit.
    pub truncated: bool,
}

/// Validation outcome for an LLM response, folding decode problems, provider
/// truncation and refusals into the matching no-plan reasons.
pub fn llm_response_trace(validator: &Validator, resp: &PlannerResponse) -> TraceResult {
    let detail = resp.decode_error.clone().unwrap_or_default();
    match &resp.plan {
        Some(plan) if is_refusal(plan) => {
            TraceResult::no_plan(NoPlanReason::Refusal, plan.reasoning.clone().unwrap_or_default().join(" "))
        }
        Some(plan) => validator.validate(plan),
        None if resp.raw_text.trim().is_empty() => TraceResult::no_plan(NoPlanReason::Empty, detail),
        None if resp.truncated || decode_plan_json(&resp.raw_text) == Err(DecodeError::Truncated) => {
            TraceResult::no_plan(NoPlanReason::Truncated, detail)
        }
        None => TraceResult::no_plan(NoPlanReason::Unparseable, detail),
    }
}
