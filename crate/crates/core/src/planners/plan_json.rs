//! Decoding of LLM responses in the `reasoning` / `plan` JSON schema.
//!
//! Markdown fences and surrounding prose are tolerated; the JSON itself is
//! never repaired. A response that does not decode strictly is a no-plan.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::validate::{Plan, PlanSource, PlanStep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("no JSON object found in response")]
    NoJsonObject,
    #[error("response ends inside an unterminated JSON object")]
    Truncated,
    #[error("invalid JSON: {0}")]
    InvalidJson(String),
    #[error("schema violation at {path}: {detail}")]
    SchemaViolation { path: String, detail: String },
}

/// Text between the first pair of triple-backtick fences, or the whole text.
/// Backticks inside the JSON itself (after its opening brace) are not fences.
fn strip_fences(text: &str) -> &str {
    let Some(open) = text.find("```") else {
        return text;
    };
    if text.find('{').is_some_and(|brace| brace < open) {
        return text;
    }
    let after = &text[open + 3..];
    // skip the info string (e.g. `json`) up to end of line
    let body = match after.find('\n') {
        Some(nl) => &after[nl + 1..],
        None => after,
    };
    match body.find("```") {
        Some(close) => &body[..close],
        None => body,
    }
}

/// Slice of the first balanced top-level `{ ... }`.
fn first_object(text: &str) -> Result<&str, DecodeError> {
    let start = text.find('{').ok_or(DecodeError::NoJsonObject)?;
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (i, c) in text[start..].char_indices() {
        if in_string {
            match c {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '"' => in_string = false,
                _ => {}
            }
            continue;
        }
        match c {
            '"' => in_string = true,
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Ok(&text[start..start + i + 1]);
                }
            }
            _ => {}
        }
    }
    Err(DecodeError::Truncated)
}

fn violation(path: impl Into<String>, detail: impl Into<String>) -> DecodeError {
    DecodeError::SchemaViolation { path: path.into(), detail: detail.into() }
}

fn optional_string(obj: &Map<String, Value>, key: &str, path: &str) -> Result<Option<String>, DecodeError> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(violation(format!("{path}.{key}"), "expected a string")),
    }
}

fn decode_step(value: &Value, path: &str) -> Result<PlanStep, DecodeError> {
    let obj = value.as_object().ok_or_else(|| violation(path, "expected an object"))?;
    let name = match obj.get("name") {
        Some(Value::String(s)) if !s.trim().is_empty() => s.trim().to_lowercase(),
        Some(Value::String(_)) => return Err(violation(format!("{path}.name"), "empty action name")),
        Some(_) => return Err(violation(format!("{path}.name"), "expected a string")),
        None => return Err(violation(path, "missing key `name`")),
    };
    let params = match obj.get("parameters") {
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| match v {
                Value::String(s) => Ok(s.trim().to_lowercase()),
                _ => Err(violation(format!("{path}.parameters[{i}]"), "expected a string")),
            })
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(violation(format!("{path}.parameters"), "expected an array of strings")),
        None => return Err(violation(path, "missing key `parameters`")),
    };
    Ok(PlanStep {
        name,
        parameters: params,
        reason: optional_string(obj, "reason", path)?,
        confirm_reasoning: optional_string(obj, "confirm_reasoning", path)?,
    })
}

pub fn decode_plan_json(raw: &str) -> Result<Plan, DecodeError> {
    let body = first_object(strip_fences(raw))?;
    let value: Value = serde_json::from_str(body).map_err(|e| DecodeError::InvalidJson(e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| violation("$", "expected an object"))?;

    let steps = match obj.get("plan") {
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| decode_step(v, &format!("$.plan[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(violation("$.plan", "expected an array")),
        None => return Err(violation("$", "missing key `plan`")),
    };
    let reasoning = match obj.get("reasoning") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) => Some(
            items
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    v.as_str().map(str::to_owned).ok_or_else(|| violation(format!("$.reasoning[{i}]"), "expected a string"))
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
        Some(_) => return Err(violation("$.reasoning", "expected an array of strings")),
    };
    Ok(Plan { steps, reasoning, source: PlanSource::Llm, gen_time_seconds: 0.0 })
}

/// Serializes a plan in the same schema the decoder reads.
pub fn plan_to_json(plan: &Plan) -> String {
    let steps: Vec<Value> = plan
        .steps
        .iter()
        .map(|s| {
            let mut m = Map::new();
            m.insert("name".into(), json!(s.name));
            m.insert("parameters".into(), json!(s.parameters));
            if let Some(r) = &s.reason {
                m.insert("reason".into(), json!(r));
            }
            if let Some(c) = &s.confirm_reasoning {
                m.insert("confirm_reasoning".into(), json!(c));
            }
            Value::Object(m)
        })
        .collect();
    let doc = json!({
        "reasoning": plan.reasoning.clone().unwrap_or_default(),
        "plan": steps,
    });
    serde_json::to_string_pretty(&doc).expect("plan serializes")
}

const REFUSAL_MARKERS: &[&str] = &[
    "no solution",
    "no valid plan",
    "no plan exists",
    "not solvable",
    "unsolvable",
    "cannot be solved",
    "can't be solved",
    "impossible",
];

/// An explicitly empty plan whose reasoning says the task cannot be solved.
pub fn is_refusal(plan: &Plan) -> bool {
    if !plan.steps.is_empty() {
        return false;
    }
    let text = plan.reasoning.as_deref().unwrap_or_default().join(" ").to_lowercase();
    REFUSAL_MARKERS.iter().any(|m| text.contains(m))
}
