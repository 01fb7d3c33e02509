//! Chat-completion transport for LLM planners.
//!
//! The default wire shape is the common `model` / `messages` / `max_tokens`
//! body. Providers that want something else supply `requestTemplate`, a JSON
//! document with `{{system}}`, `{{user}}`, `{{model}}`, `{{max_tokens}}` and
//! `{{temperature}}` placeholders, plus JSON pointers to the reply text.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use super::plan_json::decode_plan_json;
use super::PlannerResponse;

fn default_timeout() -> u64 {
    600
}

fn default_retries() -> u32 {
    2
}

fn default_backoff_ms() -> u64 {
    1000
}

fn default_max_tokens() -> u32 {
    8192
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LlmPlannerConfig {
    pub display_name: String,
    pub endpoint_url: String,
    pub model_id: String,
    /// Name of the environment variable holding the bearer token. Empty means
    /// the endpoint takes no authentication.
    #[serde(default)]
    pub api_key_env_var: String,
    #[serde(default = "default_max_tokens")]
    pub max_output_tokens: u32,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_timeout")]
    pub request_timeout_seconds: u64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    /// First retry delay; doubles on each further attempt.
    #[serde(default = "default_backoff_ms")]
    pub retry_backoff_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub request_template: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub response_text_pointer: Option<String>,
}

impl LlmPlannerConfig {
    pub fn new(display_name: &str, endpoint_url: &str, model_id: &str) -> Self {
        LlmPlannerConfig {
            display_name: display_name.into(),
            endpoint_url: endpoint_url.into(),
            model_id: model_id.into(),
            api_key_env_var: String::new(),
            max_output_tokens: default_max_tokens(),
            temperature: 0.0,
            request_timeout_seconds: default_timeout(),
            max_retries: default_retries(),
            retry_backoff_ms: default_backoff_ms(),
            request_template: None,
            response_text_pointer: None,
        }
    }

    pub fn check(&self) -> Result<(), String> {
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return Err(format!("{}: temperature must be >= 0", self.display_name));
        }
        if self.request_timeout_seconds == 0 {
            return Err(format!("{}: requestTimeoutSeconds must be positive", self.display_name));
        }
        if self.max_output_tokens == 0 {
            return Err(format!("{}: maxOutputTokens must be positive", self.display_name));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LlmError {
    #[error("environment variable {0} is not set")]
    MissingApiKey(String),
    #[error("authentication rejected (HTTP {0})")]
    Auth(u16),
    #[error("request timed out after {0} s")]
    Timeout(u64),
    #[error("transport error after {attempts} attempt(s): {detail}")]
    Transport { attempts: u32, detail: String },
    #[error("unexpected response: {0}")]
    BadResponse(String),
    #[error("invalid request template: {0}")]
    Template(String),
}

fn substitute(value: &Value, vars: &[(&str, Value)]) -> Value {
    match value {
        Value::String(s) => {
            for (name, v) in vars {
                if s == &format!("{{{{{name}}}}}") {
                    return v.clone();
                }
            }
            let mut out = s.clone();
            for (name, v) in vars {
                let text = match v {
                    Value::String(t) => t.clone(),
                    other => other.to_string(),
                };
                out = out.replace(&format!("{{{{{name}}}}}"), &text);
            }
            Value::String(out)
        }
        Value::Array(items) => Value::Array(items.iter().map(|v| substitute(v, vars)).collect()),
        Value::Object(map) => Value::Object(map.iter().map(|(k, v)| (k.clone(), substitute(v, vars))).collect()),
        other => other.clone(),
    }
}

pub fn request_body(config: &LlmPlannerConfig, system: &str, user: &str) -> Result<Value, LlmError> {
    match &config.request_template {
        None => Ok(json!({
            "model": config.model_id,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
            "max_tokens": config.max_output_tokens,
            "temperature": config.temperature,
        })),
        Some(template) => {
            let parsed: Value = serde_json::from_str(template).map_err(|e| LlmError::Template(e.to_string()))?;
            let vars = [
                ("system", json!(system)),
                ("user", json!(user)),
                ("model", json!(config.model_id)),
                ("max_tokens", json!(config.max_output_tokens)),
                ("temperature", json!(config.temperature)),
            ];
            Ok(substitute(&parsed, &vars))
        }
    }
}

const DEFAULT_TEXT_POINTERS: &[&str] = &["/choices/0/message/content", "/content/0/text"];
const FINISH_POINTERS: &[&str] = &["/choices/0/finish_reason", "/stop_reason"];

/// Pulls the reply text and the truncation flag out of a response document.
pub fn extract_reply(config: &LlmPlannerConfig, body: &Value) -> Result<(String, bool), LlmError> {
    let pointers: Vec<&str> = match &config.response_text_pointer {
        Some(p) => vec![p.as_str()],
        None => DEFAULT_TEXT_POINTERS.to_vec(),
    };
    let text = pointers
        .iter()
        .find_map(|p| body.pointer(p).and_then(Value::as_str))
        .ok_or_else(|| LlmError::BadResponse(format!("no reply text at {}", pointers.join(" or "))))?;
    let truncated = FINISH_POINTERS
        .iter()
        .filter_map(|p| body.pointer(p).and_then(Value::as_str))
        .any(|r| r == "length" || r == "max_tokens");
    Ok((text.to_string(), truncated))
}

enum Attempt {
    Done(Value),
    Retry(String),
    Fatal(LlmError),
}

fn attempt(client: &reqwest::blocking::Client, config: &LlmPlannerConfig, token: Option<&str>, body: &Value) -> Attempt {
    let mut req = client.post(&config.endpoint_url).json(body);
    if let Some(t) = token {
        req = req.bearer_auth(t);
    }
    let resp = match req.send() {
        Ok(r) => r,
        Err(e) if e.is_timeout() => return Attempt::Fatal(LlmError::Timeout(config.request_timeout_seconds)),
        Err(e) => return Attempt::Retry(e.to_string()),
    };
    let status = resp.status();
    if status.as_u16() == 401 || status.as_u16() == 403 {
        return Attempt::Fatal(LlmError::Auth(status.as_u16()));
    }
    if status.is_server_error() || status.as_u16() == 429 {
        return Attempt::Retry(format!("HTTP {}", status.as_u16()));
    }
    if !status.is_success() {
        let text = resp.text().unwrap_or_default();
        let tail: String = text.chars().take(200).collect();
        return Attempt::Fatal(LlmError::Transport { attempts: 1, detail: format!("HTTP {}: {tail}", status.as_u16()) });
    }
    match resp.json::<Value>() {
        Ok(v) => Attempt::Done(v),
        Err(e) if e.is_timeout() => Attempt::Fatal(LlmError::Timeout(config.request_timeout_seconds)),
        Err(e) if e.is_decode() => Attempt::Fatal(LlmError::BadResponse(e.to_string())),
        Err(e) => Attempt::Retry(e.to_string()),
    }
}

/// Sends one planning request. Transport failures (connection errors, 5xx,
/// 429) are retried up to `max_retries` times; timeouts and auth failures are not.
pub fn request_llm_plan(config: &LlmPlannerConfig, system: &str, user: &str) -> Result<PlannerResponse, LlmError> {
    let token = if config.api_key_env_var.is_empty() {
        None
    } else {
        Some(std::env::var(&config.api_key_env_var).map_err(|_| LlmError::MissingApiKey(config.api_key_env_var.clone()))?)
    };
    let body = request_body(config, system, user)?;
    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(config.request_timeout_seconds))
        .build()
        .map_err(|e| LlmError::Transport { attempts: 0, detail: e.to_string() })?;

    let started = Instant::now();
    let mut attempts = 0;
    let reply = loop {
        attempts += 1;
        match attempt(&client, config, token.as_deref(), &body) {
            Attempt::Done(v) => break v,
            Attempt::Fatal(e) => return Err(e),
            Attempt::Retry(detail) => {
                if attempts > config.max_retries {
                    return Err(LlmError::Transport { attempts, detail });
                }
                let delay = config.retry_backoff_ms.saturating_mul(1 << (attempts - 1).min(16));
                log::warn!("{}: attempt {attempts} failed ({detail}); retrying in {delay} ms", config.display_name);
                std::thread::sleep(Duration::from_millis(delay));
            }
        }
    };
    let latency_seconds = started.elapsed().as_secs_f64();
    let (raw_text, truncated) = extract_reply(config, &reply)?;
    let (plan, decode_error) = if raw_text.trim().is_empty() {
        (None, Some("empty response".to_string()))
    } else {
        match decode_plan_json(&raw_text) {
            Ok(mut p) => {
                p.gen_time_seconds = latency_seconds;
                (Some(p), None)
            }
            Err(e) => (None, Some(e.to_string())),
        }
    };
    Ok(PlannerResponse { raw_text, plan, decode_error, latency_seconds, truncated })
}
