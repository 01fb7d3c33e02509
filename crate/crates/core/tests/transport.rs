mod support;

use std::time::{Duration, Instant};

use planbench::planners::{request_llm_plan, LlmError, LlmPlannerConfig};
use support::stub::{chat_body, Reply, StubServer};

const ONE_STEP: &str = r#"{"reasoning": ["pick it up"], "plan": [{"name": "pick-up", "parameters": ["a"], "reason": "r", "confirm_reasoning": "ok"}]}"#;

fn config(url: &str) -> LlmPlannerConfig {
    let mut cfg = LlmPlannerConfig::new("stub", url, "stub-model");
    cfg.retry_backoff_ms = 10;
    cfg
}

#[test]
fn happy_path() {
    let server = StubServer::start(|_, _| Reply::ok(chat_body(ONE_STEP, "stop")));
    let resp = request_llm_plan(&config(&server.url), "system text", "user text").unwrap();
    assert!(!resp.truncated);
    let plan = resp.plan.unwrap();
    assert_eq!(plan.steps.len(), 1);
    assert_eq!(plan.steps[0].name, "pick-up");
    assert!(resp.latency_seconds >= 0.0);

    let req = &server.requests()[0];
    let body = req.json();
    assert_eq!(body["model"], "stub-model");
    assert_eq!(body["messages"][0]["content"], "system text");
    assert_eq!(body["messages"][1]["content"], "user text");
    assert_eq!(body["temperature"], 0.0);
    assert!(req.authorization.is_none());
}

#[test]
fn bearer_token_from_environment() {
    std::env::set_var("PLANBENCH_TRANSPORT_TEST_KEY", "sekrit");
    let server = StubServer::start(|_, _| Reply::ok(chat_body(ONE_STEP, "stop")));
    let mut cfg = config(&server.url);
    cfg.api_key_env_var = "PLANBENCH_TRANSPORT_TEST_KEY".into();
    request_llm_plan(&cfg, "s", "u").unwrap();
    assert_eq!(server.requests()[0].authorization.as_deref(), Some("Bearer sekrit"));
}

#[test]
fn truncated_response() {
    let cut = &ONE_STEP[..50];
    let server = StubServer::start(move |_, _| Reply::ok(chat_body(cut, "length")));
    let resp = request_llm_plan(&config(&server.url), "s", "u").unwrap();
    assert!(resp.truncated);
    assert!(resp.plan.is_none());
    assert!(resp.decode_error.is_some());
}

#[test]
fn server_errors_exhaust_retries() {
    let server = StubServer::start(|_, _| Reply::status(500));
    let err = request_llm_plan(&config(&server.url), "s", "u").unwrap_err();
    assert!(matches!(err, LlmError::Transport { attempts: 3, .. }), "{err:?}");
    assert_eq!(server.hits(), 3);
}

#[test]
fn retry_then_success() {
    let server = StubServer::start(|n, _| if n < 2 { Reply::status(503) } else { Reply::ok(chat_body(ONE_STEP, "stop")) });
    let resp = request_llm_plan(&config(&server.url), "s", "u").unwrap();
    assert!(resp.plan.is_some());
    assert_eq!(server.hits(), 3);
}

#[test]
fn auth_failure_is_not_retried() {
    let server = StubServer::start(|_, _| Reply::status(401));
    assert_eq!(request_llm_plan(&config(&server.url), "s", "u"), Err(LlmError::Auth(401)));
    assert_eq!(server.hits(), 1);
}

#[test]
fn slow_endpoint_times_out() {
    let server = StubServer::start(|_, _| Reply::ok(chat_body(ONE_STEP, "stop")).after(Duration::from_secs(3)));
    let mut cfg = config(&server.url);
    cfg.request_timeout_seconds = 1;
    let started = Instant::now();
    assert_eq!(request_llm_plan(&cfg, "s", "u"), Err(LlmError::Timeout(1)));
    assert!(started.elapsed() < Duration::from_secs(3));
    assert_eq!(server.hits(), 1);
}

#[test]
fn unreachable_endpoint() {
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/", listener.local_addr().unwrap());
    drop(listener);
    let mut cfg = config(&url);
    cfg.max_retries = 1;
    assert!(matches!(request_llm_plan(&cfg, "s", "u"), Err(LlmError::Transport { attempts: 2, .. })));
}
