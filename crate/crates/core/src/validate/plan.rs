use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanStep {
    pub name: String,
    pub parameters: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confirm_reasoning: Option<String>,
}

impl PlanStep {
    pub fn new<S: Into<String>>(name: impl Into<String>, parameters: impl IntoIterator<Item = S>) -> Self {
        PlanStep {
            name: name.into(),
            parameters: parameters.into_iter().map(Into::into).collect(),
            reason: None,
            confirm_reasoning: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanSource {
    Classical,
    Llm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub steps: Vec<PlanStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reasoning: Option<Vec<String>>,
    pub source: PlanSource,
    pub gen_time_seconds: f64,
}

impl Plan {
    pub fn new(steps: Vec<PlanStep>, source: PlanSource) -> Self {
        Plan { steps, reasoning: None, source, gen_time_seconds: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The first `n` steps as a plan of their own.
    pub fn prefix(&self, n: usize) -> Plan {
        Plan { steps: self.steps[..n.min(self.steps.len())].to_vec(), ..self.clone() }
    }
}

/// Text encoding of a plan handed to the validator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanFormat {
    /// JSON response in the `reasoning` / `plan` schema.
    Json,
    /// Fast Downward `sas_plan` lines.
    Sas,
}

impl std::str::FromStr for PlanFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(PlanFormat::Json),
            "sas" | "sas_plan" => Ok(PlanFormat::Sas),
            other => Err(format!("unknown plan format `{other}` (expected json or sas)")),
        }
    }
}
