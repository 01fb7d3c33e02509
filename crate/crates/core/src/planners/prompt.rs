//! The one-shot planning prompt.

/// Response template shown to the model. Key names are what the decoder reads.
pub const JSON_TEMPLATE: &str = r#"{
  "reasoning": [
    "A high-level explanation of the overall plan, describing how it transitions from the initial state to the goal."
  ],
  "plan": [
    {
      "name": "action_name",
      "parameters": ["arg1", "arg2"],
      "reason": "Explanation of why this action was chosen.",
      "confirm_reasoning": "Final validation statement."
    }
  ]
}"#;

fn system_text() -> String {
    let mut s = String::new();
    s.push_str(
        "You are a planning assistant. You will be given a PDDL domain and a PDDL problem. \
         Produce a sequence of actions from the domain that transforms the initial state of the problem \
         into a state satisfying its goal.\n\n",
    );
    s.push_str("Your response must contain:\n");
    s.push_str("1. A high-level reasoning section describing the overall approach.\n");
    s.push_str("2. A detailed plan, listed as a sequence of actions.\n\n");
    s.push_str(
        "Each action's \"name\" must match an action of the domain and \"parameters\" must list the \
         objects it is applied to, in the order the action declares them.\n\n",
    );
    s.push_str("Use exactly this JSON structure:\n");
    s.push_str(JSON_TEMPLATE);
    s.push_str("\n\nRespond with valid JSON only. Do not include any text outside the JSON object.\n");
    s
}

/// Returns `(system, user)` message texts. File contents are embedded verbatim.
pub fn build_prompt(domain_text: &str, problem_text: &str) -> (String, String) {
    let user = format!(
        "PDDL domain:\n{domain_text}\n\nPDDL problem:\n{problem_text}\n\nReturn the plan as JSON."
    );
    (system_text(), user)
}
