//! Blocks-world simulator written against the physical picture (towers and
//! a hand) rather than the PDDL encoding. Shares no code with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Success,
    Failure { reason: &'static str, step: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub verdict: Verdict,
    pub executed: usize,
}

/// Where each block rests; `None` means on the table. A held block is absent.
#[derive(Debug, Clone, Default)]
struct World {
    rests_on: BTreeMap<String, Option<String>>,
    held: Option<String>,
}

impl World {
    fn on_top_of(&self, b: &str) -> bool {
        self.rests_on.values().any(|below| below.as_deref() == Some(b))
    }

    fn clear(&self, b: &str) -> bool {
        self.rests_on.contains_key(b) && !self.on_top_of(b)
    }

    fn holds(&self, fact: &[String]) -> bool {
        let arg = |i: usize| fact[i].as_str();
        match fact[0].as_str() {
            "on" => self.rests_on.get(arg(1)).is_some_and(|below| below.as_deref() == Some(arg(2))),
            "ontable" => self.rests_on.get(arg(1)).is_some_and(Option::is_none),
            "clear" => self.clear(arg(1)),
            "holding" => self.held.as_deref() == Some(arg(1)),
            "handempty" => self.held.is_none(),
            other => panic!("oracle does not know `{other}`"),
        }
    }
}

/// Innermost parenthesised groups of `text` as word lists.
fn groups(text: &str) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    let mut current: Option<String> = None;
    for c in text.chars() {
        match c {
            '(' => current = Some(String::new()),
            ')' => {
                if let Some(g) = current.take() {
                    out.push(g.split_whitespace().map(|w| w.to_lowercase()).collect());
                }
            }
            _ => {
                if let Some(g) = current.as_mut() {
                    g.push(c);
                }
            }
        }
    }
    out
}

pub struct Task {
    blocks: BTreeSet<String>,
    start: World,
    goal: Vec<Vec<String>>,
}

impl Task {
    /// Reads the generator's problem text by plain string search.
    pub fn from_pddl(text: &str) -> Task {
        let text = text.to_lowercase();
        let after = |key: &str| &text[text.find(key).unwrap_or_else(|| panic!("no {key}")) + key.len()..];
        let objects = after("(:objects");
        let objects = &objects[..objects.find(')').unwrap()];
        let blocks: BTreeSet<String> = objects.split_whitespace().filter(|w| *w != "-" && *w != "block").map(String::from).collect();

        let init = after("(:init");
        let init = &init[..init.find("(:goal").unwrap()];
        let mut start = World::default();
        for fact in groups(init) {
            match fact[0].as_str() {
                "ontable" => {
                    start.rests_on.insert(fact[1].clone(), None);
                }
                "on" => {
                    start.rests_on.insert(fact[1].clone(), Some(fact[2].clone()));
                }
                "holding" => start.held = Some(fact[1].clone()),
                // derived from the towers
                "clear" | "handempty" => {}
                other => panic!("unexpected init fact {other}"),
            }
        }
        let goal = groups(after("(:goal")).into_iter().filter(|g| !g.is_empty() && g[0] != "and").collect();
        Task { blocks, start, goal }
    }

    pub fn run(&self, steps: &[(String, Vec<String>)]) -> OracleResult {
        let mut w = self.start.clone();
        for (i, (name, args)) in steps.iter().enumerate() {
            let fail = |reason| OracleResult { verdict: Verdict::Failure { reason, step: Some(i) }, executed: i };
            let arity = match name.as_str() {
                "pick-up" | "put-down" => 1,
                "stack" | "unstack" => 2,
                _ => return fail("unknown_action"),
            };
            if args.len() != arity {
                return fail("arity_mismatch");
            }
            if args.iter().any(|a| !self.blocks.contains(a)) {
                return fail("type_mismatch");
            }
            let x = &args[0];
            let ok = match name.as_str() {
                "pick-up" => w.held.is_none() && w.rests_on.get(x) == Some(&None) && w.clear(x),
                "put-down" => w.held.as_ref() == Some(x),
                "stack" => w.held.as_ref() == Some(x) && w.clear(&args[1]),
                _ => w.held.is_none() && w.clear(x) && w.rests_on.get(x) == Some(&Some(args[1].clone())),
            };
            if !ok {
                return fail("precondition_violation");
            }
            match name.as_str() {
                "pick-up" | "unstack" => {
                    w.rests_on.remove(x);
                    w.held = Some(x.clone());
                }
                "put-down" => {
                    w.held = None;
                    w.rests_on.insert(x.clone(), None);
                }
                _ => {
                    w.held = None;
                    w.rests_on.insert(x.clone(), Some(args[1].clone()));
                }
            }
        }
        let verdict = if self.goal.iter().all(|g| w.holds(g)) {
            Verdict::Success
        } else {
            Verdict::Failure { reason: "goal_not_satisfied", step: None }
        };
        OracleResult { verdict, executed: steps.len() }
    }
}
