use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use super::state::{GroundAtom, State};
use super::types::TypeIndex;
use crate::pddl::{ActionSchema, Atom, Domain, Formula, Problem, Term};

/// One ground precondition literal, kept in schema declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Holds(GroundAtom),
    Absent(GroundAtom),
    Equal(String, String),
    NotEqual(String, String),
}

impl Condition {
    pub fn satisfied_in(&self, state: &State) -> bool {
        match self {
            Condition::Holds(a) => state.contains(a),
            Condition::Absent(a) => !state.contains(a),
            Condition::Equal(a, b) => a == b,
            Condition::NotEqual(a, b) => a != b,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Holds(a) => write!(f, "{} not in state", a.plain()),
            Condition::Absent(a) => write!(f, "{} in state but must be absent", a.plain()),
            Condition::Equal(a, b) => write!(f, "{a} = {b} does not hold"),
            Condition::NotEqual(a, b) => write!(f, "{a} != {b} does not hold"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundAction {
    pub name: String,
    pub args: Vec<String>,
    pub preconditions: Vec<Condition>,
    pub adds: BTreeSet<GroundAtom>,
    pub deletes: BTreeSet<GroundAtom>,
    pub cost: u64,
}

impl GroundAction {
    pub fn positive_preconditions(&self) -> impl Iterator<Item = &GroundAtom> {
        self.preconditions.iter().filter_map(|c| match c {
            Condition::Holds(a) => Some(a),
            _ => None,
        })
    }

    pub fn negative_preconditions(&self) -> impl Iterator<Item = &GroundAtom> {
        self.preconditions.iter().filter_map(|c| match c {
            Condition::Absent(a) => Some(a),
            _ => None,
        })
    }
}

impl fmt::Display for GroundAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.name)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundingError {
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("action `{action}` expects {expected} arguments, got {got}")]
    ArityMismatch { action: String, expected: usize, got: usize },
    #[error("argument `{object}` for parameter {param} is not of type {required_type}")]
    TypeMismatch { param: String, required_type: String, object: String },
}

/// A failed applicability check: the first violated precondition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub condition: Condition,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.condition.fmt(f)
    }
}

fn bind(term: &Term, binding: &HashMap<&str, &str>) -> String {
    match term {
        Term::Var(v) => binding.get(v.as_str()).map(|s| s.to_string()).unwrap_or_else(|| v.clone()),
        Term::Const(c) => c.clone(),
    }
}

fn bind_atom(atom: &Atom, binding: &HashMap<&str, &str>) -> GroundAtom {
    GroundAtom { predicate: atom.predicate.clone(), args: atom.args.iter().map(|t| bind(t, binding)).collect() }
}

fn push_conditions(f: &Formula, binding: &HashMap<&str, &str>, out: &mut Vec<Condition>) {
    match f {
        Formula::Atom(a) => out.push(Condition::Holds(bind_atom(a, binding))),
        Formula::Not(a) => out.push(Condition::Absent(bind_atom(a, binding))),
        Formula::Eq(a, b) => out.push(Condition::Equal(bind(a, binding), bind(b, binding))),
        Formula::NotEq(a, b) => out.push(Condition::NotEqual(bind(a, binding), bind(b, binding))),
        Formula::And(items) => items.iter().for_each(|i| push_conditions(i, binding, out)),
    }
}

/// Instantiates `schema` with `args`. Nothing is evaluated against a state.
pub fn ground_schema(schema: &ActionSchema, args: &[String], index: &TypeIndex) -> Result<GroundAction, GroundingError> {
    if args.len() != schema.params.len() {
        return Err(GroundingError::ArityMismatch {
            action: schema.name.clone(),
            expected: schema.params.len(),
            got: args.len(),
        });
    }
    for (param, arg) in schema.params.iter().zip(args) {
        if !index.has(&param.ty, arg) {
            return Err(GroundingError::TypeMismatch {
                param: param.name.clone(),
                required_type: param.ty.clone(),
                object: arg.clone(),
            });
        }
    }
    let binding: HashMap<&str, &str> =
        schema.params.iter().zip(args).map(|(p, a)| (p.name.as_str(), a.as_str())).collect();

    let mut preconditions = Vec::new();
    if let Some(pre) = &schema.precondition {
        push_conditions(pre, &binding, &mut preconditions);
    }
    Ok(GroundAction {
        name: schema.name.clone(),
        args: args.to_vec(),
        preconditions,
        adds: schema.effect.adds.iter().map(|a| bind_atom(a, &binding)).collect(),
        deletes: schema.effect.deletes.iter().map(|a| bind_atom(a, &binding)).collect(),
        cost: schema.effect.cost_increase.unwrap_or(0),
    })
}

/// Looks up the schema named `name` and grounds it.
pub fn ground_action(domain: &Domain, name: &str, args: &[String], index: &TypeIndex) -> Result<GroundAction, GroundingError> {
    let schema = domain.action(name).ok_or_else(|| GroundingError::UnknownAction(name.to_string()))?;
    ground_schema(schema, args, index)
}

/// Checks preconditions in declaration order and reports the first failure.
pub fn check_applicable(state: &State, action: &GroundAction) -> Result<(), Violation> {
    for (index, condition) in action.preconditions.iter().enumerate() {
        if !condition.satisfied_in(state) {
            return Err(Violation { index, condition: condition.clone() });
        }
    }
    Ok(())
}

pub fn is_applicable(state: &State, action: &GroundAction) -> bool {
    check_applicable(state, action).is_ok()
}

/// `(state \ deletes) ∪ adds`; an atom both added and deleted stays true.
pub fn apply_action(state: &State, action: &GroundAction) -> State {
    let mut next = state.clone();
    for d in &action.deletes {
        next.remove(d);
    }
    for a in &action.adds {
        next.insert(a.clone());
    }
    next
}

fn ground_term(t: &Term) -> &str {
    t.name()
}

fn goal_condition(f: &Formula) -> Condition {
    let atom = |a: &Atom| GroundAtom {
        predicate: a.predicate.clone(),
        args: a.args.iter().map(|t| ground_term(t).to_string()).collect(),
    };
    match f {
        Formula::Atom(a) => Condition::Holds(atom(a)),
        Formula::Not(a) => Condition::Absent(atom(a)),
        Formula::Eq(a, b) => Condition::Equal(ground_term(a).into(), ground_term(b).into()),
        Formula::NotEq(a, b) => Condition::NotEqual(ground_term(a).into(), ground_term(b).into()),
        Formula::And(_) => unreachable!("conjuncts are never nested"),
    }
}

/// First goal conjunct that fails in `state`, in declaration order.
pub fn unsatisfied_goal(state: &State, goal: &Formula) -> Option<Condition> {
    goal.conjuncts().iter().map(goal_condition).find(|c| !c.satisfied_in(state))
}

pub fn goal_satisfied(state: &State, goal: &Formula) -> bool {
    unsatisfied_goal(state, goal).is_none()
}

pub fn initial_state(problem: &Problem) -> State {
    problem
        .init
        .iter()
        .map(|a| GroundAtom { predicate: a.predicate.clone(), args: a.args.iter().map(|t| t.name().to_string()).collect() })
        .collect()
}
