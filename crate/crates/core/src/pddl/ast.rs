//! Abstract syntax for the typed-STRIPS subset.

use std::collections::BTreeSet;
use std::fmt;

pub const OBJECT_TYPE: &str = "object";
pub const TOTAL_COST: &str = "total-cost";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Requirement {
    Strips,
    Typing,
    NegativePreconditions,
    Equality,
    ActionCosts,
}

impl Requirement {
    pub fn from_keyword(kw: &str) -> Option<Self> {
        Some(match kw {
            ":strips" => Requirement::Strips,
            ":typing" => Requirement::Typing,
            ":negative-preconditions" => Requirement::NegativePreconditions,
            ":equality" => Requirement::Equality,
            ":action-costs" => Requirement::ActionCosts,
            _ => return None,
        })
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Requirement::Strips => ":strips",
            Requirement::Typing => ":typing",
            Requirement::NegativePreconditions => ":negative-preconditions",
            Requirement::Equality => ":equality",
            Requirement::ActionCosts => ":action-costs",
        }
    }
}

/// A name paired with its declared type (`?x - block`, `a - block`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Typed {
    pub name: String,
    pub ty: String,
}

impl Typed {
    pub fn new(name: impl Into<String>, ty: impl Into<String>) -> Self {
        Typed { name: name.into(), ty: ty.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDecl {
    pub name: String,
    pub parent: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDecl {
    pub name: String,
    pub params: Vec<Typed>,
}

impl PredicateDecl {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Var(s) | Term::Const(s) => s,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

/// Negation-normal conjunctive formulas. `Not` only ever wraps an atom;
/// negated equality has its own variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom(Atom),
    Not(Atom),
    Eq(Term, Term),
    NotEq(Term, Term),
    /// Always non-empty and never directly nested.
    And(Vec<Formula>),
}

impl Formula {
    /// Conjuncts in declaration order, flattening a top-level `And`.
    pub fn conjuncts(&self) -> &[Formula] {
        match self {
            Formula::And(items) => items,
            other => std::slice::from_ref(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EffectFormula {
    pub adds: Vec<Atom>,
    pub deletes: Vec<Atom>,
    /// Sum of the `(increase (total-cost) n)` clauses, if any.
    pub cost_increase: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<Typed>,
    /// `None` for an empty precondition.
    pub precondition: Option<Formula>,
    pub effect: EffectFormula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    pub requirements: BTreeSet<Requirement>,
    pub types: Vec<TypeDecl>,
    pub constants: Vec<Typed>,
    pub predicates: Vec<PredicateDecl>,
    /// Only `total-cost` is accepted; kept for cost bookkeeping.
    pub functions: Vec<String>,
    pub actions: Vec<ActionSchema>,
}

impl Domain {
    pub fn predicate(&self, name: &str) -> Option<&PredicateDecl> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn action(&self, name: &str) -> Option<&ActionSchema> {
        self.actions.iter().find(|a| a.name == name)
    }

    pub fn has_type(&self, name: &str) -> bool {
        name == OBJECT_TYPE || self.types.iter().any(|t| t.name == name)
    }

    pub fn parent_of(&self, name: &str) -> Option<&str> {
        self.types.iter().find(|t| t.name == name).map(|t| t.parent.as_str())
    }

    /// Whether `ty` equals `ancestor` or descends from it in the type forest.
    pub fn is_subtype(&self, ty: &str, ancestor: &str) -> bool {
        if ancestor == OBJECT_TYPE {
            return true;
        }
        let mut cur = ty;
        // the forest is acyclic once parsed, but bound the walk anyway
        for _ in 0..=self.types.len() {
            if cur == ancestor {
                return true;
            }
            match self.parent_of(cur) {
                Some(p) => cur = p,
                None => return false,
            }
        }
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub domain_name: String,
    pub objects: Vec<Typed>,
    /// Ground atoms; every term is a `Term::Const`.
    pub init: Vec<Atom>,
    pub goal: Formula,
    /// `(:metric minimize (total-cost))` was present.
    pub minimize_total_cost: bool,
}

impl Problem {
    pub fn object_type(&self, name: &str) -> Option<&str> {
        self.objects.iter().find(|o| o.name == name).map(|o| o.ty.as_str())
    }
}
