//! Canonical PDDL rendering. Output re-parses to a structurally equal AST.

use std::fmt::Write;

use super::ast::*;

fn typed_list(items: &[Typed]) -> String {
    let mut out = String::new();
    for (i, t) in items.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{} - {}", t.name, t.ty);
    }
    out
}

fn formula(f: &Formula) -> String {
    match f {
        Formula::Atom(a) => a.to_string(),
        Formula::Not(a) => format!("(not {a})"),
        Formula::Eq(a, b) => format!("(= {a} {b})"),
        Formula::NotEq(a, b) => format!("(not (= {a} {b}))"),
        Formula::And(items) => {
            let parts: Vec<String> = items.iter().map(formula).collect();
            format!("(and {})", parts.join(" "))
        }
    }
}

fn effect(e: &EffectFormula) -> String {
    let mut parts: Vec<String> = e.adds.iter().map(|a| a.to_string()).collect();
    parts.extend(e.deletes.iter().map(|a| format!("(not {a})")));
    if let Some(c) = e.cost_increase {
        parts.push(format!("(increase ({TOTAL_COST}) {c})"));
    }
    format!("(and {})", parts.join(" "))
}

pub fn print_domain(d: &Domain) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (domain {})", d.name);
    if !d.requirements.is_empty() {
        let reqs: Vec<&str> = d.requirements.iter().map(|r| r.keyword()).collect();
        let _ = writeln!(out, "  (:requirements {})", reqs.join(" "));
    }
    if !d.types.is_empty() {
        let types: Vec<String> = d.types.iter().map(|t| format!("{} - {}", t.name, t.parent)).collect();
        let _ = writeln!(out, "  (:types {})", types.join(" "));
    }
    if !d.constants.is_empty() {
        let _ = writeln!(out, "  (:constants {})", typed_list(&d.constants));
    }
    out.push_str("  (:predicates");
    for p in &d.predicates {
        if p.params.is_empty() {
            let _ = write!(out, " ({})", p.name);
        } else {
            let _ = write!(out, " ({} {})", p.name, typed_list(&p.params));
        }
    }
    out.push_str(")\n");
    if !d.functions.is_empty() {
        let fs: Vec<String> = d.functions.iter().map(|f| format!("({f}) - number")).collect();
        let _ = writeln!(out, "  (:functions {})", fs.join(" "));
    }
    for a in &d.actions {
        let _ = writeln!(out, "  (:action {}", a.name);
        let _ = writeln!(out, "    :parameters ({})", typed_list(&a.params));
        if let Some(pre) = &a.precondition {
            let _ = writeln!(out, "    :precondition {}", formula(pre));
        }
        let _ = writeln!(out, "    :effect {})", effect(&a.effect));
    }
    out.push_str(")\n");
    out
}

pub fn print_problem(p: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {})", p.name);
    let _ = writeln!(out, "  (:domain {})", p.domain_name);
    let _ = writeln!(out, "  (:objects {})", typed_list(&p.objects));
    out.push_str("  (:init");
    for a in &p.init {
        let _ = write!(out, " {a}");
    }
    if p.minimize_total_cost {
        let _ = write!(out, " (= ({TOTAL_COST}) 0)");
    }
    out.push_str(")\n");
    let _ = writeln!(out, "  (:goal {})", formula(&p.goal));
    if p.minimize_total_cost {
        let _ = writeln!(out, "  (:metric minimize ({TOTAL_COST}))");
    }
    out.push_str(")\n");
    out
}
