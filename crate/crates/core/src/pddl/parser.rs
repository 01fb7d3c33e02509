//! Recursive-descent parser from tokens to validated [`Domain`] / [`Problem`].
//!
//! Tokens are first folded into a small s-expression tree so that every
//! construct can report the line it started on.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::ast::*;
use super::error::PddlError;
use super::lexer::{Token, TokenKind};

type Result<T> = std::result::Result<T, PddlError>;

#[derive(Debug, Clone)]
enum Sexp {
    List { items: Vec<Sexp>, line: u32 },
    Leaf(Token),
}

impl Sexp {
    fn line(&self) -> u32 {
        match self {
            Sexp::List { line, .. } => *line,
            Sexp::Leaf(t) => t.line,
        }
    }

    fn describe(&self) -> String {
        match self {
            Sexp::List { .. } => "`(`".to_string(),
            Sexp::Leaf(t) => format!("`{}`", t.text),
        }
    }

    fn as_list(&self, expected: &str) -> Result<&[Sexp]> {
        match self {
            Sexp::List { items, .. } => Ok(items),
            Sexp::Leaf(t) => Err(syntax(expected, &format!("`{}`", t.text), t.line)),
        }
    }

    fn leaf(&self) -> Option<&Token> {
        match self {
            Sexp::Leaf(t) => Some(t),
            Sexp::List { .. } => None,
        }
    }

    fn symbol(&self, expected: &str) -> Result<&str> {
        match self {
            Sexp::Leaf(t) if t.kind == TokenKind::Symbol => Ok(&t.text),
            other => Err(syntax(expected, &other.describe(), other.line())),
        }
    }

    /// Head token text of a list, if it is a leaf.
    fn head(&self) -> Option<&str> {
        match self {
            Sexp::List { items, .. } => items.first().and_then(|s| s.leaf()).map(|t| t.text.as_str()),
            Sexp::Leaf(_) => None,
        }
    }
}

fn syntax(expected: &str, found: &str, line: u32) -> PddlError {
    PddlError::Syntax { expected: expected.to_string(), found: found.to_string(), line }
}

fn unsupported(construct: &str, line: u32) -> PddlError {
    PddlError::UnsupportedConstruct { construct: construct.to_string(), line }
}

fn read_tree(tokens: &[Token]) -> Result<Sexp> {
    let mut stack: Vec<(Vec<Sexp>, u32)> = Vec::new();
    let mut done: Option<Sexp> = None;
    for tok in tokens {
        if done.is_some() {
            return Err(syntax("end of input", &format!("`{}`", tok.text), tok.line));
        }
        match tok.kind {
            TokenKind::LParen => stack.push((Vec::new(), tok.line)),
            TokenKind::RParen => {
                let (items, line) = stack.pop().ok_or_else(|| syntax("`(`", "`)`", tok.line))?;
                let list = Sexp::List { items, line };
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => done = Some(list),
                }
            }
            _ => match stack.last_mut() {
                Some((parent, _)) => parent.push(Sexp::Leaf(tok.clone())),
                None => return Err(syntax("`(`", &format!("`{}`", tok.text), tok.line)),
            },
        }
    }
    if let Some((_, line)) = stack.last() {
        let last = tokens.last().map(|t| t.line).unwrap_or(*line);
        return Err(syntax("`)`", "end of input", last));
    }
    done.ok_or_else(|| syntax("`(define`", "end of input", 1))
}

/// Splits `(define (<kind> <name>) sections...)` into name and sections.
fn define_header<'a>(tree: &'a Sexp, kind: &str) -> Result<(String, &'a [Sexp])> {
    let items = tree.as_list("`(define`")?;
    match items.first() {
        Some(s) if s.symbol("`define`").ok() == Some("define") => {}
        Some(s) => return Err(syntax("`define`", &s.describe(), s.line())),
        None => return Err(syntax("`define`", "`)`", tree.line())),
    }
    let header = items.get(1).ok_or_else(|| syntax(&format!("`({kind} ...)`"), "`)`", tree.line()))?;
    let h = header.as_list(&format!("`({kind} ...)`"))?;
    match h.first().map(|s| s.symbol(kind)) {
        Some(Ok(k)) if k == kind => {}
        _ => {
            let found = h.first().map(|s| s.describe()).unwrap_or_else(|| "`)`".into());
            return Err(syntax(&format!("`{kind}`"), &found, header.line()));
        }
    }
    if h.len() != 2 {
        return Err(syntax(&format!("{kind} name"), &format!("{} items", h.len().saturating_sub(1)), header.line()));
    }
    let name = h[1].symbol(&format!("{kind} name"))?.to_string();
    Ok((name, &items[2..]))
}

/// Section keyword of a `(:keyword ...)` list.
fn section_keyword(s: &Sexp) -> Result<&str> {
    let items = s.as_list("section")?;
    match items.first().and_then(|x| x.leaf()) {
        Some(t) if t.kind == TokenKind::Keyword => Ok(&t.text),
        _ => {
            let found = items.first().map(|x| x.describe()).unwrap_or_else(|| "`)`".into());
            Err(syntax("section keyword", &found, s.line()))
        }
    }
}

fn parse_requirements(items: &[Sexp]) -> Result<BTreeSet<Requirement>> {
    let mut reqs = BTreeSet::new();
    for item in items {
        let tok = item.leaf().filter(|t| t.kind == TokenKind::Keyword);
        let tok = tok.ok_or_else(|| syntax("requirement keyword", &item.describe(), item.line()))?;
        match Requirement::from_keyword(&tok.text) {
            Some(r) => {
                reqs.insert(r);
            }
            None => return Err(unsupported(&tok.text, tok.line)),
        }
    }
    Ok(reqs)
}

/// Parses `a b - t c - u d` style lists. Untyped trailing names default to
/// `object`.
fn parse_typed_list(items: &[Sexp], name_kind: TokenKind, what: &str) -> Result<Vec<Typed>> {
    let mut out = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let item = &items[i];
        match item {
            Sexp::Leaf(t) if t.kind == TokenKind::Symbol && t.text == "-" => {
                if pending.is_empty() {
                    return Err(syntax(what, "`-`", t.line));
                }
                let ty_item = items.get(i + 1).ok_or_else(|| syntax("type name", "`)`", t.line))?;
                if ty_item.head() == Some("either") {
                    return Err(unsupported("either", ty_item.line()));
                }
                let ty = ty_item.symbol("type name")?;
                out.extend(pending.drain(..).map(|n| Typed::new(n, ty)));
                i += 2;
            }
            Sexp::Leaf(t) if t.kind == name_kind => {
                pending.push(t.text.clone());
                i += 1;
            }
            other => return Err(syntax(what, &other.describe(), other.line())),
        }
    }
    out.extend(pending.into_iter().map(|n| Typed::new(n, OBJECT_TYPE)));
    Ok(out)
}

fn check_unique<'a>(names: impl IntoIterator<Item = &'a str>, kind: &'static str) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(PddlError::DuplicateName { kind, name: n.to_string() });
        }
    }
    Ok(())
}

/// Name resolution context for formulas.
struct Scope<'a> {
    name: &'a str,
    predicates: &'a HashMap<&'a str, usize>,
    params: &'a [Typed],
    constants: &'a HashSet<&'a str>,
}

impl Scope<'_> {
    fn term(&self, s: &Sexp) -> Result<Term> {
        match s {
            Sexp::Leaf(t) if t.kind == TokenKind::Variable => {
                if self.params.iter().any(|p| p.name == t.text) {
                    Ok(Term::Var(t.text.clone()))
                } else {
                    Err(PddlError::UnknownVariable { name: t.text.clone(), scope: self.name.to_string(), line: t.line })
                }
            }
            Sexp::Leaf(t) if t.kind == TokenKind::Symbol => {
                if self.constants.contains(t.text.as_str()) {
                    Ok(Term::Const(t.text.clone()))
                } else {
                    Err(PddlError::UnknownObject { name: t.text.clone(), line: t.line })
                }
            }
            Sexp::List { line, .. } => {
                // a nested list in argument position is a function term
                Err(unsupported("function term", *line))
            }
            other => Err(syntax("term", &other.describe(), other.line())),
        }
    }

    fn atom(&self, items: &[Sexp], line: u32) -> Result<Atom> {
        let pred = items[0].symbol("predicate name")?;
        let arity = *self
            .predicates
            .get(pred)
            .ok_or_else(|| PddlError::UnknownPredicate { name: pred.to_string(), line })?;
        let args = items[1..].iter().map(|a| self.term(a)).collect::<Result<Vec<_>>>()?;
        if args.len() != arity {
            return Err(PddlError::ArityMismatch { predicate: pred.to_string(), expected: arity, found: args.len(), line });
        }
        Ok(Atom { predicate: pred.to_string(), args })
    }

    /// `None` for an empty conjunction.
    fn formula(&self, s: &Sexp) -> Result<Option<Formula>> {
        let items = s.as_list("formula")?;
        let line = s.line();
        let Some(head) = items.first() else {
            return Ok(None);
        };
        let head_text = match head.leaf() {
            Some(t) if t.kind == TokenKind::Symbol => t.text.as_str(),
            Some(t) => return Err(syntax("formula", &format!("`{}`", t.text), t.line)),
            None => return Err(syntax("formula head", "`(`", head.line())),
        };
        match head_text {
            "and" => {
                let mut parts = Vec::new();
                for child in &items[1..] {
                    match self.formula(child)? {
                        Some(Formula::And(inner)) => parts.extend(inner),
                        Some(f) => parts.push(f),
                        None => {}
                    }
                }
                Ok(if parts.is_empty() { None } else { Some(Formula::And(parts)) })
            }
            "not" => {
                if items.len() != 2 {
                    return Err(syntax("one formula under `not`", &format!("{} items", items.len() - 1), line));
                }
                match self.formula(&items[1])? {
                    Some(Formula::Atom(a)) => Ok(Some(Formula::Not(a))),
                    Some(Formula::Eq(a, b)) => Ok(Some(Formula::NotEq(a, b))),
                    _ => Err(unsupported("negated compound formula", line)),
                }
            }
            "=" => {
                if items.len() != 3 {
                    return Err(syntax("two terms under `=`", &format!("{} items", items.len() - 1), line));
                }
                Ok(Some(Formula::Eq(self.term(&items[1])?, self.term(&items[2])?)))
            }
            "or" | "imply" | "exists" | "forall" | "when" | "preference" => Err(unsupported(head_text, line)),
            _ => Ok(Some(Formula::Atom(self.atom(items, line)?))),
        }
    }

    fn effect(&self, s: &Sexp, out: &mut EffectFormula) -> Result<()> {
        let items = s.as_list("effect")?;
        let line = s.line();
        let Some(head) = items.first() else {
            return Ok(());
        };
        let head_text = head.symbol("effect")?;
        match head_text {
            "and" => {
                for child in &items[1..] {
                    self.effect(child, out)?;
                }
                Ok(())
            }
            "not" => {
                let inner = items.get(1).ok_or_else(|| syntax("atom under `not`", "`)`", line))?;
                let inner_items = inner.as_list("atom")?;
                if items.len() != 2 || inner_items.is_empty() {
                    return Err(syntax("one atom under `not`", &inner.describe(), line));
                }
                match inner.head() {
                    Some("=") => Err(unsupported("equality in effect", line)),
                    Some(h) if is_compound_head(h) => Err(unsupported(h, inner.line())),
                    _ => {
                        out.deletes.push(self.atom(inner_items, inner.line())?);
                        Ok(())
                    }
                }
            }
            "increase" => {
                let is_total_cost = items.len() == 3
                    && items[1].head() == Some(TOTAL_COST)
                    && items[1].as_list("").map(|l| l.len()) == Ok(1);
                if !is_total_cost {
                    return Err(unsupported("numeric effect", line));
                }
                let n = items[2]
                    .leaf()
                    .and_then(|t| t.text.parse::<u64>().ok())
                    .ok_or_else(|| unsupported("non-constant cost increase", line))?;
                *out.cost_increase.get_or_insert(0) += n;
                Ok(())
            }
            "decrease" | "assign" | "scale-up" | "scale-down" => Err(unsupported("numeric effect", line)),
            h if is_compound_head(h) => Err(unsupported(h, line)),
            "=" => Err(unsupported("equality in effect", line)),
            _ => {
                out.adds.push(self.atom(items, line)?);
                Ok(())
            }
        }
    }
}

fn is_compound_head(h: &str) -> bool {
    matches!(h, "forall" | "when" | "exists" | "or" | "imply")
}

fn check_type_forest(types: &[TypeDecl]) -> Result<()> {
    let parents: HashMap<&str, &str> = types.iter().map(|t| (t.name.as_str(), t.parent.as_str())).collect();
    for t in types {
        let mut cur = t.parent.as_str();
        let mut steps = 0;
        while cur != OBJECT_TYPE {
            if cur == t.name || steps > types.len() {
                return Err(PddlError::TypeCycle { name: t.name.clone() });
            }
            cur = parents.get(cur).copied().unwrap_or(OBJECT_TYPE);
            steps += 1;
        }
    }
    Ok(())
}

pub fn parse_domain(tokens: &[Token]) -> Result<Domain> {
    let tree = read_tree(tokens)?;
    let (name, sections) = define_header(&tree, "domain")?;

    let mut requirements = BTreeSet::new();
    let mut types: Vec<TypeDecl> = Vec::new();
    let mut constants: Vec<Typed> = Vec::new();
    let mut predicates: Vec<PredicateDecl> = Vec::new();
    let mut functions: Vec<String> = Vec::new();
    let mut action_sexps: Vec<&Sexp> = Vec::new();
    let mut seen_sections = HashSet::new();

    for section in sections {
        let kw = section_keyword(section)?;
        let body = &section.as_list("section")?[1..];
        if kw != ":action" && !seen_sections.insert(kw.to_string()) {
            return Err(PddlError::DuplicateName { kind: "section", name: kw.to_string() });
        }
        match kw {
            ":requirements" => requirements = parse_requirements(body)?,
            ":types" => {
                for t in parse_typed_list(body, TokenKind::Symbol, "type name")? {
                    if t.name == OBJECT_TYPE {
                        continue;
                    }
                    types.push(TypeDecl { name: t.name, parent: t.ty });
                }
            }
            ":constants" => constants = parse_typed_list(body, TokenKind::Symbol, "constant name")?,
            ":predicates" => {
                for p in body {
                    let items = p.as_list("predicate declaration")?;
                    let pname = items
                        .first()
                        .ok_or_else(|| syntax("predicate name", "`)`", p.line()))?
                        .symbol("predicate name")?;
                    let params = parse_typed_list(&items[1..], TokenKind::Variable, "predicate parameter")?;
                    check_unique(params.iter().map(|t| t.name.as_str()), "parameter")?;
                    predicates.push(PredicateDecl { name: pname.to_string(), params });
                }
            }
            ":functions" => {
                let mut i = 0;
                while i < body.len() {
                    let f = &body[i];
                    match f {
                        Sexp::List { items, line } => {
                            let fname = items.first().map(|x| x.symbol("function name")).transpose()?;
                            match (fname, items.len()) {
                                (Some(TOTAL_COST), 1) => functions.push(TOTAL_COST.to_string()),
                                _ => return Err(unsupported("numeric fluent", *line)),
                            }
                            i += 1;
                        }
                        Sexp::Leaf(t) if t.text == "-" => {
                            match body.get(i + 1).and_then(|s| s.leaf()).map(|t| t.text.as_str()) {
                                Some("number") => i += 2,
                                _ => return Err(unsupported("non-numeric function type", t.line)),
                            }
                        }
                        other => return Err(syntax("function declaration", &other.describe(), other.line())),
                    }
                }
            }
            ":action" => action_sexps.push(section),
            other => return Err(unsupported(other, section.line())),
        }
    }

    // Parents used without their own declaration become children of `object`.
    let declared: HashSet<String> = types.iter().map(|t| t.name.clone()).collect();
    let mut implicit: Vec<String> = Vec::new();
    for t in &types {
        if t.parent != OBJECT_TYPE && !declared.contains(&t.parent) && !implicit.contains(&t.parent) {
            implicit.push(t.parent.clone());
        }
    }
    types.extend(implicit.into_iter().map(|n| TypeDecl { name: n, parent: OBJECT_TYPE.to_string() }));
    check_unique(types.iter().map(|t| t.name.as_str()), "type")?;
    check_type_forest(&types)?;

    let type_known = |ty: &str| ty == OBJECT_TYPE || types.iter().any(|t| t.name == ty);
    let type_line = tree.line();
    check_unique(constants.iter().map(|c| c.name.as_str()), "constant")?;
    for c in &constants {
        if !type_known(&c.ty) {
            return Err(PddlError::UnknownType { name: c.ty.clone(), line: type_line });
        }
    }
    check_unique(predicates.iter().map(|p| p.name.as_str()), "predicate")?;
    for p in &predicates {
        for param in &p.params {
            if !type_known(&param.ty) {
                return Err(PddlError::UnknownType { name: param.ty.clone(), line: type_line });
            }
        }
    }

    let arities: HashMap<&str, usize> = predicates.iter().map(|p| (p.name.as_str(), p.arity())).collect();
    let const_names: HashSet<&str> = constants.iter().map(|c| c.name.as_str()).collect();
    let mut actions = Vec::new();
    for sexp in action_sexps {
        let action = parse_action(sexp, &arities, &const_names)?;
        for param in &action.params {
            if !type_known(&param.ty) {
                return Err(PddlError::UnknownType { name: param.ty.clone(), line: sexp.line() });
            }
        }
        actions.push(action);
    }
    check_unique(actions.iter().map(|a| a.name.as_str()), "action")?;

    Ok(Domain { name, requirements, types, constants, predicates, functions, actions })
}

fn parse_action(sexp: &Sexp, arities: &HashMap<&str, usize>, constants: &HashSet<&str>) -> Result<ActionSchema> {
    let items = sexp.as_list("action")?;
    let name = items
        .get(1)
        .ok_or_else(|| syntax("action name", "`)`", sexp.line()))?
        .symbol("action name")?
        .to_string();

    let mut params: Vec<Typed> = Vec::new();
    let mut pre_sexp = None;
    let mut eff_sexp = None;
    let mut seen = HashSet::new();
    let mut i = 2;
    while i < items.len() {
        let key = match items[i].leaf() {
            Some(t) if t.kind == TokenKind::Keyword => t,
            _ => return Err(syntax("action field keyword", &items[i].describe(), items[i].line())),
        };
        let value = items.get(i + 1).ok_or_else(|| syntax("field value", "`)`", key.line))?;
        if !seen.insert(key.text.as_str()) {
            return Err(PddlError::DuplicateName { kind: "action field", name: key.text.clone() });
        }
        match key.text.as_str() {
            ":parameters" => {
                params = parse_typed_list(value.as_list("parameter list")?, TokenKind::Variable, "parameter")?;
            }
            ":precondition" => pre_sexp = Some(value),
            ":effect" => eff_sexp = Some(value),
            other => return Err(unsupported(other, key.line)),
        }
        i += 2;
    }
    check_unique(params.iter().map(|p| p.name.as_str()), "parameter")?;

    let scope = Scope { name: &name, predicates: arities, params: &params, constants };
    let precondition = match pre_sexp {
        Some(s) => scope.formula(s)?,
        None => None,
    };
    let mut effect = EffectFormula::default();
    if let Some(s) = eff_sexp {
        scope.effect(s, &mut effect)?;
    }
    Ok(ActionSchema { name, params, precondition, effect })
}

pub fn parse_problem(tokens: &[Token], domain: &Domain) -> Result<Problem> {
    let tree = read_tree(tokens)?;
    let (name, sections) = define_header(&tree, "problem")?;

    let mut domain_name: Option<String> = None;
    let mut objects: Vec<Typed> = Vec::new();
    let mut init_sexps: &[Sexp] = &[];
    let mut goal_sexp: Option<&Sexp> = None;
    let mut minimize_total_cost = false;
    let mut seen = HashSet::new();

    for section in sections {
        let kw = section_keyword(section)?;
        let body = &section.as_list("section")?[1..];
        if !seen.insert(kw.to_string()) {
            return Err(PddlError::DuplicateName { kind: "section", name: kw.to_string() });
        }
        match kw {
            ":domain" => {
                let d = body.first().ok_or_else(|| syntax("domain name", "`)`", section.line()))?;
                domain_name = Some(d.symbol("domain name")?.to_string());
            }
            ":requirements" => {
                parse_requirements(body)?;
            }
            ":objects" => objects = parse_typed_list(body, TokenKind::Symbol, "object name")?,
            ":init" => init_sexps = body,
            ":goal" => {
                if body.len() != 1 {
                    return Err(syntax("one goal formula", &format!("{} items", body.len()), section.line()));
                }
                goal_sexp = Some(&body[0]);
            }
            ":metric" => {
                let ok = body.len() == 2
                    && body[0].leaf().map(|t| t.text.as_str()) == Some("minimize")
                    && body[1].head() == Some(TOTAL_COST)
                    && body[1].as_list("").map(|l| l.len()) == Ok(1);
                if !ok {
                    return Err(unsupported("metric", section.line()));
                }
                minimize_total_cost = true;
            }
            other => return Err(unsupported(other, section.line())),
        }
    }

    let domain_name = domain_name.ok_or_else(|| syntax("`(:domain ...)`", "nothing", tree.line()))?;
    if domain_name != domain.name {
        return Err(PddlError::DomainMismatch { expected: domain.name.clone(), found: domain_name });
    }

    check_unique(domain.constants.iter().chain(&objects).map(|o| o.name.as_str()), "object")?;
    for o in &objects {
        if !domain.has_type(&o.ty) {
            return Err(PddlError::UnknownType { name: o.ty.clone(), line: tree.line() });
        }
    }

    let arities: HashMap<&str, usize> = domain.predicates.iter().map(|p| (p.name.as_str(), p.arity())).collect();
    let names: HashSet<&str> = domain.constants.iter().chain(&objects).map(|o| o.name.as_str()).collect();
    let scope = Scope { name: "goal", predicates: &arities, params: &[], constants: &names };

    let mut init = Vec::new();
    for fact in init_sexps {
        let items = fact.as_list("initial fact")?;
        match fact.head() {
            Some("=") => {
                // `(= (total-cost) 0)` is accepted and carries no state
                let ok = items.len() == 3
                    && items[1].head() == Some(TOTAL_COST)
                    && items[1].as_list("").map(|l| l.len()) == Ok(1)
                    && items[2].leaf().is_some_and(|t| t.text.parse::<u64>().is_ok());
                if !ok {
                    return Err(unsupported("numeric fluent", fact.line()));
                }
            }
            Some("not") => return Err(unsupported("negative initial fact", fact.line())),
            Some("and") | Some("forall") | Some("at") => {
                return Err(unsupported(fact.head().unwrap_or_default(), fact.line()))
            }
            _ if items.is_empty() => return Err(syntax("initial fact", "`()`", fact.line())),
            _ => init.push(scope.atom(items, fact.line())?),
        }
    }

    let goal_sexp = goal_sexp.ok_or_else(|| syntax("`(:goal ...)`", "nothing", tree.line()))?;
    let goal = scope
        .formula(goal_sexp)?
        .ok_or_else(|| syntax("non-empty goal", "empty conjunction", goal_sexp.line()))?;

    Ok(Problem { name, domain_name, objects, init, goal, minimize_total_cost })
}
