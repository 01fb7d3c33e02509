use std::collections::{BTreeSet, HashMap};

use crate::pddl::{Domain, Problem, OBJECT_TYPE};

/// Objects reachable under each type, closed over the type forest.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TypeIndex {
    members: HashMap<String, BTreeSet<String>>,
}

impl TypeIndex {
    pub fn build(domain: &Domain, problem: &Problem) -> Self {
        let mut members: HashMap<String, BTreeSet<String>> = HashMap::new();
        members.insert(OBJECT_TYPE.to_string(), BTreeSet::new());
        for t in &domain.types {
            members.entry(t.name.clone()).or_default();
        }
        for obj in domain.constants.iter().chain(&problem.objects) {
            members.get_mut(OBJECT_TYPE).unwrap().insert(obj.name.clone());
            let mut cur = obj.ty.as_str();
            // walk to the root; parsing guarantees the forest is acyclic
            for _ in 0..=domain.types.len() {
                if cur == OBJECT_TYPE {
                    break;
                }
                members.entry(cur.to_string()).or_default().insert(obj.name.clone());
                match domain.parent_of(cur) {
                    Some(p) => cur = p,
                    None => break,
                }
            }
        }
        TypeIndex { members }
    }

    pub fn objects_of(&self, ty: &str) -> Option<&BTreeSet<String>> {
        self.members.get(ty)
    }

    pub fn has(&self, ty: &str, object: &str) -> bool {
        self.members.get(ty).is_some_and(|s| s.contains(object))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{parse_domain_str, parse_problem_str};

    const D: &str = "(define (domain d) (:requirements :typing)
        (:types block) (:predicates (clear ?x - block)))";

    #[test]
    fn single_level_forest() {
        let d = parse_domain_str(D).unwrap();
        let p = parse_problem_str(
            "(define (problem p) (:domain d) (:objects a b c - block) (:init) (:goal (clear a)))",
            &d,
        )
        .unwrap();
        let idx = TypeIndex::build(&d, &p);
        let abc: BTreeSet<String> = ["a", "b", "c"].into_iter().map(String::from).collect();
        assert_eq!(idx.objects_of("object"), Some(&abc));
        assert_eq!(idx.objects_of("block"), Some(&abc));
    }

    #[test]
    fn no_objects() {
        let d = parse_domain_str(
            "(define (domain d) (:types block) (:predicates (clear ?x - block) (handempty)))",
        )
        .unwrap();
        let p = parse_problem_str("(define (problem p) (:domain d) (:init) (:goal (handempty)))", &d).unwrap();
        let idx = TypeIndex::build(&d, &p);
        assert!(idx.objects_of("object").unwrap().is_empty());
        assert!(idx.objects_of("block").unwrap().is_empty());
    }

    #[test]
    fn nested_types() {
        let d = parse_domain_str(
            "(define (domain d) (:types container - object shot shaker - container)
             (:predicates (clean ?c - container)))",
        )
        .unwrap();
        let p = parse_problem_str(
            "(define (problem p) (:domain d) (:objects s1 - shot k - shaker) (:init) (:goal (clean s1)))",
            &d,
        )
        .unwrap();
        let idx = TypeIndex::build(&d, &p);
        assert!(idx.has("container", "s1"));
        assert!(idx.has("container", "k"));
        assert!(idx.has("shot", "s1"));
        assert!(!idx.has("shot", "k"));
    }
}
