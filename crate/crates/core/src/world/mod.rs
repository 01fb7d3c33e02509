//! Grounding and STRIPS state-transition semantics.
//!
//! Grounding is lazy: only the actions a plan names are instantiated.

mod ground;
mod state;
mod types;

pub use ground::{
    apply_action, check_applicable, goal_satisfied, ground_action, ground_schema, initial_state, is_applicable,
    unsatisfied_goal, Condition, GroundAction, GroundingError, Violation,
};
pub use state::{GroundAtom, State};
pub use types::TypeIndex;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{parse_domain_str, parse_problem_str, Domain, Formula, Problem};

    const BLOCKS: &str = include_str!("../../../../benchmarks/blocks/domain.pddl");
    const MICONIC: &str = include_str!("../../../../benchmarks/elevator/domain.pddl");
    const MICONIC_P02: &str = include_str!("../../../../benchmarks/elevator/p02.pddl");
    const TWO_BLOCKS: &str = "(define (problem two) (:domain blocks) (:objects a b - block)
        (:init (clear a) (clear b) (ontable a) (ontable b) (handempty))
        (:goal (and (on a b))))";

    fn blocks() -> (Domain, Problem, TypeIndex) {
        let d = parse_domain_str(BLOCKS).unwrap();
        let p = parse_problem_str(TWO_BLOCKS, &d).unwrap();
        let idx = TypeIndex::build(&d, &p);
        (d, p, idx)
    }

    fn atom(s: &str) -> GroundAtom {
        let mut parts = s.split_whitespace();
        GroundAtom::new(parts.next().unwrap(), parts)
    }

    fn atoms(list: &[&str]) -> std::collections::BTreeSet<GroundAtom> {
        list.iter().map(|s| atom(s)).collect()
    }

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn stack_grounding() {
        let (d, _, idx) = blocks();
        let g = ground_action(&d, "stack", &args(&["a", "b"]), &idx).unwrap();
        assert_eq!(g.positive_preconditions().cloned().collect::<std::collections::BTreeSet<_>>(), atoms(&["holding a", "clear b"]));
        assert_eq!(g.negative_preconditions().count(), 0);
        assert_eq!(g.adds, atoms(&["on a b", "clear a", "handempty"]));
        assert_eq!(g.deletes, atoms(&["holding a", "clear b"]));
    }

    #[test]
    fn grounding_errors() {
        let (d, _, idx) = blocks();
        assert_eq!(
            ground_action(&d, "stack", &args(&["a"]), &idx),
            Err(GroundingError::ArityMismatch { action: "stack".into(), expected: 2, got: 1 })
        );
        assert_eq!(
            ground_action(&d, "teleport", &args(&["a"]), &idx),
            Err(GroundingError::UnknownAction("teleport".into()))
        );
        assert!(matches!(
            ground_action(&d, "pick-up", &args(&["zz"]), &idx),
            Err(GroundingError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn miconic_type_mismatch() {
        let d = parse_domain_str(MICONIC).unwrap();
        let p = parse_problem_str(MICONIC_P02, &d).unwrap();
        let idx = TypeIndex::build(&d, &p);
        // board(?f - floor, ?p - passenger): put a floor in the passenger slot
        let err = ground_action(&d, "board", &args(&["f0", "f1"]), &idx).unwrap_err();
        assert_eq!(
            err,
            GroundingError::TypeMismatch { param: "?p".into(), required_type: "passenger".into(), object: "f1".into() }
        );
        assert!(ground_action(&d, "board", &args(&["f0", "p1"]), &idx).is_ok());

        let passengers = idx.objects_of("passenger").unwrap();
        let floors = idx.objects_of("floor").unwrap();
        assert!(passengers.is_disjoint(floors));
        let union: std::collections::BTreeSet<_> = passengers.union(floors).cloned().collect();
        assert_eq!(&union, idx.objects_of("object").unwrap());
    }

    #[test]
    fn applicability_and_effects() {
        let (d, p, idx) = blocks();
        let init = initial_state(&p);
        let pick = ground_action(&d, "pick-up", &args(&["a"]), &idx).unwrap();
        assert!(is_applicable(&init, &pick));

        let stack = ground_action(&d, "stack", &args(&["a", "b"]), &idx).unwrap();
        let v = check_applicable(&init, &stack).unwrap_err();
        assert_eq!(v.to_string(), "holding a not in state");
        assert_eq!(v.index, 0);

        let next = apply_action(&init, &pick);
        assert_eq!(next.iter().cloned().collect::<std::collections::BTreeSet<_>>(), atoms(&["clear b", "ontable b", "holding a"]));
        // value semantics
        assert_eq!(init.len(), 5);
    }

    #[test]
    fn empty_precondition_and_identity() {
        let noop = GroundAction {
            name: "noop".into(),
            args: vec![],
            preconditions: vec![],
            adds: Default::default(),
            deletes: Default::default(),
            cost: 0,
        };
        let s: State = atoms(&["p", "q x"]).into_iter().collect();
        assert!(is_applicable(&s, &noop));
        assert_eq!(apply_action(&s, &noop), s);
        assert!(is_applicable(&State::new(), &noop));
    }

    #[test]
    fn add_wins_over_delete() {
        let p = atom("p");
        let act = GroundAction {
            name: "flip".into(),
            args: vec![],
            preconditions: vec![],
            adds: [p.clone()].into(),
            deletes: [p.clone()].into(),
            cost: 0,
        };
        let before: State = [p.clone()].into_iter().collect();
        assert!(apply_action(&before, &act).contains(&p));
        assert!(apply_action(&State::new(), &act).contains(&p));
    }

    #[test]
    fn goal_evaluation() {
        let s: State = atoms(&["on a b", "ontable b"]).into_iter().collect();
        let d = parse_domain_str(BLOCKS).unwrap();
        let p = parse_problem_str(TWO_BLOCKS, &d).unwrap();
        assert!(goal_satisfied(&s, &p.goal));
        let swapped = parse_problem_str(&TWO_BLOCKS.replace("(on a b)", "(on b a)"), &d).unwrap();
        assert!(!goal_satisfied(&s, &swapped.goal));
        use crate::pddl::Term;
        let never = Formula::And(vec![Formula::NotEq(Term::Const("a".into()), Term::Const("a".into()))]);
        assert!(!goal_satisfied(&s, &never));
        assert!(!goal_satisfied(&State::new(), &never));
    }

    #[test]
    fn negative_and_equality_preconditions() {
        let d = parse_domain_str(include_str!("../../../../benchmarks/satellite/domain.pddl")).unwrap();
        let p = parse_problem_str(include_str!("../../../../benchmarks/satellite/p01.pddl"), &d).unwrap();
        let idx = TypeIndex::build(&d, &p);
        let init = initial_state(&p);
        let same = ground_action(&d, "turn_to", &args(&["satellite0", "phenomenon6", "phenomenon6"]), &idx).unwrap();
        let v = check_applicable(&init, &same).unwrap_err();
        assert_eq!(v.index, 1);
        assert!(matches!(v.condition, Condition::NotEqual(_, _)));
        let turn = ground_action(&d, "turn_to", &args(&["satellite0", "star0", "phenomenon6"]), &idx).unwrap();
        assert!(is_applicable(&init, &turn));
    }
}
