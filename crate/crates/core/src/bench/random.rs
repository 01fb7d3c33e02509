//! Random blocks-world instances and action sequences for stress-testing
//! the validator.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::pddl::{parse_domain_str, Domain, Problem};
use crate::validate::{Plan, PlanSource, PlanStep};
use crate::world::{apply_action, ground_action, initial_state, is_applicable, TypeIndex};

pub const BLOCKS_DOMAIN: &str = include_str!("../../../../benchmarks/blocks/domain.pddl");

pub fn blocks_domain() -> Domain {
    parse_domain_str(BLOCKS_DOMAIN).expect("bundled blocks domain parses")
}

const NAMES: &[&str] = &["a", "b", "c", "d", "e", "f", "g", "h"];

/// Random towers over `blocks`: each inner list is a tower, bottom first.
fn random_towers<R: Rng>(rng: &mut R, blocks: &[&str]) -> Vec<Vec<String>> {
    let mut order: Vec<&str> = blocks.to_vec();
    order.shuffle(rng);
    let mut towers: Vec<Vec<String>> = Vec::new();
    for b in order {
        if towers.is_empty() || rng.random_bool(0.4) {
            towers.push(vec![b.to_string()]);
        } else {
            let i = rng.random_range(0..towers.len());
            towers[i].push(b.to_string());
        }
    }
    towers
}

fn tower_atoms(towers: &[Vec<String>], with_clear: bool) -> Vec<String> {
    let mut atoms = Vec::new();
    for t in towers {
        atoms.push(format!("(ontable {})", t[0]));
        for w in t.windows(2) {
            atoms.push(format!("(on {} {})", w[1], w[0]));
        }
        if with_clear {
            atoms.push(format!("(clear {})", t[t.len() - 1]));
        }
    }
    atoms
}

/// PDDL text for a random instance with `n` blocks (1..=8).
pub fn random_blocks_problem<R: Rng>(rng: &mut R, n: usize, name: &str) -> String {
    let blocks = &NAMES[..n.clamp(1, NAMES.len())];
    let init_towers = random_towers(rng, blocks);
    let goal_towers = random_towers(rng, blocks);
    let mut init = tower_atoms(&init_towers, true);
    // occasionally start with a block in hand
    if rng.random_bool(0.2) {
        let t = rng.random_range(0..init_towers.len());
        let top = init_towers[t].last().unwrap().clone();
        init.retain(|a| a != &format!("(clear {top})") && !a.starts_with(&format!("(on {top} ")) && a != &format!("(ontable {top})"));
        if init_towers[t].len() > 1 {
            init.push(format!("(clear {})", init_towers[t][init_towers[t].len() - 2]));
        }
        init.push(format!("(holding {top})"));
    } else {
        init.push("(handempty)".into());
    }
    let mut goal = tower_atoms(&goal_towers, false);
    goal.shuffle(rng);
    goal.truncate(rng.random_range(1..=goal.len()));
    format!(
        "(define (problem {name})\n  (:domain blocks)\n  (:objects {} - block)\n  (:init {})\n  (:goal (and {})))\n",
        blocks.join(" "),
        init.join(" "),
        goal.join(" ")
    )
}

fn random_step<R: Rng>(rng: &mut R, objects: &[String]) -> PlanStep {
    let pick = |rng: &mut R| objects.choose(rng).unwrap().clone();
    match rng.random_range(0..20) {
        0 => PlanStep::new("teleport", [pick(rng)]),
        1 => PlanStep::new("stack", [pick(rng)]),
        2 => PlanStep::new("pick-up", ["nowhere".to_string()]),
        3..=6 => PlanStep::new("pick-up", [pick(rng)]),
        7..=10 => PlanStep::new("put-down", [pick(rng)]),
        11..=15 => PlanStep::new("stack", [pick(rng), pick(rng)]),
        _ => PlanStep::new("unstack", [pick(rng), pick(rng)]),
    }
}

/// A sequence of up to `max_len` steps mixing legal and illegal actions.
/// Each step is legal in the state reached so far with probability `p_legal`
/// when such a step exists.
pub fn random_blocks_plan<R: Rng>(rng: &mut R, domain: &Domain, problem: &Problem, max_len: usize, p_legal: f64) -> Plan {
    let index = TypeIndex::build(domain, problem);
    let objects: Vec<String> = problem.objects.iter().map(|o| o.name.clone()).collect();
    let mut state = initial_state(problem);
    let len = rng.random_range(0..=max_len);
    let mut steps = Vec::with_capacity(len);
    for _ in 0..len {
        let mut step = random_step(rng, &objects);
        if rng.random_bool(p_legal) {
            for _ in 0..64 {
                let ok = ground_action(domain, &step.name, &step.parameters, &index).is_ok_and(|g| is_applicable(&state, &g));
                if ok {
                    break;
                }
                step = random_step(rng, &objects);
            }
        }
        if let Ok(g) = ground_action(domain, &step.name, &step.parameters, &index) {
            if is_applicable(&state, &g) {
                state = apply_action(&state, &g);
            }
        }
        steps.push(step);
    }
    Plan::new(steps, PlanSource::Llm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::parse_problem_str;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_problems_parse() {
        let d = blocks_domain();
        let mut rng = StdRng::seed_from_u64(7);
        for i in 0..200 {
            let n = rng.random_range(1..=5);
            let text = random_blocks_problem(&mut rng, n, &format!("r{i}"));
            let p = parse_problem_str(&text, &d).unwrap_or_else(|e| panic!("{e}\n{text}"));
            assert_eq!(p.objects.len(), n);
            let plan = random_blocks_plan(&mut rng, &d, &p, 10, 0.7);
            assert!(plan.len() <= 10);
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_blocks_problem(&mut StdRng::seed_from_u64(3), 4, "x");
        let b = random_blocks_problem(&mut StdRng::seed_from_u64(3), 4, "x");
        assert_eq!(a, b);
    }
}
