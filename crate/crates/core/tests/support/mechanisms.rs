//! Mechanism property checks shared by the mechanism suite and the acceptance run.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use saba_core::evolution::construct::random_solution;
use saba_core::evolution::operators::mutate;
use saba_core::instance::{generate_instance, GeneratorSpec, PhysicalParams};
use saba_core::psrm::psrm;
use saba_core::sabm::{csos, rwbs, sabm, sas};
use saba_core::schedule::{evaluate, repair_depot_markers, Solution, Terminator};
use saba_core::Instance;

pub const CASES: u32 = 1000;

#[derive(Debug, Clone)]
pub struct Case {
    pub tasks: usize,
    pub robots: usize,
    pub small_battery: bool,
    pub seed: u64,
    pub mutations: usize,
}

pub fn case() -> impl Strategy<Value = Case> {
    (2usize..14, 1usize..4, any::<bool>(), any::<u64>(), 0usize..4).prop_map(|(tasks, robots, small_battery, seed, mutations)| Case {
        tasks,
        robots,
        small_battery,
        seed,
        mutations,
    })
}

pub fn build(c: &Case) -> (Instance, Solution, ChaCha8Rng) {
    let g: Instance = generate_instance(&GeneratorSpec {
        name: "fuzz".into(),
        rows: 4,
        cols: 6,
        task_count: c.tasks,
        robot_count: c.robots,
        yield_range: (20, 160),
        harvest_fraction: 1.0,
        seed: c.seed,
    })
    .unwrap();
    let mut params = PhysicalParams::default();
    if c.small_battery {
        params.battery_kj = 120.0;
        params.swap_threshold_kj = 24.0;
    }
    let inst = Instance::new("fuzz", g.tasks().to_vec(), c.robots, g.distances().clone(), params).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut sol = random_solution(&inst, &mut rng).unwrap();
    for _ in 0..c.mutations {
        let mut plan = sol.plan();
        mutate(&mut plan, &mut rng);
        if let Ok(s) = repair_depot_markers(&inst, &plan) {
            if evaluate(&inst, &s).unwrap().feasible {
                sol = s;
            }
        }
    }
    (inst, sol, rng)
}

fn assert_closed(inst: &Instance, before: &Solution, after: &Solution) -> Result<(), TestCaseError> {
    prop_assert_eq!(after.fruit_totals(), before.fruit_totals());
    prop_assert!(after.is_demand_complete(inst));
    let r = evaluate(inst, after).unwrap();
    prop_assert!(r.feasible, "violations: {:?}", r.violations);
    Ok(())
}

pub fn sabm_closure(c: &Case) -> Result<(), TestCaseError> {
    let (inst, sol, mut rng) = build(c);
    let out = sabm(&inst, &sol, &mut rng);
    assert_closed(&inst, &sol, &out)?;
    let out = rwbs(&inst, &sol, &mut rng);
    assert_closed(&inst, &sol, &out)
}

pub fn psrm_closure(c: &Case) -> Result<(), TestCaseError> {
    let (inst, sol, _) = build(c);
    let out = psrm(&inst, &sol);
    assert_closed(&inst, &sol, &out)?;
    let (a, b) = (evaluate(&inst, &sol).unwrap(), evaluate(&inst, &out).unwrap());
    prop_assert!(b.makespan_s <= a.makespan_s);
    Ok(())
}

pub fn sas_anchor(c: &Case) -> Result<(), TestCaseError> {
    let (inst, sol, mut rng) = build(c);
    for robot in 0..sol.robot_count() {
        let out = sas(&inst, &sol, robot, &mut rng);
        assert_closed(&inst, &sol, &out)?;
        let route = &sol.routes[robot];
        match route.iter().position(|c| c.end == Terminator::EnergyVisit) {
            Some(first) => prop_assert_eq!(&out.routes[robot][..=first], &route[..=first]),
            None => prop_assert_eq!(&out.routes[robot], route),
        }
        for other in (0..sol.robot_count()).filter(|&r| r != robot) {
            prop_assert_eq!(&out.routes[other], &sol.routes[other]);
        }
    }
    Ok(())
}

pub fn csos_monotone(c: &Case) -> Result<(), TestCaseError> {
    let (inst, sol, _) = build(c);
    let before = evaluate(&inst, &sol).unwrap();
    for robot in 0..sol.robot_count() {
        let out = csos(&inst, &sol, robot);
        assert_closed(&inst, &sol, &out)?;
        let after = evaluate(&inst, &out).unwrap();
        prop_assert!(after.per_robot[robot].completion_time_s <= before.per_robot[robot].completion_time_s + 1e-9);
    }
    Ok(())
}

pub type Check = fn(&Case) -> Result<(), TestCaseError>;

pub const SUITES: [(&str, Check); 4] = [
    ("sabm demand conservation and feasibility", sabm_closure),
    ("psrm conservation and never-worse makespan", psrm_closure),
    ("sas anchor immutability", sas_anchor),
    ("csos completion-time monotonicity", csos_monotone),
];

/// Runs one check over `CASES` generated cases with a fixed seed.
pub fn run_suite(check: Check) -> Result<(), String> {
    let config = ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() };
    let mut runner = proptest::test_runner::TestRunner::new_with_rng(config, proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha));
    runner.run(&case(), |c| check(&c)).map_err(|e| e.to_string())
}
