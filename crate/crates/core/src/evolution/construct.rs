//! Greedy construction of planned cycles, shared by population
//! initialization and the residual replanning steps of SABM.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::instance::{Instance, TaskId};
use crate::scalar::{total_cmp, Scalar};
use crate::schedule::{repair_depot_markers, Plan, RepairError, Solution, Visit};
use crate::work;

pub(crate) const MAX_TWO_OPT_PASSES: usize = 50;

/// Merges visits of the same task, keeping first-appearance order.
pub fn merge_by_task(items: impl IntoIterator<Item = Visit>) -> Vec<Visit> {
    let mut index: BTreeMap<TaskId, usize> = BTreeMap::new();
    let mut out: Vec<Visit> = Vec::new();
    for v in items {
        if v.fruits == 0 {
            continue;
        }
        match index.get(&v.task) {
            Some(&i) => out[i].fruits += v.fruits,
            None => {
                index.insert(v.task, out.len());
                out.push(v);
            }
        }
    }
    out
}

/// Fills cycles of at most `Q` fruits in the given order. A visit that does
/// not fit is split: the part that fits closes the current cycle and the rest
/// opens the next one.
pub fn pack_cycles<S: Scalar>(inst: &Instance<S>, items: &[Visit]) -> Vec<Vec<Visit>> {
    let cap = inst.params().load_capacity_fruits;
    let mut cycles = Vec::new();
    let mut current: Vec<Visit> = Vec::new();
    let mut load = 0;
    for v in items {
        let mut left = v.fruits;
        while left > 0 {
            if load == cap || current.iter().any(|w| w.task == v.task) {
                cycles.push(std::mem::take(&mut current));
                load = 0;
            }
            let take = left.min(cap - load);
            current.push(Visit { task: v.task, fruits: take });
            load += take;
            left -= take;
        }
    }
    if !current.is_empty() {
        cycles.push(current);
    }
    cycles
}

fn slot_of<S: Scalar>(inst: &Instance<S>, v: &Visit) -> usize {
    inst.slot(v.task).expect("visit of a known task")
}

/// Reorders a cycle by nearest neighbour from the depot.
pub fn nearest_neighbour_order<S: Scalar>(inst: &Instance<S>, cycle: &mut [Visit]) {
    let mut at = 0;
    for i in 0..cycle.len() {
        let best = (i..cycle.len())
            .min_by(|&a, &b| total_cmp(&inst.dist(at, slot_of(inst, &cycle[a])), &inst.dist(at, slot_of(inst, &cycle[b]))))
            .expect("nonempty range");
        cycle.swap(i, best);
        at = slot_of(inst, &cycle[i]);
    }
    work::tick((cycle.len() * cycle.len()) as u64 / 2);
}

/// First-improvement 2-opt on the closed depot tour through the cycle, by distance.
pub fn two_opt_cycle<S: Scalar>(inst: &Instance<S>, cycle: &mut [Visit]) {
    let n = cycle.len();
    if n < 2 {
        return;
    }
    let node = |c: &[Visit], i: isize| -> usize {
        if i < 0 || i as usize >= n {
            0
        } else {
            slot_of(inst, &c[i as usize])
        }
    };
    let eps = S::feasibility_tol();
    let mut moves = 0u64;
    for _ in 0..MAX_TWO_OPT_PASSES {
        let mut improved = false;
        'scan: for i in 0..n - 1 {
            for j in i + 1..n {
                moves += 1;
                let (a, b) = (node(cycle, i as isize - 1), node(cycle, i as isize));
                let (c, d) = (node(cycle, j as isize), node(cycle, j as isize + 1));
                let delta = inst.dist(a, c) + inst.dist(b, d) - inst.dist(a, b) - inst.dist(c, d);
                if delta < -eps {
                    cycle[i..=j].reverse();
                    improved = true;
                    break 'scan;
                }
            }
        }
        if !improved {
            break;
        }
    }
    work::tick(moves);
}

/// Packs `items` in order, then orders each cycle by nearest neighbour and 2-opt.
pub fn plan_cycles<S: Scalar>(inst: &Instance<S>, items: &[Visit]) -> Vec<Vec<Visit>> {
    let mut cycles = pack_cycles(inst, items);
    for c in &mut cycles {
        nearest_neighbour_order(inst, c);
        two_opt_cycle(inst, c);
    }
    cycles
}

/// Travel plus picking time of a planned cycle driven on its own.
pub fn cycle_duration<S: Scalar>(inst: &Instance<S>, cycle: &[Visit]) -> S {
    let p = inst.params();
    let mut at = 0;
    let mut t = S::zero();
    for v in cycle {
        let s = slot_of(inst, v);
        t += p.travel_time(inst.dist(at, s)) + p.pick_time(v.fruits);
        at = s;
    }
    t + p.travel_time(inst.dist(at, 0))
}

/// Deals cycles in the given order, each to the robot with the smallest
/// `offset + assigned duration` (lowest index on ties).
pub fn deal_cycles<S: Scalar>(inst: &Instance<S>, cycles: Vec<Vec<Visit>>, offsets: &[S]) -> Plan {
    let mut plan: Plan = vec![Vec::new(); offsets.len()];
    let mut load = offsets.to_vec();
    for c in cycles {
        let k = (0..load.len())
            .min_by(|&a, &b| total_cmp(&load[a], &load[b]).then(a.cmp(&b)))
            .expect("at least one robot");
        load[k] += cycle_duration(inst, &c);
        plan[k].push(c);
    }
    plan
}

/// Longest-duration-first version of [`deal_cycles`].
pub fn deal_cycles_lpt<S: Scalar>(inst: &Instance<S>, cycles: Vec<Vec<Visit>>, offsets: &[S]) -> Plan {
    let mut keyed: Vec<(S, Vec<Visit>)> = cycles.into_iter().map(|c| (cycle_duration(inst, &c), c)).collect();
    // stable: equal durations keep construction order
    keyed.sort_by(|a, b| total_cmp(&b.0, &a.0));
    deal_cycles(inst, keyed.into_iter().map(|(_, c)| c).collect(), offsets)
}

/// Giant tour over the items: random start, then nearest unvisited task.
pub fn nearest_neighbour_tour<S: Scalar, R: Rng>(inst: &Instance<S>, items: &[Visit], rng: &mut R) -> Vec<Visit> {
    if items.is_empty() {
        return Vec::new();
    }
    let mut left = items.to_vec();
    let first = left.swap_remove(rng.gen_range(0..left.len()));
    let mut at = slot_of(inst, &first);
    let mut out = vec![first];
    while !left.is_empty() {
        let k = (0..left.len())
            .min_by(|&a, &b| {
                total_cmp(&inst.dist(at, slot_of(inst, &left[a])), &inst.dist(at, slot_of(inst, &left[b])))
                    .then(left[a].task.cmp(&left[b].task))
            })
            .expect("nonempty");
        let v = left.swap_remove(k);
        at = slot_of(inst, &v);
        out.push(v);
    }
    work::tick((items.len() * items.len()) as u64 / 2);
    out
}

/// Every task at full yield, in id order.
pub fn full_demand<S: Scalar>(inst: &Instance<S>) -> Vec<Visit> {
    inst.tasks().iter().map(|t| Visit { task: t.id, fruits: t.yield_fruits }).collect()
}

/// One constructed individual: random permutation, packing, ordering, dealing, repair.
pub fn random_solution<S: Scalar, R: Rng>(inst: &Instance<S>, rng: &mut R) -> Result<Solution, RepairError> {
    let mut items = full_demand(inst);
    items.shuffle(rng);
    let cycles = plan_cycles(inst, &items);
    let plan = deal_cycles(inst, cycles, &vec![S::zero(); inst.robot_count()]);
    repair_depot_markers(inst, &plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, preset, DistanceMatrix, PhysicalParams, TaskNode};
    use crate::schedule::evaluate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn uniform(yields: &[u32], robots: usize) -> Instance<f64> {
        let n = yields.len();
        let m = DistanceMatrix::from_fn(n + 1, |i, j| if i == j { 0.0 } else { 10.0 + (i + j) as f64 });
        let tasks = yields
            .iter()
            .enumerate()
            .map(|(k, &y)| TaskNode { id: TaskId(k as u32 + 2), yield_fruits: y, position: None })
            .collect();
        Instance::new("u", tasks, robots, m, PhysicalParams::default()).unwrap()
    }

    #[test]
    fn exact_fit_gives_one_cycle_per_task() {
        let inst = uniform(&[300, 300, 300], 2);
        let cycles = pack_cycles(&inst, &full_demand(&inst));
        assert_eq!(cycles.len(), 3);
        assert!(cycles.iter().all(|c| c.len() == 1 && c[0].fruits == 300));
    }

    #[test]
    fn overflow_is_split_across_the_boundary() {
        let inst = uniform(&[200, 150, 250], 1);
        let cycles = pack_cycles(&inst, &full_demand(&inst));
        assert_eq!(cycles, vec![
            vec![Visit::new(2, 200), Visit::new(3, 100)],
            vec![Visit::new(3, 50), Visit::new(4, 250)],
        ]);
    }

    #[test]
    fn single_task_single_robot_is_unique() {
        let inst = uniform(&[40], 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_solution(&inst, &mut rng).unwrap();
        let b = random_solution(&inst, &mut rng).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.tokens(0), vec![2]);
    }

    #[test]
    fn lpt_prefers_idle_robot() {
        let inst = uniform(&[10], 2);
        let plan = deal_cycles_lpt(&inst, vec![vec![Visit::new(2, 10)]], &[900.0, 400.0]);
        assert!(plan[0].is_empty());
        assert_eq!(plan[1].len(), 1);
        let tie = deal_cycles_lpt(&inst, vec![vec![Visit::new(2, 10)]], &[500.0, 500.0]);
        assert_eq!(tie[0].len(), 1);
    }

    #[test]
    fn two_opt_never_lengthens() {
        let inst = generate_instance::<f64>(&preset("pro1", 5).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut items = full_demand(&inst);
        items.shuffle(&mut rng);
        for mut c in pack_cycles(&inst, &items) {
            let len = |c: &[Visit]| {
                let mut at = 0;
                let mut d = 0.0;
                for v in c {
                    let s = inst.slot(v.task).unwrap();
                    d += inst.dist(at, s);
                    at = s;
                }
                d + inst.dist(at, 0)
            };
            let before = len(&c);
            two_opt_cycle(&inst, &mut c);
            assert!(len(&c) <= before + 1e-9);
        }
    }

    #[test]
    fn constructed_solutions_are_feasible() {
        let inst = generate_instance::<f64>(&preset("pro2", 2).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..3 {
            let sol = random_solution(&inst, &mut rng).unwrap();
            let rep = evaluate(&inst, &sol).unwrap();
            assert!(rep.feasible, "{:?}", rep.violations.first());
        }
    }

    #[test]
    fn merge_keeps_first_position() {
        let m = merge_by_task([Visit::new(5, 1), Visit::new(3, 2), Visit::new(5, 4)]);
        assert_eq!(m, vec![Visit::new(5, 5), Visit::new(3, 2)]);
    }
}
