//! Sequential anchoring and balancing: cycle-order 2-opt (CSOS), anchoring at
//! battery swaps with residual replanning (SAS), and pooling of the work left
//! after each robot's last swap (RWBS).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::evolution::construct::{
    deal_cycles_lpt, merge_by_task, nearest_neighbour_tour, plan_cycles, MAX_TWO_OPT_PASSES,
};
use crate::instance::Instance;
use crate::scalar::Scalar;
use crate::schedule::{repair_route, score, simulate_route, Cycle, RepairedRoute, Solution, Terminator, Visit};
use crate::trace::TraceEvent;

fn replay<S: Scalar>(inst: &Instance<S>, segments: &[Vec<Visit>]) -> Option<(S, RepairedRoute)> {
    let b = inst.params().battery_kj;
    let r = repair_route(inst, segments, b).ok()?;
    let o = simulate_route(inst, 0, &r.cycles, b, None).ok()?;
    o.feasible.then_some((o.completion, r))
}

/// Completion time of a route driven from a full battery, if feasible.
pub(crate) fn route_completion<S: Scalar>(inst: &Instance<S>, cycles: &[Cycle]) -> Option<S> {
    let o = simulate_route(inst, 0, cycles, inst.params().battery_kj, None).ok()?;
    o.feasible.then_some(o.completion)
}

fn two_opt_by_completion<S: Scalar, T: Clone>(
    items: &mut [T],
    best: &mut S,
    best_route: &mut RepairedRoute,
    mut objective: impl FnMut(&[T]) -> Option<(S, RepairedRoute)>,
) {
    let k = items.len();
    for _ in 0..MAX_TWO_OPT_PASSES {
        let mut improved = false;
        'scan: for i in 0..k.saturating_sub(1) {
            for j in i + 1..k {
                items[i..=j].reverse();
                if let Some((t, r)) = objective(items) {
                    if t < *best {
                        *best = t;
                        *best_route = r;
                        improved = true;
                        break 'scan;
                    }
                }
                items[i..=j].reverse();
            }
        }
        if !improved {
            break;
        }
    }
}

/// CSOS on one route: 2-opt over cycle order, then over the task order of the
/// first cycle cut short by a swap, both scored by completion time after
/// re-repair. Returns the input unless completion time strictly drops.
pub(crate) fn csos_route<S: Scalar>(inst: &Instance<S>, cycles: &[Cycle]) -> Vec<Cycle> {
    let Some(base) = route_completion(inst, cycles) else {
        return cycles.to_vec();
    };
    let mut segs: Vec<Vec<Visit>> = cycles.iter().map(|c| c.visits.clone()).collect();
    let Some((mut best, mut route)) = replay(inst, &segs) else {
        return cycles.to_vec();
    };
    two_opt_by_completion(&mut segs, &mut best, &mut route, |s| replay(inst, s));
    if let Some(s) = route.interrupted.iter().position(|&b| b) {
        let mut tasks = segs[s].clone();
        two_opt_by_completion(&mut tasks, &mut best, &mut route, |t| {
            let mut trial = segs.clone();
            trial[s] = t.to_vec();
            replay(inst, &trial)
        });
    }
    if best < base {
        route.cycles
    } else {
        cycles.to_vec()
    }
}

pub fn csos<S: Scalar>(inst: &Instance<S>, sol: &Solution, robot: usize) -> Solution {
    let mut out = sol.clone();
    out.routes[robot] = csos_route(inst, &sol.routes[robot]);
    out
}

/// Replans `pool` as a fresh single-robot route from a full battery.
fn replan<S: Scalar, R: Rng>(inst: &Instance<S>, pool: &[Visit], rng: &mut R) -> Option<Vec<Cycle>> {
    let tour = nearest_neighbour_tour(inst, pool, rng);
    let segs = plan_cycles(inst, &tour);
    repair_route(inst, &segs, inst.params().battery_kj).ok().map(|r| r.cycles)
}

/// SAS on one route. Returns the new route and the number of anchored segments.
pub(crate) fn sas_route<S: Scalar, R: Rng>(inst: &Instance<S>, cycles: &[Cycle], rng: &mut R) -> (Vec<Cycle>, usize) {
    let mut anchored: Vec<Cycle> = Vec::new();
    let mut anchors = 0;
    let mut current = cycles.to_vec();
    while let Some(f) = current.iter().position(|c| c.end == Terminator::EnergyVisit) {
        let tail = current.split_off(f + 1);
        anchored.append(&mut current);
        anchors += 1;
        let pool = merge_by_task(tail.iter().flat_map(|c| c.visits.iter().copied()));
        if pool.is_empty() {
            break;
        }
        match replan(inst, &pool, rng) {
            Some(fresh) => current = csos_route(inst, &fresh),
            None => return (cycles.to_vec(), 0),
        }
    }
    anchored.extend(current);
    if route_completion(inst, &anchored).is_none() {
        return (cycles.to_vec(), 0);
    }
    (anchored, anchors)
}

pub fn sas<S: Scalar, R: Rng>(inst: &Instance<S>, sol: &Solution, robot: usize, rng: &mut R) -> Solution {
    let mut out = sol.clone();
    out.routes[robot] = sas_route(inst, &sol.routes[robot], rng).0;
    out
}

/// Cycles through the last energy visit of a route; empty if it never swaps.
pub(crate) fn fixed_prefix_len(route: &[Cycle]) -> usize {
    route.iter().rposition(|c| c.end == Terminator::EnergyVisit).map_or(0, |i| i + 1)
}

/// RWBS: pools every robot's work after its last swap, replans the pool and
/// deals the new cycles longest-first onto the least-loaded robot. Returns the
/// input if the result is not feasible.
pub fn rwbs<S: Scalar, R: Rng>(inst: &Instance<S>, sol: &Solution, rng: &mut R) -> Solution {
    rwbs_counted(inst, sol, rng).0
}

fn rwbs_counted<S: Scalar, R: Rng>(inst: &Instance<S>, sol: &Solution, rng: &mut R) -> (Solution, usize) {
    let mut fixed: Vec<Vec<Cycle>> = Vec::with_capacity(sol.robot_count());
    let mut residual = Vec::new();
    for route in &sol.routes {
        let k = fixed_prefix_len(route);
        fixed.push(route[..k].to_vec());
        residual.extend(route[k..].iter().flat_map(|c| c.visits.iter().copied()));
    }
    let pool = merge_by_task(residual);
    let offsets: Option<Vec<S>> = fixed.iter().map(|f| route_completion(inst, f)).collect();
    let Some(offsets) = offsets else {
        return (sol.clone(), pool.len());
    };
    let tour = nearest_neighbour_tour(inst, &pool, rng);
    let plan = deal_cycles_lpt(inst, plan_cycles(inst, &tour), &offsets);
    let mut out = Solution { routes: fixed };
    for (route, segs) in out.routes.iter_mut().zip(&plan) {
        match repair_route(inst, segs, inst.params().battery_kj) {
            Ok(r) => route.extend(r.cycles),
            Err(_) => return (sol.clone(), pool.len()),
        }
    }
    match score(inst, &out) {
        Ok(s) if s.feasible => (out, pool.len()),
        _ => (sol.clone(), pool.len()),
    }
}

fn objectives<S: Scalar>(inst: &Instance<S>, sol: &Solution) -> (f64, f64) {
    score(inst, sol).map_or((f64::NAN, f64::NAN), |s| (s.makespan_s.as_f64(), s.transport_energy_kj.as_f64()))
}

/// Full SABM: CSOS then SAS on every robot, then one global RWBS.
pub fn sabm<S: Scalar, R: Rng>(inst: &Instance<S>, sol: &Solution, rng: &mut R) -> Solution {
    sabm_traced(inst, sol, rng, None)
}

pub fn sabm_traced<S: Scalar, R: Rng>(
    inst: &Instance<S>,
    sol: &Solution,
    rng: &mut R,
    mut trace: Option<&mut Vec<TraceEvent>>,
) -> Solution {
    // one child stream per robot, split up front
    let seeds: Vec<u64> = (0..sol.robot_count()).map(|_| rng.gen()).collect();
    let mut cur = sol.clone();
    for (robot, seed) in seeds.into_iter().enumerate() {
        let mut child = ChaCha8Rng::seed_from_u64(seed);
        let before = trace.is_some().then(|| objectives(inst, &cur));
        cur.routes[robot] = csos_route(inst, &cur.routes[robot]);
        let mid = trace.is_some().then(|| objectives(inst, &cur));
        let (route, anchors) = sas_route(inst, &cur.routes[robot], &mut child);
        cur.routes[robot] = route;
        if let (Some(t), Some(b), Some(m)) = (trace.as_deref_mut(), before, mid) {
            t.push(TraceEvent { robot: Some(robot), ..TraceEvent::new("csos", b, m) });
            let a = objectives(inst, &cur);
            t.push(TraceEvent { robot: Some(robot), anchors, ..TraceEvent::new("sas", m, a) });
        }
    }
    let before = trace.is_some().then(|| objectives(inst, &cur));
    let (out, pool) = rwbs_counted(inst, &cur, rng);
    if let (Some(t), Some(b)) = (trace, before) {
        t.push(TraceEvent { pool_tasks: pool, ..TraceEvent::new("rwbs", b, objectives(inst, &out)) });
    }
    out
}
