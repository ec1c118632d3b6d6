//! Proportional splitting-based rebalancing: the bottleneck robot's cheapest
//! post-swap cycle is shared out to robots below the ideal balanced makespan,
//! in proportion to their gaps.

use crate::evolution::construct::cycle_duration;
use crate::instance::Instance;
use crate::sabm::fixed_prefix_len;
use crate::scalar::{total_cmp, Scalar};
use crate::schedule::{repair_route, score, simulate_route, Cycle, Solution, Visit};
use crate::trace::TraceEvent;

/// How one donor cycle is shared out.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitPlan {
    /// (robot, cycle ordinal) of the donor.
    pub donor: (usize, usize),
    pub ratios: Vec<f64>,
    /// Per robot, the donor's visits with that robot's fruit counts (zero counts dropped).
    pub fruit_allocations: Vec<Vec<Visit>>,
}

/// Shares of the donor: positive gaps to `T_ideal = (sum baselines + donor) / r`,
/// normalized to sum to 1. All zero if no robot is below the ideal.
pub fn split_ratios(baselines: &[f64], donor_duration: f64) -> Vec<f64> {
    let r = baselines.len() as f64;
    let ideal = (baselines.iter().sum::<f64>() + donor_duration) / r;
    let gaps: Vec<f64> = baselines.iter().map(|b| (ideal - b).max(0.0)).collect();
    let total: f64 = gaps.iter().sum();
    if total > 0.0 {
        gaps.iter().map(|g| g / total).collect()
    } else {
        vec![0.0; baselines.len()]
    }
}

/// Integer shares of `count` by largest remainder: floors first, then one
/// extra fruit each to the largest fractional parts (lower index on ties).
pub fn largest_remainder(count: u32, ratios: &[f64]) -> Vec<u32> {
    let exact: Vec<f64> = ratios.iter().map(|r| r * f64::from(count)).collect();
    let mut out: Vec<u32> = exact.iter().map(|e| e.floor() as u32).collect();
    let assigned: u32 = out.iter().sum();
    let mut order: Vec<usize> = (0..ratios.len()).filter(|&k| ratios[k] > 0.0).collect();
    order.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())).then(a.cmp(&b)));
    for &k in order.iter().cycle().take(count.saturating_sub(assigned) as usize) {
        out[k] += 1;
    }
    out
}

/// Makespan-critical robot: largest completion time, lowest index on ties.
fn bottleneck<S: Scalar>(completion: &[S]) -> usize {
    (0..completion.len())
        .fold(None, |best: Option<usize>, k| match best {
            Some(b) if completion[k] <= completion[b] => Some(b),
            _ => Some(k),
        })
        .unwrap_or(0)
}

fn cycle_energy<S: Scalar>(inst: &Instance<S>, c: &Cycle) -> S {
    simulate_route(inst, 0, std::slice::from_ref(c), inst.params().battery_kj, None)
        .map_or(S::infinity(), |o| o.energy)
}

/// Route with the prefix through the last swap kept and the rest (plus an
/// optional extra cycle) re-marked from a full battery.
fn rebuild<S: Scalar>(inst: &Instance<S>, route: &[Cycle], skip: Option<usize>, extra: Option<&[Visit]>) -> Option<Vec<Cycle>> {
    let k = fixed_prefix_len(route);
    let mut segs: Vec<Vec<Visit>> = route[k..]
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(k + i) != skip)
        .map(|(_, c)| c.visits.clone())
        .collect();
    segs.extend(extra.map(<[Visit]>::to_vec));
    let tail = repair_route(inst, &segs, inst.params().battery_kj).ok()?.cycles;
    let mut out = route[..k].to_vec();
    out.extend(tail);
    Some(out)
}

/// Donor choice and shares for `sol`, or `None` when the bottleneck robot has
/// nothing to give or no robot has a positive gap.
pub fn plan_split<S: Scalar>(inst: &Instance<S>, sol: &Solution) -> Option<(SplitPlan, Vec<Vec<Cycle>>)> {
    let sc = score(inst, sol).ok()?;
    let rb = bottleneck(&sc.completion_s);
    let route = &sol.routes[rb];
    let start = fixed_prefix_len(route);
    let after = start..route.len();
    if after.is_empty() {
        return None;
    }
    let donor = after
        .clone()
        .min_by(|&a, &b| total_cmp(&cycle_energy(inst, &route[a]), &cycle_energy(inst, &route[b])).then(a.cmp(&b)))?;
    let mut routes = sol.routes.clone();
    routes[rb] = rebuild(inst, route, Some(donor), None)?;
    let baselines: Vec<f64> = routes
        .iter()
        .map(|r| simulate_route(inst, 0, r, inst.params().battery_kj, None).map(|o| o.completion.as_f64()))
        .collect::<Result<_, _>>()
        .ok()?;
    let visits = &route[donor].visits;
    let ratios = split_ratios(&baselines, cycle_duration(inst, visits).as_f64());
    if ratios.iter().all(|&r| r == 0.0) {
        return None;
    }
    let mut alloc: Vec<Vec<Visit>> = vec![Vec::new(); routes.len()];
    for v in visits {
        for (k, n) in largest_remainder(v.fruits, &ratios).into_iter().enumerate() {
            if n > 0 {
                alloc[k].push(Visit { task: v.task, fruits: n });
            }
        }
    }
    Some((SplitPlan { donor: (rb, donor), ratios, fruit_allocations: alloc }, routes))
}

/// One PSRM pass. The rebalanced solution is kept only if feasible with a
/// strictly lower makespan; otherwise the input is returned.
pub fn psrm<S: Scalar>(inst: &Instance<S>, sol: &Solution) -> Solution {
    psrm_traced(inst, sol, None)
}

pub fn psrm_traced<S: Scalar>(inst: &Instance<S>, sol: &Solution, trace: Option<&mut Vec<TraceEvent>>) -> Solution {
    let Ok(before) = score(inst, sol) else {
        return sol.clone();
    };
    let Some((plan, mut routes)) = plan_split(inst, sol) else {
        return sol.clone();
    };
    for (k, share) in plan.fruit_allocations.iter().enumerate() {
        if share.is_empty() {
            continue;
        }
        match rebuild(inst, &routes[k], None, Some(share)) {
            Some(r) => routes[k] = r,
            None => return sol.clone(),
        }
    }
    let out = Solution { routes };
    let after = score(inst, &out).ok();
    let accepted = after.as_ref().is_some_and(|a| a.feasible && a.makespan_s < before.makespan_s);
    if let Some(t) = trace {
        let obj = |s: &crate::schedule::Score<S>| (s.makespan_s.as_f64(), s.transport_energy_kj.as_f64());
        let mut ev = TraceEvent::new("psrm", obj(&before), after.as_ref().map_or((f64::NAN, f64::NAN), obj));
        ev.robot = Some(plan.donor.0);
        ev.pool_tasks = sol.routes[plan.donor.0][plan.donor.1].visits.len();
        ev.accepted = accepted;
        t.push(ev);
    }
    if accepted {
        out
    } else {
        sol.clone()
    }
}
