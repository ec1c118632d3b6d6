use thiserror::Error;

use super::{reserve_after_detour, Cycle, Plan, Solution, Terminator, Visit};
use crate::instance::{Instance, TaskId};
use crate::scalar::Scalar;
use crate::work;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepairError {
    #[error("task {0} is not in the instance")]
    UnknownTask(TaskId),
    #[error("instance infeasible: a full battery cannot serve even one fruit of task {0} and return")]
    Unreachable(TaskId),
    #[error("plan has {got} robots but the instance has {expected}")]
    RobotCount { got: usize, expected: usize },
}

/// Output of [`repair_route`].
#[derive(Clone, Debug, PartialEq)]
pub struct RepairedRoute {
    pub cycles: Vec<Cycle>,
    /// Per planned segment: whether it was cut short by a battery swap.
    pub interrupted: Vec<bool>,
}

struct PendingReturn<S> {
    visits: Vec<Visit>,
    battery: S,
    /// Planned segment the cycle was cut out of, when cut before its end.
    inside: Option<usize>,
}

/// Largest fruit count `<= upper` that can be served from the depot with
/// `battery` and still return; 0 if none.
fn max_chunk<S: Scalar>(inst: &Instance<S>, battery: S, slot: usize, upper: u32) -> u32 {
    let fits = |k: u32| reserve_after_detour(inst, battery, 0, 0, slot, k) >= S::zero();
    if upper == 0 || !fits(1) {
        return 0;
    }
    if fits(upper) {
        return upper;
    }
    let (mut lo, mut hi) = (1, upper);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Turns one robot's planned cycles into a marked route.
///
/// Every planned segment ends with a depot visit. Additional returns are
/// inserted when the next visit would exceed the load capacity, revisit a
/// task already in the cycle, or leave too little battery to serve it and
/// get back. A return becomes an energy visit (`-1`) when the battery is at or
/// below the threshold, or when the next visit cannot be served from the depot
/// without a swap. The final return never swaps.
pub fn repair_route<S: Scalar>(
    inst: &Instance<S>,
    segments: &[Vec<Visit>],
    start_battery: S,
) -> Result<RepairedRoute, RepairError> {
    let p = inst.params();
    let cap = p.load_capacity_fruits;
    let mut cycles = Vec::new();
    let mut interrupted = vec![false; segments.len()];
    let mut pending: Option<PendingReturn<S>> = None;
    let mut battery = start_battery;
    let mut visits: Vec<Visit> = Vec::new();
    let mut load = 0u32;
    let mut at = 0usize;
    let mut steps = 0u64;

    let close = |visits: &mut Vec<Visit>, battery: S, at: usize, load: u32, inside| PendingReturn {
        visits: std::mem::take(visits),
        battery: battery - p.travel_energy(inst.dist(at, 0), load),
        inside,
    };

    for (seg, planned) in segments.iter().enumerate() {
        for v in planned {
            let slot = inst.slot(v.task).ok_or(RepairError::UnknownTask(v.task))?;
            let mut remaining = v.fruits;
            while remaining > 0 {
                steps += 1;
                let chunk = if !visits.is_empty() {
                    if load + remaining > cap || visits.iter().any(|w| w.task == v.task) {
                        pending = Some(close(&mut visits, battery, at, load, Some(seg)));
                        load = 0;
                        at = 0;
                        continue;
                    }
                    if reserve_after_detour(inst, battery, at, load, slot, remaining) < S::zero() {
                        pending = Some(close(&mut visits, battery, at, load, Some(seg)));
                        load = 0;
                        at = 0;
                        continue;
                    }
                    remaining
                } else {
                    let upper = remaining.min(cap);
                    if let Some(ret) = pending.take() {
                        let after_swap = max_chunk(inst, p.battery_kj, slot, upper);
                        if after_swap == 0 {
                            return Err(RepairError::Unreachable(v.task));
                        }
                        let swap = ret.battery <= p.swap_threshold_kj
                            || reserve_after_detour(inst, ret.battery, 0, 0, slot, after_swap) < S::zero();
                        if swap {
                            battery = p.battery_kj;
                            if let Some(s) = ret.inside {
                                interrupted[s] = true;
                            }
                        } else {
                            battery = ret.battery;
                        }
                        let end = if swap { Terminator::EnergyVisit } else { Terminator::LoadVisit };
                        cycles.push(Cycle { visits: ret.visits, end });
                        after_swap
                    } else {
                        match max_chunk(inst, battery, slot, upper) {
                            0 => return Err(RepairError::Unreachable(v.task)),
                            k => k,
                        }
                    }
                };
                if chunk < remaining.min(cap) {
                    interrupted[seg] = true;
                }
                battery -= p.travel_energy(inst.dist(at, slot), load);
                battery -= p.service_energy(chunk);
                load += chunk;
                remaining -= chunk;
                at = slot;
                visits.push(Visit { task: v.task, fruits: chunk });
            }
        }
        if !visits.is_empty() {
            pending = Some(close(&mut visits, battery, at, load, None));
            load = 0;
            at = 0;
        }
    }
    if let Some(ret) = pending {
        cycles.push(Cycle { visits: ret.visits, end: Terminator::EndOfRoute });
    }
    work::tick(steps * work::REPAIR_STEP);
    Ok(RepairedRoute { cycles, interrupted })
}

/// Inserts depot markers into every robot's planned cycles, starting each
/// robot with a full battery. The result is feasible whenever the plan is
/// demand-complete.
pub fn repair_depot_markers<S: Scalar>(inst: &Instance<S>, plan: &Plan) -> Result<Solution, RepairError> {
    if plan.len() != inst.robot_count() {
        return Err(RepairError::RobotCount { got: plan.len(), expected: inst.robot_count() });
    }
    let routes = plan
        .iter()
        .map(|segments| repair_route(inst, segments, inst.params().battery_kj).map(|r| r.cycles))
        .collect::<Result<_, _>>()?;
    Ok(Solution { routes })
}
