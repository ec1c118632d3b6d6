use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::{reserve_after_detour, Cycle, Solution, Terminator};
use crate::instance::{Instance, TaskId};
use crate::scalar::Scalar;
use crate::work;

/// Per-cycle time and energy breakdown.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct CycleReport<S> {
    pub travel_s: S,
    pub pick_s: S,
    pub swap_s: S,
    pub cycle_time_s: S,
    #[serde(rename = "transport_kJ")]
    pub transport_kj: S,
    #[serde(rename = "service_kJ")]
    pub service_kj: S,
    #[serde(rename = "battery_at_start_kJ")]
    pub battery_at_start_kj: S,
    #[serde(rename = "battery_on_return_kJ")]
    pub battery_on_return_kj: S,
    pub swapped: bool,
    /// Swap taken above threshold because the next task could not be served otherwise.
    pub forced_swap: bool,
    pub terminator: Terminator,
}

/// Battery level on arrival at a node and load when leaving it. Depot visits
/// use node `1`, `-1`, or `0` for the final return.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct TracePoint<S> {
    pub node: i64,
    #[serde(rename = "battery_kJ")]
    pub battery_kj: S,
    pub load: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct RobotReport<S> {
    pub completion_time_s: S,
    #[serde(rename = "transport_kJ")]
    pub transport_kj: S,
    pub cycles: Vec<CycleReport<S>>,
    pub battery_trace: Vec<TracePoint<S>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ViolationKind {
    NegativeBattery { node: i64, battery_kj: f64 },
    OverCapacity { task: TaskId, load: u32 },
    SwapAboveThreshold { battery_kj: f64 },
    MissedSwap { battery_kj: f64 },
    DemandMismatch { task: TaskId, served: u64, required: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub robot: Option<usize>,
    pub cycle: Option<usize>,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.robot {
            write!(f, "robot {r}")?;
            if let Some(c) = self.cycle {
                write!(f, " cycle {c}")?;
            }
            write!(f, ": ")?;
        }
        match &self.kind {
            ViolationKind::NegativeBattery { node, battery_kj } => {
                write!(f, "battery negative ({battery_kj:.6} kJ) on reaching node {node}")
            }
            ViolationKind::OverCapacity { task, load } => {
                write!(f, "load {load} exceeds capacity after task {task}")
            }
            ViolationKind::SwapAboveThreshold { battery_kj } => {
                write!(f, "swap above threshold: energy visit with {battery_kj:.6} kJ left")
            }
            ViolationKind::MissedSwap { battery_kj } => {
                write!(f, "missed swap: load visit at or below threshold ({battery_kj:.6} kJ)")
            }
            ViolationKind::DemandMismatch { task, served, required } => {
                write!(f, "task {task} served {served} of {required} fruits")
            }
        }
    }
}

/// Full evaluation of a schedule.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct EvaluationReport<S> {
    pub makespan_s: S,
    #[serde(rename = "transport_energy_kJ")]
    pub transport_energy_kj: S,
    /// Robot defining the makespan (lowest index on ties).
    pub bottleneck: Option<usize>,
    pub per_robot: Vec<RobotReport<S>>,
    pub feasible: bool,
    pub forced_swaps: usize,
    pub violations: Vec<Violation>,
}

impl<S: Scalar> EvaluationReport<S> {
    pub fn objectives(&self) -> (S, S) {
        (self.makespan_s, self.transport_energy_kj)
    }
}

/// Objectives and feasibility only; what the search loop needs.
#[derive(Clone, Debug, PartialEq)]
pub struct Score<S> {
    pub makespan_s: S,
    pub transport_energy_kj: S,
    pub completion_s: Vec<S>,
    pub feasible: bool,
}

impl<S: Scalar> Score<S> {
    pub fn objectives(&self) -> (S, S) {
        (self.makespan_s, self.transport_energy_kj)
    }
}

/// The solution does not describe a schedule over this instance.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("solution has {got} routes but the instance has {expected} robots")]
    RobotCount { got: usize, expected: usize },
    #[error("robot {robot} cycle {cycle}: task {task} is not in the instance")]
    UnknownTask { robot: usize, cycle: usize, task: TaskId },
    #[error("robot {robot} cycle {cycle}: task {task} visited with zero fruits")]
    ZeroCount { robot: usize, cycle: usize, task: TaskId },
    #[error("robot {robot} cycle {cycle}: task {task} visited twice in one cycle")]
    RepeatedTask { robot: usize, cycle: usize, task: TaskId },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct RouteOutcome<S> {
    pub completion: S,
    pub energy: S,
    pub feasible: bool,
    pub end_battery: S,
}

#[derive(Debug, Default)]
pub(crate) struct RouteRecorder<S> {
    pub cycles: Vec<CycleReport<S>>,
    pub trace: Vec<TracePoint<S>>,
    pub violations: Vec<(usize, ViolationKind)>,
    pub forced_swaps: usize,
}

/// Simulates one robot from the depot with `start_battery` and zero load.
pub(crate) fn simulate_route<S: Scalar>(
    inst: &Instance<S>,
    robot: usize,
    cycles: &[Cycle],
    start_battery: S,
    mut rec: Option<&mut RouteRecorder<S>>,
) -> Result<RouteOutcome<S>, EvalError> {
    let p = inst.params();
    let tol = S::feasibility_tol();
    let capacity = p.load_capacity_fruits;
    let mut battery = start_battery;
    let mut out = RouteOutcome {
        completion: S::zero(),
        energy: S::zero(),
        feasible: true,
        end_battery: battery,
    };
    let flag = |out: &mut RouteOutcome<S>, rec: &mut Option<&mut RouteRecorder<S>>, cycle, kind| {
        out.feasible = false;
        if let Some(r) = rec.as_deref_mut() {
            r.violations.push((cycle, kind));
        }
    };
    if let Some(r) = rec.as_deref_mut() {
        r.trace.push(TracePoint { node: 0, battery_kj: battery, load: 0 });
    }

    let mut legs = 0u64;
    for (ci, cycle) in cycles.iter().enumerate() {
        let start = battery;
        let (mut travel, mut pick, mut transport, mut service) = (S::zero(), S::zero(), S::zero(), S::zero());
        let mut load = 0u32;
        let mut at = 0usize;
        for (k, v) in cycle.visits.iter().enumerate() {
            let slot = inst.slot(v.task).ok_or(EvalError::UnknownTask { robot, cycle: ci, task: v.task })?;
            if v.fruits == 0 {
                return Err(EvalError::ZeroCount { robot, cycle: ci, task: v.task });
            }
            if cycle.visits[..k].iter().any(|w| w.task == v.task) {
                return Err(EvalError::RepeatedTask { robot, cycle: ci, task: v.task });
            }
            let d = inst.dist(at, slot);
            let e = p.travel_energy(d, load);
            travel += p.travel_time(d);
            transport += e;
            battery -= e;
            if battery < -tol {
                let kind = ViolationKind::NegativeBattery { node: i64::from(v.task.0), battery_kj: battery.as_f64() };
                flag(&mut out, &mut rec, ci, kind);
            }
            let arrival = battery;
            let s = p.service_energy(v.fruits);
            service += s;
            battery -= s;
            pick += p.pick_time(v.fruits);
            load += v.fruits;
            if load > capacity {
                flag(&mut out, &mut rec, ci, ViolationKind::OverCapacity { task: v.task, load });
            }
            if let Some(r) = rec.as_deref_mut() {
                r.trace.push(TracePoint { node: i64::from(v.task.0), battery_kj: arrival, load });
            }
            at = slot;
        }
        let d = inst.dist(at, 0);
        let e = p.travel_energy(d, load);
        travel += p.travel_time(d);
        transport += e;
        battery -= e;
        legs += cycle.visits.len() as u64 + 1;
        if battery < -tol {
            flag(&mut out, &mut rec, ci, ViolationKind::NegativeBattery { node: 0, battery_kj: battery.as_f64() });
        }
        let on_return = battery;

        let mut swap = S::zero();
        let mut forced = false;
        match cycle.end {
            Terminator::EnergyVisit => {
                if battery > p.swap_threshold_kj + tol {
                    let next = cycles.get(ci + 1).and_then(|c| c.visits.first());
                    let justified = next
                        .and_then(|v| inst.slot(v.task).map(|s| (s, v.fruits)))
                        .is_some_and(|(s, f)| !(reserve_after_detour(inst, battery, 0, 0, s, f) >= S::zero()));
                    if justified {
                        forced = true;
                    } else {
                        let kind = ViolationKind::SwapAboveThreshold { battery_kj: battery.as_f64() };
                        flag(&mut out, &mut rec, ci, kind);
                    }
                }
                swap = p.swap_time_s;
                battery = p.battery_kj;
            }
            Terminator::LoadVisit => {
                if battery <= p.swap_threshold_kj - tol {
                    flag(&mut out, &mut rec, ci, ViolationKind::MissedSwap { battery_kj: battery.as_f64() });
                }
            }
            Terminator::EndOfRoute => {}
        }
        let cycle_time = travel + pick + swap;
        out.completion += cycle_time;
        out.energy += transport;
        if let Some(r) = rec.as_deref_mut() {
            r.forced_swaps += usize::from(forced);
            r.trace.push(TracePoint {
                node: cycle.end.marker().unwrap_or(0),
                battery_kj: on_return,
                load: 0,
            });
            r.cycles.push(CycleReport {
                travel_s: travel,
                pick_s: pick,
                swap_s: swap,
                cycle_time_s: cycle_time,
                transport_kj: transport,
                service_kj: service,
                battery_at_start_kj: start,
                battery_on_return_kj: on_return,
                swapped: cycle.end == Terminator::EnergyVisit,
                forced_swap: forced,
                terminator: cycle.end,
            });
        }
    }
    work::tick(legs * work::LEG);
    out.end_battery = battery;
    Ok(out)
}

fn check_robot_count<S: Scalar>(inst: &Instance<S>, sol: &Solution) -> Result<(), EvalError> {
    if sol.robot_count() != inst.robot_count() {
        return Err(EvalError::RobotCount { got: sol.robot_count(), expected: inst.robot_count() });
    }
    Ok(())
}

fn demand_violations<S: Scalar>(inst: &Instance<S>, sol: &Solution) -> Vec<Violation> {
    let totals = sol.fruit_totals();
    inst.tasks()
        .iter()
        .filter_map(|t| {
            let served = totals.get(&t.id).copied().unwrap_or(0);
            (served != u64::from(t.yield_fruits)).then_some(Violation {
                robot: None,
                cycle: None,
                kind: ViolationKind::DemandMismatch { task: t.id, served, required: t.yield_fruits },
            })
        })
        .collect()
}

fn demand_complete<S: Scalar>(inst: &Instance<S>, sol: &Solution) -> bool {
    sol.is_demand_complete(inst)
}

fn argmax_first<S: Scalar>(values: impl Iterator<Item = S>) -> Option<(usize, S)> {
    values.enumerate().fold(None, |best, (i, v)| match best {
        Some((_, b)) if v <= b => best,
        _ => Some((i, v)),
    })
}

/// Simulates every robot and reports objectives, breakdowns and violations.
pub fn evaluate<S: Scalar>(inst: &Instance<S>, sol: &Solution) -> Result<EvaluationReport<S>, EvalError> {
    check_robot_count(inst, sol)?;
    let mut per_robot = Vec::with_capacity(sol.robot_count());
    let mut violations = Vec::new();
    let mut feasible = true;
    let mut forced_swaps = 0;
    for (robot, route) in sol.routes.iter().enumerate() {
        let mut rec = RouteRecorder::default();
        let o = simulate_route(inst, robot, route, inst.params().battery_kj, Some(&mut rec))?;
        feasible &= o.feasible;
        forced_swaps += rec.forced_swaps;
        violations.extend(
            rec.violations
                .into_iter()
                .map(|(cycle, kind)| Violation { robot: Some(robot), cycle: Some(cycle), kind }),
        );
        per_robot.push(RobotReport {
            completion_time_s: o.completion,
            transport_kj: o.energy,
            cycles: rec.cycles,
            battery_trace: rec.trace,
        });
    }
    let demand = demand_violations(inst, sol);
    feasible &= demand.is_empty();
    violations.extend(demand);
    let bottleneck = argmax_first(per_robot.iter().map(|r| r.completion_time_s));
    Ok(EvaluationReport {
        makespan_s: bottleneck.map_or(S::zero(), |b| b.1),
        transport_energy_kj: per_robot.iter().flat_map(|r| &r.cycles).map(|c| c.transport_kj).sum(),
        bottleneck: bottleneck.map(|b| b.0),
        per_robot,
        feasible,
        forced_swaps,
        violations,
    })
}

/// Objectives and feasibility without building the full report.
pub fn score<S: Scalar>(inst: &Instance<S>, sol: &Solution) -> Result<Score<S>, EvalError> {
    check_robot_count(inst, sol)?;
    let mut completion = Vec::with_capacity(sol.robot_count());
    let mut energy = S::zero();
    let mut feasible = demand_complete(inst, sol);
    for (robot, route) in sol.routes.iter().enumerate() {
        let o = simulate_route(inst, robot, route, inst.params().battery_kj, None)?;
        feasible &= o.feasible;
        energy += o.energy;
        completion.push(o.completion);
    }
    Ok(Score {
        makespan_s: argmax_first(completion.iter().copied()).map_or(S::zero(), |b| b.1),
        transport_energy_kj: energy,
        completion_s: completion,
        feasible,
    })
}
