//! Hybrid route/split encoding of a schedule and its exact evaluation.
//!
//! A robot's route is a sequence of cycles. Each cycle starts at the depot,
//! visits distinct tasks picking an integer number of fruits at each, and
//! returns to the depot. How a cycle ends is its [`Terminator`]: a load-induced
//! visit (marker `1`), an energy-induced visit with battery swap (marker `-1`),
//! or the end of the route.

mod encoding;
mod evaluate;
mod gantt;
mod repair;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::instance::{Instance, TaskId};
use crate::scalar::Scalar;

pub use encoding::{split_tokens, SolutionError, SolutionFile, SplitEntry, TokenCycle};
pub use evaluate::{
    evaluate, score, CycleReport, EvalError, EvaluationReport, RobotReport, Score, TracePoint,
    Violation, ViolationKind,
};
pub use gantt::{gantt_rows, GanttKind, GanttRow};
pub use repair::{repair_depot_markers, repair_route, RepairError, RepairedRoute};

pub(crate) use evaluate::simulate_route;

/// Marker values of the flat route encoding.
pub const LOAD_MARKER: i64 = 1;
pub const ENERGY_MARKER: i64 = -1;

/// One stop of a cycle: a task and the number of fruits picked there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Visit {
    pub task: TaskId,
    pub fruits: u32,
}

impl Visit {
    pub fn new(task: u32, fruits: u32) -> Self {
        Self {
            task: TaskId(task),
            fruits,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Terminator {
    LoadVisit,
    EnergyVisit,
    EndOfRoute,
}

impl Terminator {
    pub fn marker(self) -> Option<i64> {
        match self {
            Terminator::LoadVisit => Some(LOAD_MARKER),
            Terminator::EnergyVisit => Some(ENERGY_MARKER),
            Terminator::EndOfRoute => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    pub visits: Vec<Visit>,
    pub end: Terminator,
}

impl Cycle {
    pub fn fruits(&self) -> u32 {
        self.visits.iter().map(|v| v.fruits).sum()
    }

    pub fn contains(&self, task: TaskId) -> bool {
        self.visits.iter().any(|v| v.task == task)
    }
}

/// Planned cycles per robot, without depot markers: the input of marker repair.
pub type Plan = Vec<Vec<Vec<Visit>>>;

/// A schedule for the whole fleet: one route (list of cycles) per robot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Solution {
    pub routes: Vec<Vec<Cycle>>,
}

/// A cycle seen in isolation, as produced by [`Solution::decompose_cycles`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleView {
    pub robot: usize,
    pub ordinal: usize,
    pub task_sequence: Vec<TaskId>,
    pub terminator: Terminator,
    pub fruit_counts: Vec<u32>,
}

impl Solution {
    pub fn empty(robots: usize) -> Self {
        Self {
            routes: vec![Vec::new(); robots],
        }
    }

    pub fn robot_count(&self) -> usize {
        self.routes.len()
    }

    /// Planned cycles with markers stripped.
    pub fn plan(&self) -> Plan {
        self.routes
            .iter()
            .map(|r| r.iter().map(|c| c.visits.clone()).collect())
            .collect()
    }

    pub fn route_plan(&self, robot: usize) -> Vec<Vec<Visit>> {
        self.routes[robot].iter().map(|c| c.visits.clone()).collect()
    }

    /// Flat token sequence of one robot: task ids with inline `1` / `-1` markers.
    pub fn tokens(&self, robot: usize) -> Vec<i64> {
        let mut out = Vec::new();
        for c in &self.routes[robot] {
            out.extend(c.visits.iter().map(|v| i64::from(v.task.0)));
            out.extend(c.end.marker());
        }
        out
    }

    pub fn decompose_cycles(&self, robot: usize) -> Vec<CycleView> {
        self.routes[robot]
            .iter()
            .enumerate()
            .map(|(ordinal, c)| CycleView {
                robot,
                ordinal,
                task_sequence: c.visits.iter().map(|v| v.task).collect(),
                terminator: c.end,
                fruit_counts: c.visits.iter().map(|v| v.fruits).collect(),
            })
            .collect()
    }

    /// Fruits served per task across the fleet.
    pub fn fruit_totals(&self) -> BTreeMap<TaskId, u64> {
        let mut out = BTreeMap::new();
        for v in self.routes.iter().flatten().flat_map(|c| &c.visits) {
            *out.entry(v.task).or_insert(0) += u64::from(v.fruits);
        }
        out
    }

    pub fn energy_visits(&self, robot: usize) -> usize {
        self.routes[robot]
            .iter()
            .filter(|c| c.end == Terminator::EnergyVisit)
            .count()
    }

    /// Whether every task's yield is served exactly.
    pub fn is_demand_complete<S: Scalar>(&self, inst: &Instance<S>) -> bool {
        let totals = self.fruit_totals();
        totals.len() == inst.task_count()
            && inst
                .tasks()
                .iter()
                .all(|t| totals.get(&t.id) == Some(&u64::from(t.yield_fruits)))
    }
}

/// Pareto dominance for minimization: no worse everywhere, strictly better somewhere.
pub fn dominates<S: PartialOrd>(a: (S, S), b: (S, S)) -> bool {
    a.0 <= b.0 && a.1 <= b.1 && (a.0 < b.0 || a.1 < b.1)
}

/// Objective values closer than this, relative to their magnitude, count as
/// equal. Energies summed in different orders differ in the last bits.
pub const OBJECTIVE_RTOL: f64 = 1e-9;

pub fn approx_eq<S: Scalar>(a: S, b: S) -> bool {
    let (a, b) = (a.as_f64(), b.as_f64());
    (a - b).abs() <= OBJECTIVE_RTOL * a.abs().max(b.abs()).max(1.0)
}

/// [`dominates`] with rounding-level differences treated as ties.
pub fn dominates_approx<S: Scalar>(a: (S, S), b: (S, S)) -> bool {
    let le = |x: S, y: S| x <= y || approx_eq(x, y);
    let lt = |x: S, y: S| x < y && !approx_eq(x, y);
    le(a.0, b.0) && le(a.1, b.1) && (lt(a.0, b.0) || lt(a.1, b.1))
}

/// Battery left after leaving `from` with `load`, serving `visit`, and driving
/// back to the depot. The arithmetic order matches the route simulation, so a
/// nonnegative result guarantees the simulated return battery is nonnegative.
#[inline]
pub(crate) fn reserve_after_detour<S: Scalar>(
    inst: &Instance<S>,
    battery: S,
    from_slot: usize,
    load: u32,
    to_slot: usize,
    fruits: u32,
) -> S {
    let p = inst.params();
    let b = battery - p.travel_energy(inst.dist(from_slot, to_slot), load);
    let b = b - p.service_energy(fruits);
    b - p.travel_energy(inst.dist(to_slot, 0), load + fruits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominance_examples() {
        assert!(dominates((100.0, 5.0), (120.0, 6.0)));
        assert!(!dominates((100.0, 5.0), (100.0, 5.0)));
        assert!(!dominates((100.0, 7.0), (120.0, 6.0)));
        assert!(dominates((100.0, 5.0), (100.0, 6.0)));
    }

    #[test]
    fn tokens_and_cycle_views_agree() {
        let sol = Solution {
            routes: vec![vec![
                Cycle { visits: vec![Visit::new(2, 5), Visit::new(3, 1)], end: Terminator::LoadVisit },
                Cycle { visits: vec![Visit::new(4, 2)], end: Terminator::EnergyVisit },
                Cycle { visits: vec![Visit::new(5, 9)], end: Terminator::EndOfRoute },
            ]],
        };
        assert_eq!(sol.tokens(0), vec![2, 3, 1, 4, -1, 5]);
        let views = sol.decompose_cycles(0);
        assert_eq!(views.len(), 3);
        assert_eq!(views[1].terminator, Terminator::EnergyVisit);
        assert_eq!(views[0].fruit_counts, vec![5, 1]);
        let rebuilt: Vec<i64> = views
            .iter()
            .flat_map(|v| {
                v.task_sequence
                    .iter()
                    .map(|t| i64::from(t.0))
                    .chain(v.terminator.marker())
                    .collect::<Vec<_>>()
            })
            .collect();
        assert_eq!(rebuilt, sol.tokens(0));
    }
}
