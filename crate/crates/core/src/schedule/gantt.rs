use serde::Serialize;

use super::EvaluationReport;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GanttKind {
    Travel,
    Pick,
    Swap,
}

impl GanttKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GanttKind::Travel => "travel",
            GanttKind::Pick => "pick",
            GanttKind::Swap => "swap",
        }
    }
}

/// One bar of the schedule chart: `robot,cycle,start_s,end_s,kind`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct GanttRow<S> {
    pub robot: usize,
    pub cycle: usize,
    pub start_s: S,
    pub end_s: S,
    pub kind: GanttKind,
}

/// Per-cycle time blocks, laid out travel, pick, swap. Zero-length blocks are skipped.
pub fn gantt_rows<S: Scalar>(report: &EvaluationReport<S>) -> Vec<GanttRow<S>> {
    let mut rows = Vec::new();
    for (robot, r) in report.per_robot.iter().enumerate() {
        let mut t = S::zero();
        for (cycle, c) in r.cycles.iter().enumerate() {
            for (kind, len) in [(GanttKind::Travel, c.travel_s), (GanttKind::Pick, c.pick_s), (GanttKind::Swap, c.swap_s)] {
                if len > S::zero() {
                    rows.push(GanttRow { robot, cycle, start_s: t, end_s: t + len, kind });
                    t += len;
                }
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{DistanceMatrix, Instance, PhysicalParams, TaskId, TaskNode};
    use crate::schedule::{evaluate, Cycle, Solution, Terminator, Visit};

    #[test]
    fn bars_tile_each_robot_timeline() {
        let inst = Instance::new(
            "g",
            vec![TaskNode { id: TaskId(2), yield_fruits: 4, position: None }],
            2,
            DistanceMatrix::from_rows(vec![vec![0.0, 10.0], vec![10.0, 0.0]]).unwrap(),
            PhysicalParams::<f64>::default(),
        )
        .unwrap();
        let sol = Solution {
            routes: vec![
                vec![
                    Cycle { visits: vec![Visit::new(2, 1)], end: Terminator::LoadVisit },
                    Cycle { visits: vec![Visit::new(2, 2)], end: Terminator::EndOfRoute },
                ],
                vec![Cycle { visits: vec![Visit::new(2, 1)], end: Terminator::EndOfRoute }],
            ],
        };
        let rep = evaluate(&inst, &sol).unwrap();
        let rows = gantt_rows(&rep);
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[1], GanttRow { robot: 0, cycle: 0, start_s: 20.0, end_s: 27.0, kind: GanttKind::Pick });
        assert_eq!(rows[3].end_s, rep.per_robot[0].completion_time_s);
        assert_eq!(rows[5].end_s, 27.0);
    }
}
