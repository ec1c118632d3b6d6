use serde::Serialize;

/// One SABM or PSRM step, written as a JSON line by `solve --trace`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEvent {
    pub generation: usize,
    pub step: &'static str,
    pub robot: Option<usize>,
    /// (makespan_s, energy_kJ) before and after the step.
    pub before: (f64, f64),
    pub after: (f64, f64),
    /// Anchored segments frozen by SAS.
    pub anchors: usize,
    /// Distinct tasks in the residual pool (RWBS) or in the donor cycle (PSRM).
    pub pool_tasks: usize,
    pub accepted: bool,
}

impl TraceEvent {
    pub fn new(step: &'static str, before: (f64, f64), after: (f64, f64)) -> Self {
        Self { generation: 0, step, robot: None, before, after, anchors: 0, pool_tasks: 0, accepted: true }
    }
}
