use std::fmt;

use super::{Instance, TaskId};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum InstanceViolation {
    ZeroYield(TaskId),
    /// A physical parameter outside its admissible range.
    Parameter(&'static str),
    NonzeroDiagonal(usize),
    Asymmetric(usize, usize),
    NegativeDistance(usize, usize),
    NonFiniteDistance(usize, usize),
    /// A full battery cannot cover depot -> task -> depot plus one fruit of service.
    Unreachable { task: TaskId, energy_kj: f64 },
}

impl fmt::Display for InstanceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ZeroYield(t) => write!(f, "task {t} has zero yield"),
            Self::Parameter(p) => write!(f, "parameter {p} out of range"),
            Self::NonzeroDiagonal(i) => write!(f, "distance[{i}][{i}] is not zero"),
            Self::Asymmetric(i, j) => write!(f, "distance matrix not symmetric at ({i}, {j})"),
            Self::NegativeDistance(i, j) => write!(f, "negative distance at ({i}, {j})"),
            Self::NonFiniteDistance(i, j) => write!(f, "non-finite distance at ({i}, {j})"),
            Self::Unreachable { task, energy_kj } => write!(
                f,
                "task {task} unreachable: round trip needs {energy_kj:.3} kJ, more than one battery"
            ),
        }
    }
}

/// Checks every instance invariant; an empty list means the instance is valid.
pub fn validate_instance<S: Scalar>(inst: &Instance<S>) -> Vec<InstanceViolation> {
    let mut out = Vec::new();
    let p = inst.params();
    let zero = S::zero();
    let positive: [(&'static str, S); 10] = [
        ("empty_weight_kg", p.empty_weight_kg),
        ("fruit_weight_kg", p.fruit_weight_kg),
        ("pick_time_s", p.pick_time_s),
        ("speed_mps", p.speed_mps),
        ("gravity", p.gravity),
        ("rolling_mu", p.rolling_mu),
        ("battery_kJ", p.battery_kj),
        ("swap_threshold_kJ", p.swap_threshold_kj),
        ("swap_time_s", p.swap_time_s),
        ("pick_energy_kJ", p.pick_energy_kj),
    ];
    for (name, v) in positive {
        if !(v > zero && v.is_finite()) {
            out.push(InstanceViolation::Parameter(name));
        }
    }
    if p.load_capacity_fruits == 0 {
        out.push(InstanceViolation::Parameter("load_capacity_fruits"));
    }
    if !(p.efficiency > zero && p.efficiency <= S::one()) {
        out.push(InstanceViolation::Parameter("efficiency"));
    }
    if !(p.swap_threshold_kj < p.battery_kj) {
        out.push(InstanceViolation::Parameter("swap_threshold_kJ"));
    }

    for t in inst.tasks() {
        if t.yield_fruits == 0 {
            out.push(InstanceViolation::ZeroYield(t.id));
        }
    }

    let m = inst.distances();
    let mut matrix_ok = true;
    for i in 0..m.size() {
        if m.get(i, i) != zero {
            out.push(InstanceViolation::NonzeroDiagonal(i));
            matrix_ok = false;
        }
        for j in 0..m.size() {
            let d = m.get(i, j);
            if !d.is_finite() {
                out.push(InstanceViolation::NonFiniteDistance(i, j));
                matrix_ok = false;
            } else if d < zero {
                out.push(InstanceViolation::NegativeDistance(i, j));
                matrix_ok = false;
            }
            if j > i && d != m.get(j, i) {
                out.push(InstanceViolation::Asymmetric(i, j));
                matrix_ok = false;
            }
        }
    }

    if matrix_ok {
        for (k, t) in inst.tasks().iter().enumerate() {
            let slot = k + 1;
            let out_leg = p.travel_energy(inst.dist(0, slot), 0);
            let back_leg = p.travel_energy(inst.dist(slot, 0), 1);
            let left = p.battery_kj - out_leg - p.service_energy(1) - back_leg;
            if !(left >= zero) {
                out.push(InstanceViolation::Unreachable {
                    task: t.id,
                    energy_kj: (out_leg + p.service_energy(1) + back_leg).as_f64(),
                });
            }
        }
    }
    out
}
