//! Problem instances: orchard task nodes, the depot-rooted distance matrix,
//! and the physical calibration of the homogeneous robot fleet.

mod generate;
mod io;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

pub use generate::{
    aisle_distance, generate_instance, preset, GeneratorSpec, OrchardLayout, Position, PRESET_NAMES,
};
pub use io::{InstanceFile, TaskRecord};
pub use validate::{validate_instance, InstanceViolation};

/// Identifier of a task node. Ids `-1`, `0` and `1` are depot aliases in the
/// route encoding, so task ids start at 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TaskId(pub u32);

impl TaskId {
    pub const FIRST: u32 = 2;
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A tree whose fruit must be harvested.
#[derive(Clone, Debug, PartialEq)]
pub struct TaskNode<S> {
    pub id: TaskId,
    pub yield_fruits: u32,
    /// Orchard row index (0-based) and position along the row in meters, when known.
    pub position: Option<(u32, S)>,
}

/// Fleet calibration. Units: fruits, kg, s, m/s, m/s², kJ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams<S> {
    pub load_capacity_fruits: u32,
    pub empty_weight_kg: S,
    pub fruit_weight_kg: S,
    pub pick_time_s: S,
    pub speed_mps: S,
    pub gravity: S,
    pub rolling_mu: S,
    pub efficiency: S,
    #[serde(rename = "battery_kJ")]
    pub battery_kj: S,
    #[serde(rename = "swap_threshold_kJ")]
    pub swap_threshold_kj: S,
    pub swap_time_s: S,
    #[serde(rename = "pick_energy_kJ")]
    pub pick_energy_kj: S,
}

impl<S: Scalar> Default for PhysicalParams<S> {
    fn default() -> Self {
        let battery = S::of(432.0);
        Self {
            load_capacity_fruits: 300,
            empty_weight_kg: S::of(30.0),
            fruit_weight_kg: S::of(0.3),
            pick_time_s: S::of(7.0),
            speed_mps: S::of(1.0),
            gravity: S::of(9.81),
            rolling_mu: S::of(0.05),
            efficiency: S::of(0.8),
            battery_kj: battery,
            swap_threshold_kj: S::of(0.2) * battery,
            swap_time_s: S::of(150.0),
            pick_energy_kj: S::of(0.3),
        }
    }
}

impl<S: Scalar> PhysicalParams<S> {
    /// Rolling-resistance travel energy in kJ over `distance_m` while carrying `load` fruits.
    #[inline]
    pub fn travel_energy(&self, distance_m: S, load: u32) -> S {
        let mass = self.empty_weight_kg + S::of_u32(load) * self.fruit_weight_kg;
        distance_m * mass * self.gravity * self.rolling_mu / self.efficiency * S::of(1e-3)
    }

    #[inline]
    pub fn travel_time(&self, distance_m: S) -> S {
        distance_m / self.speed_mps
    }

    #[inline]
    pub fn service_energy(&self, fruits: u32) -> S {
        S::of_u32(fruits) * self.pick_energy_kj
    }

    #[inline]
    pub fn pick_time(&self, fruits: u32) -> S {
        S::of_u32(fruits) * self.pick_time_s
    }
}

/// Dense row-major matrix over matrix slots; slot 0 is the depot.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix<S> {
    size: usize,
    data: Vec<S>,
}

impl<S: Scalar> DistanceMatrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, InstanceError> {
        let size = rows.len();
        let mut data = Vec::with_capacity(size * size);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(InstanceError::MatrixShape {
                    row: i,
                    len: row.len(),
                    expected: size,
                });
            }
            data.extend(row);
        }
        Ok(Self { size, data })
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(f(i, j));
            }
        }
        Self { size, data }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[i * self.size + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.data.chunks(self.size.max(1))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("task id {0} is reserved for the depot (task ids start at 2)")]
    ReservedId(u32),
    #[error("task id {0} appears more than once")]
    DuplicateId(u32),
    #[error("distance matrix row {row} has {len} entries, expected {expected}")]
    MatrixShape {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("distance matrix has {got} rows, expected {expected} (depot + tasks)")]
    MatrixSize { got: usize, expected: usize },
    #[error("robot count must be at least 1")]
    NoRobots,
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("malformed instance file: {0}")]
    Format(String),
}

/// An immutable problem instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance<S> {
    name: String,
    tasks: Vec<TaskNode<S>>,
    robot_count: usize,
    distances: DistanceMatrix<S>,
    params: PhysicalParams<S>,
    /// `slot_of[id]` is the matrix slot of task `id`; `usize::MAX` when absent.
    slot_of: Vec<usize>,
}

impl<S: Scalar> Instance<S> {
    /// Builds an instance. Tasks are stored by ascending id, which is also the
    /// expected order of matrix slots `1..`.
    pub fn new(
        name: impl Into<String>,
        mut tasks: Vec<TaskNode<S>>,
        robot_count: usize,
        distances: DistanceMatrix<S>,
        params: PhysicalParams<S>,
    ) -> Result<Self, InstanceError> {
        if robot_count == 0 {
            return Err(InstanceError::NoRobots);
        }
        tasks.sort_by_key(|t| t.id);
        for pair in tasks.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(InstanceError::DuplicateId(pair[0].id.0));
            }
        }
        if let Some(bad) = tasks.iter().find(|t| t.id.0 < TaskId::FIRST) {
            return Err(InstanceError::ReservedId(bad.id.0));
        }
        if distances.size() != tasks.len() + 1 {
            return Err(InstanceError::MatrixSize {
                got: distances.size(),
                expected: tasks.len() + 1,
            });
        }
        let max_id = tasks.last().map_or(0, |t| t.id.0 as usize);
        let mut slot_of = vec![usize::MAX; max_id + 1];
        for (k, t) in tasks.iter().enumerate() {
            slot_of[t.id.0 as usize] = k + 1;
        }
        Ok(Self {
            name: name.into(),
            tasks,
            robot_count,
            distances,
            params,
            slot_of,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tasks(&self) -> &[TaskNode<S>] {
        &self.tasks
    }

    pub fn task_count(&self) -> usize {
        self.tasks.len()
    }

    pub fn robot_count(&self) -> usize {
        self.robot_count
    }

    pub fn params(&self) -> &PhysicalParams<S> {
        &self.params
    }

    pub fn distances(&self) -> &DistanceMatrix<S> {
        &self.distances
    }

    /// Matrix slot of a task (depot is slot 0), if the task exists.
    #[inline]
    pub fn slot(&self, id: TaskId) -> Option<usize> {
        match self.slot_of.get(id.0 as usize) {
            Some(&s) if s != usize::MAX => Some(s),
            _ => None,
        }
    }

    pub fn task(&self, id: TaskId) -> Option<&TaskNode<S>> {
        self.slot(id).map(|s| &self.tasks[s - 1])
    }

    pub fn yield_of(&self, id: TaskId) -> Option<u32> {
        self.task(id).map(|t| t.yield_fruits)
    }

    /// Distance between matrix slots.
    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> S {
        self.distances.get(a, b)
    }

    pub fn total_yield(&self) -> u64 {
        self.tasks.iter().map(|t| u64::from(t.yield_fruits)).sum()
    }

    /// Mean depot-to-task distance (the `D` column of the benchmark table).
    pub fn mean_depot_distance(&self) -> S {
        if self.tasks.is_empty() {
            return S::zero();
        }
        let total: S = (1..=self.tasks.len()).map(|s| self.dist(0, s)).sum();
        total / S::from_usize(self.tasks.len()).unwrap()
    }

    /// Default time budget in seconds: half a second per task.
    pub fn default_budget_s(&self) -> f64 {
        self.tasks.len() as f64 * 0.5
    }
}
