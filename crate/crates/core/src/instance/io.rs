use serde::{Deserialize, Serialize};

use super::{DistanceMatrix, Instance, InstanceError, PhysicalParams, TaskId, TaskNode};
use crate::scalar::Scalar;

/// On-disk form of an [`Instance`]. Matrix slots: depot first, then tasks by ascending id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct InstanceFile<S> {
    pub name: String,
    pub params: PhysicalParams<S>,
    pub robot_count: usize,
    pub tasks: Vec<TaskRecord<S>>,
    pub distances: Vec<Vec<S>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct TaskRecord<S> {
    pub id: u32,
    #[serde(rename = "yield")]
    pub yield_fruits: u32,
    pub row: Option<u32>,
    pub pos: Option<S>,
}

impl<S: Scalar> Instance<S> {
    pub fn to_file(&self) -> InstanceFile<S> {
        InstanceFile {
            name: self.name.clone(),
            params: self.params.clone(),
            robot_count: self.robot_count,
            tasks: self
                .tasks
                .iter()
                .map(|t| TaskRecord {
                    id: t.id.0,
                    yield_fruits: t.yield_fruits,
                    row: t.position.map(|p| p.0),
                    pos: t.position.map(|p| p.1),
                })
                .collect(),
            distances: self.distances.rows().map(<[S]>::to_vec).collect(),
        }
    }

    pub fn from_file(file: InstanceFile<S>) -> Result<Self, InstanceError> {
        let tasks = file
            .tasks
            .into_iter()
            .map(|t| {
                let position = match (t.row, t.pos) {
                    (Some(r), Some(p)) => Some((r, p)),
                    (None, None) => None,
                    _ => {
                        return Err(InstanceError::Format(format!(
                            "task {} must give both `row` and `pos` or neither",
                            t.id
                        )))
                    }
                };
                Ok(TaskNode {
                    id: TaskId(t.id),
                    yield_fruits: t.yield_fruits,
                    position,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let distances = DistanceMatrix::from_rows(file.distances)?;
        Instance::new(file.name, tasks, file.robot_count, distances, file.params)
    }

    /// JSON text; reals use shortest round-trip formatting, so reading back is bit-exact.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let file: InstanceFile<S> =
            serde_json::from_str(text).map_err(|e| InstanceError::Format(e.to_string()))?;
        Self::from_file(file)
    }
}

#[cfg(test)]
mod tests {
    use crate::instance::{generate_instance, GeneratorSpec, Instance};
    use proptest::prelude::*;

    #[test]
    fn field_names_match_file_format() {
        let spec = GeneratorSpec::from_fraction("tiny", 2, 3, 0.5, 2, (1, 3), 4);
        let inst = generate_instance::<f64>(&spec).unwrap();
        let v: serde_json::Value = serde_json::from_str(&inst.to_json()).unwrap();
        for key in ["name", "params", "robot_count", "tasks", "distances"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        for key in ["id", "yield", "row", "pos"] {
            assert!(v["tasks"][0].get(key).is_some(), "missing task.{key}");
        }
        for key in [
            "load_capacity_fruits",
            "empty_weight_kg",
            "fruit_weight_kg",
            "pick_time_s",
            "speed_mps",
            "gravity",
            "rolling_mu",
            "efficiency",
            "battery_kJ",
            "swap_threshold_kJ",
            "swap_time_s",
            "pick_energy_kJ",
        ] {
            assert!(v["params"].get(key).is_some(), "missing params.{key}");
        }
    }

    #[test]
    fn malformed_file_is_an_error() {
        assert!(Instance::<f64>::from_json("{\"name\": 3}").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn json_round_trip_is_bit_exact(seed in any::<u64>(), rows in 1u32..6, cols in 1u32..6, frac in 0.1f64..1.0) {
            let spec = GeneratorSpec::from_fraction("rt", rows, cols, frac, 3, (1, 60), seed);
            let mut inst = generate_instance::<f64>(&spec).unwrap();
            // perturb reals so the round trip is exercised beyond short decimals
            let mut file = inst.to_file();
            for row in &mut file.distances {
                for d in row.iter_mut() {
                    *d *= 1.0 + 1e-7 * (seed % 97) as f64 / 3.0;
                }
            }
            file.params.efficiency = 0.8 / 3.0 + 0.5;
            inst = Instance::from_file(file).unwrap();
            let back = Instance::<f64>::from_json(&inst.to_json()).unwrap();
            prop_assert_eq!(&back, &inst);
            for (a, b) in back.to_file().distances.iter().flatten().zip(inst.to_file().distances.iter().flatten()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
