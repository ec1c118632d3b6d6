use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DistanceMatrix, Instance, InstanceError, PhysicalParams, TaskId, TaskNode};
use crate::scalar::Scalar;

/// Parameters of a random orchard instance.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub name: String,
    pub rows: u32,
    pub cols: u32,
    pub task_count: usize,
    pub robot_count: usize,
    pub yield_range: (u32, u32),
    /// Share of trees ripe for this batch. Only used by [`GeneratorSpec::from_fraction`]
    /// to derive `task_count`; `task_count` is authoritative.
    pub harvest_fraction: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    /// Spec whose task count is `round(rows * cols * harvest_fraction)`.
    pub fn from_fraction(
        name: impl Into<String>,
        rows: u32,
        cols: u32,
        harvest_fraction: f64,
        robot_count: usize,
        yield_range: (u32, u32),
        seed: u64,
    ) -> Self {
        let cells = f64::from(rows) * f64::from(cols);
        Self {
            name: name.into(),
            rows,
            cols,
            task_count: (cells * harvest_fraction).round() as usize,
            robot_count,
            yield_range,
            harvest_fraction,
            seed,
        }
    }

    pub fn check(&self) -> Result<(), InstanceError> {
        let bad = |msg: String| Err(InstanceError::InvalidSpec(msg));
        if self.rows == 0 || self.cols == 0 {
            return bad("orchard needs at least one row and one column".into());
        }
        let cells = self.rows as usize * self.cols as usize;
        if self.task_count > cells {
            return bad(format!(
                "{} tasks do not fit on a {}x{} grid",
                self.task_count, self.rows, self.cols
            ));
        }
        if self.robot_count == 0 {
            return bad("robot count must be at least 1".into());
        }
        let (lo, hi) = self.yield_range;
        if lo == 0 || lo > hi {
            return bad(format!("yield range [{lo}, {hi}] must satisfy 1 <= min <= max"));
        }
        if !(self.harvest_fraction > 0.0 && self.harvest_fraction <= 1.0) {
            return bad(format!("harvest fraction {} not in (0, 1]", self.harvest_fraction));
        }
        Ok(())
    }
}

/// Benchmark presets: `pro1` .. `pro15` and `realworld`.
pub const PRESET_NAMES: [&str; 16] = [
    "pro1", "pro2", "pro3", "pro4", "pro5", "pro6", "pro7", "pro8", "pro9", "pro10", "pro11",
    "pro12", "pro13", "pro14", "pro15", "realworld",
];

// (rows, cols, n, r)
const BENCHMARK_TABLE: [(u32, u32, usize, usize); 15] = [
    (30, 50, 140, 4),
    (40, 70, 120, 5),
    (40, 90, 180, 4),
    (60, 100, 560, 4),
    (50, 120, 600, 6),
    (60, 130, 360, 6),
    (60, 140, 420, 5),
    (70, 150, 640, 7),
    (70, 160, 1260, 5),
    (80, 170, 1600, 5),
    (90, 170, 1320, 7),
    (80, 180, 1680, 6),
    (90, 190, 1820, 7),
    (100, 190, 1120, 5),
    (100, 200, 1500, 5),
];

/// Generator spec for a named preset.
pub fn preset(name: &str, seed: u64) -> Result<GeneratorSpec, InstanceError> {
    let lower = name.to_ascii_lowercase();
    if lower == "realworld" {
        // 880 trees laid out as 22 rows of 40, 75 % ripe, five robots.
        return Ok(GeneratorSpec::from_fraction("realworld", 22, 40, 0.75, 5, (30, 50), seed));
    }
    let idx: usize = lower
        .strip_prefix("pro")
        .and_then(|d| d.parse().ok())
        .filter(|k| (1..=15).contains(k))
        .ok_or_else(|| InstanceError::UnknownPreset(name.to_string()))?;
    let (rows, cols, n, r) = BENCHMARK_TABLE[idx - 1];
    let cells = f64::from(rows) * f64::from(cols);
    Ok(GeneratorSpec {
        name: lower,
        rows,
        cols,
        task_count: n,
        robot_count: r,
        yield_range: (30, 50),
        harvest_fraction: n as f64 / cells,
        seed,
    })
}

/// Orchard geometry: trees stand in parallel rows, robots move along the rows
/// and switch rows only through the front or back headland aisle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrchardLayout<S> {
    pub row_spacing_m: S,
    pub tree_spacing_m: S,
    /// Distance along the front aisle from the depot to row 0.
    pub depot_offset_m: S,
    /// Position of the back aisle measured along a row.
    pub row_length_m: S,
}

impl<S: Scalar> OrchardLayout<S> {
    pub fn for_grid(cols: u32) -> Self {
        let tree_spacing = S::of(2.0);
        Self {
            row_spacing_m: S::of(3.0),
            tree_spacing_m: tree_spacing,
            depot_offset_m: S::of(5.0),
            row_length_m: tree_spacing * S::of_u32(cols.saturating_sub(1)),
        }
    }

    pub fn tree(&self, row: u32, col: u32) -> Position<S> {
        Position::Tree {
            row,
            pos: self.tree_spacing_m * S::of_u32(col),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Position<S> {
    Depot,
    /// Row index and distance from the front aisle in meters.
    Tree { row: u32, pos: S },
}

/// Shortest aisle-constrained path length between two orchard positions.
pub fn aisle_distance<S: Scalar>(layout: &OrchardLayout<S>, a: Position<S>, b: Position<S>) -> S {
    match (a, b) {
        (Position::Depot, Position::Depot) => S::zero(),
        (Position::Depot, Position::Tree { row, pos }) | (Position::Tree { row, pos }, Position::Depot) => {
            layout.depot_offset_m + S::of_u32(row) * layout.row_spacing_m + pos
        }
        (Position::Tree { row: ra, pos: pa }, Position::Tree { row: rb, pos: pb }) => {
            if ra == rb {
                return (pa - pb).abs();
            }
            let across = S::of_u32(ra.abs_diff(rb)) * layout.row_spacing_m;
            let front = pa + across + pb;
            let back = (layout.row_length_m - pa) + across + (layout.row_length_m - pb);
            front.min(back)
        }
    }
}

/// Draws a random orchard instance with default physical parameters.
pub fn generate_instance<S: Scalar>(spec: &GeneratorSpec) -> Result<Instance<S>, InstanceError> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let cells = spec.rows as usize * spec.cols as usize;
    let mut picked = index::sample(&mut rng, cells, spec.task_count).into_vec();
    picked.sort_unstable();

    let layout = OrchardLayout::<S>::for_grid(spec.cols);
    let (lo, hi) = spec.yield_range;
    let mut positions = vec![Position::Depot];
    let mut tasks = Vec::with_capacity(picked.len());
    for (k, cell) in picked.into_iter().enumerate() {
        let row = (cell / spec.cols as usize) as u32;
        let col = (cell % spec.cols as usize) as u32;
        let at = layout.tree(row, col);
        let Position::Tree { pos, .. } = at else { unreachable!() };
        positions.push(at);
        tasks.push(TaskNode {
            id: TaskId(TaskId::FIRST + k as u32),
            yield_fruits: rng.gen_range(lo..=hi),
            position: Some((row, pos)),
        });
    }
    let distances =
        DistanceMatrix::from_fn(positions.len(), |i, j| aisle_distance(&layout, positions[i], positions[j]));
    Instance::new(
        spec.name.clone(),
        tasks,
        spec.robot_count,
        distances,
        PhysicalParams::default(),
    )
}
