use clap::Args;
use saba_core::instance::{generate_instance, preset, GeneratorSpec};
use saba_core::Instance;

use crate::error::{write, CliError, CliResult};
use crate::Global;

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Benchmark preset: pro1 .. pro15 or realworld.
    #[arg(long, conflicts_with_all = ["rows", "cols", "tasks", "robots"])]
    preset: Option<String>,
    #[arg(long, required_unless_present = "preset")]
    rows: Option<u32>,
    #[arg(long, required_unless_present = "preset")]
    cols: Option<u32>,
    #[arg(long, required_unless_present = "preset")]
    tasks: Option<usize>,
    #[arg(long, required_unless_present = "preset")]
    robots: Option<usize>,
    #[arg(long, default_value_t = 30)]
    yield_min: u32,
    #[arg(long, default_value_t = 50)]
    yield_max: u32,
    /// Instance name; defaults to the preset name or `grid<rows>x<cols>-n<tasks>-r<robots>-s<seed>`.
    #[arg(long)]
    name: Option<String>,
    /// Load capacity Q in fruits.
    #[arg(long)]
    capacity: Option<u32>,
    /// Battery capacity B_c in kJ.
    #[arg(long)]
    battery: Option<f64>,
    /// Swap threshold B_th in kJ; defaults to 20 % of the battery.
    #[arg(long)]
    threshold: Option<f64>,
}

pub fn run(g: &Global, a: &GenerateArgs) -> CliResult<()> {
    let mut spec = match &a.preset {
        Some(p) => preset(p, g.seed).map_err(CliError::config)?,
        None => {
            let (rows, cols, tasks, robots) = (a.rows.unwrap(), a.cols.unwrap(), a.tasks.unwrap(), a.robots.unwrap());
            GeneratorSpec {
                name: format!("grid{rows}x{cols}-n{tasks}-r{robots}-s{}", g.seed),
                rows,
                cols,
                task_count: tasks,
                robot_count: robots,
                yield_range: (a.yield_min, a.yield_max),
                harvest_fraction: tasks as f64 / (f64::from(rows) * f64::from(cols)).max(1.0),
                seed: g.seed,
            }
        }
    };
    if let Some(n) = &a.name {
        spec.name = n.clone();
    }
    if spec.name.is_empty() || spec.name.contains(['/', '\\']) {
        return Err(CliError::Config(format!("invalid instance name {:?}", spec.name)));
    }
    let inst: Instance = generate_instance(&spec).map_err(CliError::config)?;
    let mut file = inst.to_file();
    if let Some(q) = a.capacity {
        file.params.load_capacity_fruits = q;
    }
    if let Some(b) = a.battery {
        file.params.battery_kj = b;
        file.params.swap_threshold_kj = 0.2 * b;
    }
    if let Some(t) = a.threshold {
        file.params.swap_threshold_kj = t;
    }
    let inst = Instance::from_file(file).map_err(CliError::config)?;
    let path = g.out.join(format!("{}.json", spec.name));
    write(&path, inst.to_json())?;
    println!("{}", path.display());
    Ok(())
}
