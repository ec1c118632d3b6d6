use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::Args;
use saba_core::evolution::{knee_index, run as run_saba, Ablation, RunConfig};
use saba_core::metrics::{hypervolume, NormalizationBounds};
use saba_core::schedule::{evaluate, gantt_rows};
use saba_core::work::{Clock, DEFAULT_NS_PER_UNIT};
use saba_core::{Instance, RunResult};

use crate::error::{write, CliError, CliResult};
use crate::evaluate::load_instance;
use crate::files::{front_table, FrontRow, Table};
use crate::svg;
use crate::Global;

#[derive(Debug, Args)]
pub struct SolveArgs {
    instance: PathBuf,
    /// Population size.
    #[arg(long, default_value_t = 30)]
    pop: usize,
    /// SABM invocation probability per generation.
    #[arg(long, default_value_t = 0.42)]
    p: f64,
    /// Budget in seconds per task.
    #[arg(long, default_value_t = 0.5)]
    budget_factor: f64,
    /// Budget in seconds; overrides --budget-factor.
    #[arg(long)]
    budget: Option<f64>,
    /// Independent runs, seeded seed, seed + 1, ...
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long)]
    no_sabm: bool,
    #[arg(long)]
    no_psrm: bool,
    /// PSRM applications to each final front member.
    #[arg(long, default_value_t = 1)]
    psrm_passes: u32,
    /// Write mechanism steps to trace.jsonl.
    #[arg(long)]
    trace: bool,
    /// Measure the budget in real time instead of counted work (not reproducible).
    #[arg(long)]
    wall_clock: bool,
    /// Nanoseconds charged per counted work unit.
    #[arg(long, default_value_t = DEFAULT_NS_PER_UNIT)]
    work_rate: f64,
}

impl SolveArgs {
    fn config(&self, inst: &Instance, seed: u64) -> CliResult<RunConfig> {
        let budget = self.budget.unwrap_or(inst.task_count() as f64 * self.budget_factor);
        let cfg = RunConfig {
            population_size: self.pop,
            sabm_probability: self.p,
            ablation: Ablation { disable_sabm: self.no_sabm, disable_psrm: self.no_psrm },
            psrm_passes: self.psrm_passes,
            clock: if self.wall_clock { Clock::Wall } else { Clock::Work { ns_per_unit: self.work_rate } },
            trace: self.trace,
            ..RunConfig::with_budget(budget, seed)
        };
        cfg.check().map_err(CliError::config)?;
        Ok(cfg)
    }
}

/// Runs `jobs` closures on up to `threads` workers; results come back in job order.
fn parallel<T: Send>(threads: usize, jobs: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..jobs).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..threads.clamp(1, jobs.max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= jobs {
                    break;
                }
                let out = f(k);
                slots.lock().expect("no poisoned workers")[k] = Some(out);
            });
        }
    });
    slots.into_inner().expect("no poisoned workers").into_iter().map(|o| o.expect("every job ran")).collect()
}

pub fn run(g: &Global, a: &SolveArgs) -> CliResult<()> {
    if a.runs == 0 {
        return Err(CliError::Config("--runs must be at least 1".into()));
    }
    let inst = load_instance(&a.instance)?;
    let configs: Vec<RunConfig> = (0..a.runs).map(|k| a.config(&inst, g.seed.wrapping_add(k as u64))).collect::<CliResult<_>>()?;
    let results = parallel(g.threads, a.runs, |k| run_saba(&inst, &configs[k]));
    let results: Vec<RunResult> = results.into_iter().collect::<Result<_, _>>().map_err(CliError::config)?;

    let dir = g.out.join(inst.name());
    let bounds = NormalizationBounds::from_points(results.iter().flat_map(|r| r.front.objectives()));
    let mut summary = Table::new(&[
        "run",
        "seed",
        "generations",
        "elapsed_s",
        "wall_s",
        "mean_iteration_s",
        "front_size",
        "hv",
        "knee_makespan_s",
        "knee_energy_kJ",
    ]);
    for (k, (res, cfg)) in results.iter().zip(&configs).enumerate() {
        let run_dir = dir.join(format!("run_{k:02}"));
        let knee = write_run(g, &inst, res, cfg, &run_dir)?;
        summary.push(vec![
            k.to_string(),
            cfg.seed.to_string(),
            res.generations.to_string(),
            res.elapsed_s.to_string(),
            res.wall_s.to_string(),
            res.mean_iteration_s.to_string(),
            res.front.len().to_string(),
            hypervolume(&res.front.objectives(), &bounds).to_string(),
            knee.0.to_string(),
            knee.1.to_string(),
        ]);
    }
    let path = summary.save(&dir, "summary", g.format)?;
    print!("{}", summary.to_csv());
    eprintln!("wrote {}", path.display());
    Ok(())
}

/// Writes one run's artifacts and returns the knee objectives.
fn write_run(g: &Global, inst: &Instance, res: &RunResult, cfg: &RunConfig, dir: &Path) -> CliResult<(f64, f64)> {
    let mut rows = Vec::with_capacity(res.front.len());
    for (i, p) in res.front.points.iter().enumerate() {
        let file = format!("solutions/sol_{i:03}.json");
        write(&dir.join(&file), p.solution.to_json())?;
        rows.push(FrontRow { makespan_s: p.makespan_s, energy_kj: p.energy_kj, solution_file: file });
    }
    front_table(&rows).save(dir, "front", g.format)?;

    let mut log = Table::new(&["generation", "elapsed_s", "front_size", "best_makespan", "best_energy", "hv_archive"]);
    for r in &res.log {
        log.push(vec![
            r.generation.to_string(),
            r.elapsed_s.to_string(),
            r.front_size.to_string(),
            r.best_makespan.to_string(),
            r.best_energy.to_string(),
            r.hv_archive.to_string(),
        ]);
    }
    log.save(dir, "run_log", g.format)?;
    write(&dir.join("run_config.json"), serde_json::to_string_pretty(cfg).expect("config serializes") + "\n")?;

    let objectives = res.front.objectives();
    let knee = knee_index(&objectives).map_err(CliError::config)?;
    let point = &res.front.points[knee];
    write(&dir.join("knee.json"), point.solution.to_json())?;
    let report = evaluate(inst, &point.solution).map_err(CliError::config)?;
    let mut gantt = Table::new(&["robot", "cycle", "start_s", "end_s", "kind"]);
    let mut blocks = Vec::new();
    for r in gantt_rows(&report) {
        gantt.push(vec![r.robot.to_string(), r.cycle.to_string(), r.start_s.to_string(), r.end_s.to_string(), r.kind.as_str().into()]);
        blocks.push((r.robot, r.start_s, r.end_s, r.kind.as_str()));
    }
    gantt.save(dir, "knee_gantt", g.format)?;
    write(&dir.join("knee_gantt.svg"), svg::gantt(&format!("{} knee schedule", inst.name()), inst.robot_count(), &blocks))?;
    write(&dir.join("pareto.svg"), svg::pareto_scatter(&format!("{} Pareto front", inst.name()), &objectives, Some(knee)))?;

    if cfg.trace {
        let mut text = String::new();
        for ev in &res.trace {
            text.push_str(&serde_json::to_string(ev).expect("trace serializes"));
            text.push('\n');
        }
        write(&dir.join("trace.jsonl"), text)?;
    }
    Ok(point.objectives())
}
