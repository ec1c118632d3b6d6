use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::config::{ConfigError, RunConfig};
use super::construct::random_solution;
use super::front::{FrontPoint, ParetoFront};
use super::operators::mutate;
use super::selection::{environmental_selection, nondominated_ranks, rank_and_crowding, tournament};
use crate::instance::Instance;
use crate::metrics::{hypervolume, NormalizationBounds};
use crate::psrm::psrm_traced;
use crate::sabm::sabm_traced;
use crate::scalar::Scalar;
use crate::schedule::{approx_eq, dominates, dominates_approx, repair_depot_markers, score, RepairError, Score, Solution};
use crate::trace::TraceEvent;
use crate::work::{self, Stopwatch};

#[derive(Clone, Debug, PartialEq)]
pub struct Individual<S> {
    pub solution: Solution,
    pub score: Score<S>,
}

impl<S: Scalar> Individual<S> {
    pub fn objectives(&self) -> (S, S) {
        self.score.objectives()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Population<S> {
    pub individuals: Vec<Individual<S>>,
    /// Indices of the rank-0 members.
    pub nondominated: Vec<usize>,
}

impl<S: Scalar> Population<S> {
    pub fn new(individuals: Vec<Individual<S>>) -> Self {
        let mut p = Self { individuals, nondominated: Vec::new() };
        p.refresh();
        p
    }

    fn refresh(&mut self) {
        let rank = nondominated_ranks(&self.objectives());
        self.nondominated = (0..rank.len()).filter(|&i| rank[i] == 0).collect();
    }

    pub fn objectives(&self) -> Vec<(S, S)> {
        self.individuals.iter().map(Individual::objectives).collect()
    }

    pub fn front(&self) -> ParetoFront<S> {
        ParetoFront::from_candidates(self.individuals.iter().map(|i| FrontPoint {
            makespan_s: i.score.makespan_s,
            energy_kj: i.score.transport_energy_kj,
            solution: i.solution.clone(),
        }))
    }
}

/// One row of the run log.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogRow {
    pub generation: usize,
    pub elapsed_s: f64,
    pub front_size: usize,
    pub best_makespan: f64,
    pub best_energy: f64,
    pub hv_archive: f64,
}

#[derive(Clone, Debug)]
pub struct RunResult<S> {
    pub population: Population<S>,
    pub front: ParetoFront<S>,
    pub log: Vec<LogRow>,
    pub trace: Vec<TraceEvent>,
    pub generations: usize,
    /// Seconds on the configured clock at return.
    pub elapsed_s: f64,
    pub wall_s: f64,
    pub mean_iteration_s: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Repair(#[from] RepairError),
}

fn objectives_match<S: Scalar>(a: (S, S), b: (S, S)) -> bool {
    approx_eq(a.0, b.0) && approx_eq(a.1, b.1)
}

fn evaluated<S: Scalar>(inst: &Instance<S>, solution: Solution) -> Option<Individual<S>> {
    let score = score(inst, &solution).ok()?;
    score.feasible.then_some(Individual { solution, score })
}

/// Constructs `population_size` feasible individuals.
pub fn initialize_population<S: Scalar, R: Rng>(
    inst: &Instance<S>,
    cfg: &RunConfig,
    rng: &mut R,
) -> Result<Population<S>, RepairError> {
    let mut out = Vec::with_capacity(cfg.population_size);
    for _ in 0..cfg.population_size {
        let sol = random_solution(inst, rng)?;
        out.push(evaluated(inst, sol).expect("repaired construction is feasible"));
    }
    Ok(Population::new(out))
}

/// One generation: tournament, mutation, repair, then rank/crowding truncation
/// of parents and offspring. An offspring that fails repair is replaced by its parent.
pub fn evolve_step<S: Scalar, R: Rng>(pop: &Population<S>, inst: &Instance<S>, cfg: &RunConfig, rng: &mut R) -> Population<S> {
    let (rank, crowd) = rank_and_crowding(&pop.objectives());
    let mut union = pop.individuals.clone();
    for _ in 0..cfg.population_size {
        work::tick(work::OFFSPRING);
        let parent = &pop.individuals[tournament(&rank, &crowd, rng)];
        let mut plan = parent.solution.plan();
        mutate(&mut plan, rng);
        let child = repair_depot_markers(inst, &plan).ok().and_then(|s| evaluated(inst, s));
        union.push(child.unwrap_or_else(|| parent.clone()));
    }
    let points: Vec<(S, S)> = union.iter().map(Individual::objectives).collect();
    let keep = environmental_selection(&points, cfg.population_size);
    Population::new(keep.into_iter().map(|i| union[i].clone()).collect())
}

struct Archive<S> {
    points: Vec<(S, S)>,
    bounds: NormalizationBounds,
}

impl<S: Scalar> Archive<S> {
    fn add(&mut self, p: (S, S)) {
        work::tick(self.points.len() as u64 * work::PAIR);
        if self.points.iter().any(|&q| q == p || dominates(q, p)) {
            return;
        }
        self.points.retain(|&q| !dominates(p, q));
        self.points.push(p);
    }

    fn hv(&self) -> f64 {
        work::tick(self.points.len() as u64 * work::PAIR * 4);
        hypervolume(&self.points, &self.bounds)
    }
}

/// The SABA main loop: initial SABM sweep, generations with probabilistic
/// SABM on the rank-0 members, and PSRM on the final front.
pub fn run<S: Scalar>(inst: &Instance<S>, cfg: &RunConfig) -> Result<RunResult<S>, RunError> {
    cfg.check()?;
    let sw = Stopwatch::start(cfg.clock);
    let budget = cfg.time_budget_s;
    let mut base_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut mech_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    mech_rng.set_stream(1);
    let mut trace = Vec::new();
    let mut trace_sink = cfg.trace.then_some(&mut trace);

    let mut pop = initialize_population(inst, cfg, &mut base_rng)?;
    let mut archive = Archive {
        points: Vec::new(),
        // origin as ideal, initial population's worst values as nadir
        bounds: {
            let init = NormalizationBounds::from_points(pop.objectives());
            NormalizationBounds::new([0.0, 0.0], init.max)
        },
    };
    for p in pop.objectives() {
        archive.add(p);
    }

    let mut apply_sabm = |pop: &mut Population<S>, members: Vec<usize>, generation: usize, archive: &mut Archive<S>, rng: &mut ChaCha8Rng| {
        let mut extra = Vec::new();
        for i in members {
            if sw.elapsed_s() >= budget {
                break;
            }
            let before = pop.individuals[i].objectives();
            let start = trace_sink.as_ref().map_or(0, |t| t.len());
            let out = sabm_traced(inst, &pop.individuals[i].solution, rng, trace_sink.as_deref_mut());
            // an improvement replaces its parent, a trade-off joins the population
            let accepted = match evaluated(inst, out) {
                Some(ind) if dominates_approx(ind.objectives(), before) => {
                    archive.add(ind.objectives());
                    pop.individuals[i] = ind;
                    true
                }
                Some(ind) if !dominates_approx(before, ind.objectives()) && !objectives_match(before, ind.objectives()) => {
                    archive.add(ind.objectives());
                    extra.push(ind);
                    true
                }
                _ => false,
            };
            if let Some(t) = trace_sink.as_deref_mut() {
                for ev in &mut t[start..] {
                    ev.generation = generation;
                }
                if let Some(last) = t.last_mut() {
                    last.accepted = accepted;
                }
            }
        }
        if !extra.is_empty() {
            let keep = pop.individuals.len();
            pop.individuals.extend(extra);
            let survivors = environmental_selection(&pop.objectives(), keep);
            let mut all: Vec<Option<Individual<S>>> = pop.individuals.drain(..).map(Some).collect();
            pop.individuals = survivors.into_iter().map(|k| all[k].take().expect("survivors are distinct")).collect();
        }
        pop.refresh();
    };

    if cfg.sabm_enabled() {
        let all = (0..pop.individuals.len()).collect();
        apply_sabm(&mut pop, all, 0, &mut archive, &mut mech_rng);
    }
    let log_row = |generation: usize, pop: &Population<S>, archive: &Archive<S>, elapsed: f64| {
        let nd: Vec<(S, S)> = pop.nondominated.iter().map(|&i| pop.individuals[i].objectives()).collect();
        LogRow {
            generation,
            elapsed_s: elapsed,
            front_size: nd.len(),
            best_makespan: nd.iter().map(|p| p.0.as_f64()).fold(f64::INFINITY, f64::min),
            best_energy: nd.iter().map(|p| p.1.as_f64()).fold(f64::INFINITY, f64::min),
            hv_archive: archive.hv(),
        }
    };
    let mut log = vec![log_row(0, &pop, &archive, sw.elapsed_s())];

    let mut generations = 0;
    let mut mean_iter = 0.0;
    while sw.elapsed_s() < budget {
        pop = evolve_step(&pop, inst, cfg, &mut base_rng);
        for p in pop.objectives() {
            archive.add(p);
        }
        generations += 1;
        if cfg.sabm_enabled() && mech_rng.gen::<f64>() <= cfg.sabm_probability {
            let members = pop.nondominated.clone();
            apply_sabm(&mut pop, members, generations, &mut archive, &mut mech_rng);
        }
        let now = sw.elapsed_s();
        mean_iter = now / generations as f64;
        log.push(log_row(generations, &pop, &archive, now));
        if now + mean_iter >= budget {
            break;
        }
    }

    if !cfg.ablation.disable_psrm {
        for i in pop.nondominated.clone() {
            let mut sol = pop.individuals[i].solution.clone();
            for _ in 0..cfg.psrm_passes {
                let start = trace.len();
                sol = psrm_traced(inst, &sol, cfg.trace.then_some(&mut trace));
                for ev in &mut trace[start..] {
                    ev.generation = generations;
                }
            }
            if let Some(ind) = evaluated(inst, sol) {
                pop.individuals[i] = ind;
            }
        }
        pop.refresh();
    }

    Ok(RunResult {
        front: pop.front(),
        population: pop,
        log,
        trace,
        generations,
        elapsed_s: sw.elapsed_s(),
        wall_s: sw.wall_s(),
        mean_iteration_s: mean_iter,
    })
}
