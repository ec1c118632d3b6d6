//! The SABA search loop and its baseline machinery.

mod config;
pub mod construct;
mod front;
pub mod operators;
mod run;
pub mod selection;

pub use config::{Ablation, ConfigError, RunConfig, DEFAULT_BUDGET_FACTOR, DEFAULT_POPULATION, DEFAULT_SABM_PROBABILITY};
pub use front::{knee_index, select_default_solution, EmptyFront, FrontPoint, ParetoFront};
pub use run::{evolve_step, initialize_population, run, Individual, LogRow, Population, RunError, RunResult};
