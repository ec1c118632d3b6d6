use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::Instance;
use crate::scalar::Scalar;
use crate::work::Clock;

pub const DEFAULT_POPULATION: usize = 30;
pub const DEFAULT_SABM_PROBABILITY: f64 = 0.42;
pub const DEFAULT_BUDGET_FACTOR: f64 = 0.5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ablation {
    pub disable_sabm: bool,
    pub disable_psrm: bool,
}

impl Ablation {
    pub const FULL: Ablation = Ablation { disable_sabm: false, disable_psrm: false };
    pub const NO_SABM: Ablation = Ablation { disable_sabm: true, disable_psrm: false };
    pub const NO_PSRM: Ablation = Ablation { disable_sabm: false, disable_psrm: true };
    pub const BASELINE: Ablation = Ablation { disable_sabm: true, disable_psrm: true };
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub population_size: usize,
    pub time_budget_s: f64,
    pub sabm_probability: f64,
    pub seed: u64,
    pub ablation: Ablation,
    /// Times PSRM is applied to each front member at termination.
    pub psrm_passes: u32,
    pub clock: Clock,
    /// Record SABM/PSRM step events.
    pub trace: bool,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("population size must be at least 2, got {0}")]
    Population(usize),
    #[error("time budget must be positive and finite, got {0}")]
    Budget(f64),
    #[error("SABM probability must lie in [0, 1], got {0}")]
    Probability(f64),
    #[error("work clock rate must be positive, got {0}")]
    ClockRate(f64),
}

impl RunConfig {
    /// Defaults with a budget of half a second per task.
    pub fn for_instance<S: Scalar>(inst: &Instance<S>, seed: u64) -> Self {
        Self::with_budget(inst.default_budget_s().max(f64::MIN_POSITIVE), seed)
    }

    pub fn with_budget(time_budget_s: f64, seed: u64) -> Self {
        Self {
            population_size: DEFAULT_POPULATION,
            time_budget_s,
            sabm_probability: DEFAULT_SABM_PROBABILITY,
            seed,
            ablation: Ablation::FULL,
            psrm_passes: 1,
            clock: Clock::default(),
            trace: false,
        }
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        if self.population_size < 2 {
            return Err(ConfigError::Population(self.population_size));
        }
        if !(self.time_budget_s > 0.0 && self.time_budget_s.is_finite()) {
            return Err(ConfigError::Budget(self.time_budget_s));
        }
        if !(0.0..=1.0).contains(&self.sabm_probability) {
            return Err(ConfigError::Probability(self.sabm_probability));
        }
        if let Clock::Work { ns_per_unit } = self.clock {
            if !(ns_per_unit > 0.0 && ns_per_unit.is_finite()) {
                return Err(ConfigError::ClockRate(ns_per_unit));
            }
        }
        Ok(())
    }

    pub fn sabm_enabled(&self) -> bool {
        !self.ablation.disable_sabm && self.sabm_probability > 0.0
    }
}
