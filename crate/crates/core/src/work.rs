//! Deterministic work accounting.
//!
//! Wall-clock budgets make the number of generations, and therefore the final
//! front, depend on machine load. The solver instead counts elementary
//! operations (simulated legs, 2-opt move evaluations, dominance comparisons)
//! on a per-thread counter and converts them to seconds with a fixed rate.
//! A run pinned to this clock is bit-reproducible; [`Clock::Wall`] is
//! available when real elapsed time is what matters.

use std::cell::Cell;
use std::time::Instant;

use serde::{Deserialize, Serialize};

thread_local! {
    static UNITS: Cell<u64> = const { Cell::new(0) };
}

/// Nanoseconds charged per work unit by default. Calibrated so that one
/// virtual second is roughly one second of single-core release-build time.
pub const DEFAULT_NS_PER_UNIT: f64 = 14.0;

#[inline]
pub(crate) fn tick(n: u64) {
    UNITS.with(|u| u.set(u.get().wrapping_add(n)));
}

// Relative costs, in units, of the counted operations.
pub(crate) const LEG: u64 = 6;
pub(crate) const REPAIR_STEP: u64 = 7;
pub(crate) const PAIR: u64 = 2;
/// Copying, allocation and bookkeeping for one offspring.
pub(crate) const OFFSPRING: u64 = 350;

/// Work units recorded on the current thread so far.
pub fn units() -> u64 {
    UNITS.with(Cell::get)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Clock {
    Wall,
    Work { ns_per_unit: f64 },
}

impl Default for Clock {
    fn default() -> Self {
        Clock::Work {
            ns_per_unit: DEFAULT_NS_PER_UNIT,
        }
    }
}

/// Elapsed-time source for one run, started at construction.
#[derive(Clone, Debug)]
pub struct Stopwatch {
    clock: Clock,
    started: Instant,
    start_units: u64,
}

impl Stopwatch {
    pub fn start(clock: Clock) -> Self {
        Self {
            clock,
            started: Instant::now(),
            start_units: units(),
        }
    }

    /// Seconds on the configured clock.
    pub fn elapsed_s(&self) -> f64 {
        match self.clock {
            Clock::Wall => self.started.elapsed().as_secs_f64(),
            Clock::Work { ns_per_unit } => (units() - self.start_units) as f64 * ns_per_unit * 1e-9,
        }
    }

    /// Real seconds regardless of the configured clock.
    pub fn wall_s(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn work_clock_counts_ticks_only() {
        let sw = Stopwatch::start(Clock::Work { ns_per_unit: 1000.0 });
        assert_eq!(sw.elapsed_s(), 0.0);
        tick(2_000);
        assert!((sw.elapsed_s() - 2e-3).abs() < 1e-15);
    }
}
