//! Multi-robot harvest scheduling with split deliveries and battery swaps.
//!
//! The crate evaluates schedules exactly, searches for Pareto-optimal
//! (makespan, transport energy) trade-offs with the SABA metaheuristic, and
//! measures front quality. All real-valued code is generic over [`Scalar`];
//! the aliases at the crate root fix it to `f64`.

pub mod evolution;
pub mod instance;
pub mod metrics;
pub mod oracle;
pub mod psrm;
pub mod sabm;
pub mod scalar;
pub mod schedule;
pub mod trace;
pub mod work;

pub use scalar::Scalar;

pub type Instance = instance::Instance<f64>;
pub type PhysicalParams = instance::PhysicalParams<f64>;
pub type EvaluationReport = schedule::EvaluationReport<f64>;
pub type ParetoFront = evolution::ParetoFront<f64>;
pub type RunResult = evolution::RunResult<f64>;

/// Single-precision variants.
pub mod f32 {
    pub type Instance = crate::instance::Instance<f32>;
    pub type EvaluationReport = crate::schedule::EvaluationReport<f32>;
    pub type ParetoFront = crate::evolution::ParetoFront<f32>;
}
