//! Active-time scheduling on a machine that runs up to `B` jobs at a time.
//!
//! The machine is charged for every unit slot in which it executes at least
//! one job. The crate provides exact solvers for the tractable cases, a
//! greedy heuristic for the general multi-window case, LP exporters, and
//! brute-force oracles used by the test suites.

pub mod batchdp;
pub mod error;
pub mod gen;
pub mod lazyact;
pub mod matchcore;
pub mod model;
pub mod multiwin;
pub mod oracle;
pub mod preempt;
pub mod rational;

pub use error::{Error, Result};
pub use model::{
    BatchSchedule, Instance, IntegralSchedule, Job, PreemptiveAssignment, Region, TimedSchedule,
    ValidationReport, Violation, Window,
};
pub use rational::Rational;
