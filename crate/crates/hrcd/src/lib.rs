//! Solver library for the human-robot co-dispatch facility location
//! problem: pick command-center locations and levels, assign demand sites,
//! and staff each center with robots and humans under supervision-ratio,
//! SLA, and capacity constraints, minimizing total cost.
//!
//! The crate ships two solvers behind one evaluation model: an exact
//! branch-and-bound reference for desk-scale instances, and a two-stage
//! constructive-greedy plus best-improvement local-search heuristic that
//! scales to thousands of sites. A seeded generator reproduces the
//! benchmark instance families, and the `bench` module runs the scenario
//! protocol end to end.

pub mod bench;
pub mod exact;
pub mod generate;
pub mod heuristic;
pub mod instance;
pub mod model;

pub use instance::{Instance, Level, Money, ResourceKind, ScenarioConfig, ScenarioName, Tier};
pub use model::{CostBreakdown, Solution};
