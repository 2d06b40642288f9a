//! Joint siting of stationary and dynamic (inductive) charging infrastructure
//! for a fleet of electric vehicles operating on fixed timetabled routes.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: instances, configurations, price curves, solutions, cost
//!   evaluation and feasibility validation.
//! - [`graph`]: per-vehicle expanded graphs with charging arcs.
//! - [`rcspp`]: the bidirectional label-setting routing subproblem.
//! - [`ils`]: the iterated local search over charging configurations.
//! - [`instances`]: the tiny test catalog and the synthetic generator.
//! - [`mip`]: the compact MIP export and the brute-force oracle.
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod graph;
pub mod ils;
pub mod instances;
pub mod mip;
pub mod model;
pub mod rcspp;

/// Absolute tolerance used for all floating-point feasibility comparisons.
pub const TOL: f64 = 1e-9;
