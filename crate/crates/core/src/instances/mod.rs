//! Instance sources: the hand-built catalog, seeded random tiny instances,
//! the synthetic benchmark generator and the EVRPTW converter.

pub mod builder;
pub mod evrptw;
pub mod generator;
pub mod random;
pub mod tiny;

use thiserror::Error;

use crate::model::ModelError;

pub use builder::{InstanceBuilder, Metric};
pub use generator::{generate, GenSpec, RoutePoint, RouteSet, Topology};
pub use random::{random_tiny, random_tiny_with};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("no instance with a feasible all-stations configuration after {attempts} attempts")]
    Infeasible { attempts: usize },
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}
