//! Time-discrete mixed-integer model export and the exhaustive oracle.

pub mod lp;
pub mod model;
pub mod oracle;
pub mod warm;

use thiserror::Error;

use crate::model::ModelError;

pub use lp::write_lp;
pub use model::{build_mip, Family, MipModel, MipOptions, Sense, VarKind};
pub use oracle::{oracle_solve, oracle_vehicle, prefix_configurations, OracleLimits, OracleResult};
pub use warm::{decode_solution, encode_solution, parse_values, shortest_route_start, write_mst, write_values};

#[derive(Debug, Error)]
pub enum MipError {
    #[error("limits exceeded: {0}")]
    LimitsExceeded(String),
    #[error("malformed solver output at line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
