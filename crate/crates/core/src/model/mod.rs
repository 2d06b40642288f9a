//! Problem data, configurations, solutions, costs and validation.

mod config;
mod cost;
mod instance;
pub mod io;
mod price;
mod solution;
mod validate;

use thiserror::Error;

pub use config::Configuration;
pub use cost::{infrastructure_cost, operational_cost, price_plan, CostBreakdown};
pub use instance::{
    DynamicStation, EnergyParams, Instance, Network, NetworkArc, RouteStop, Segment, StationRef, StationaryStation,
    Vehicle, Vertex, VertexId, VertexKind,
};
pub use price::{PriceCurve, PricePoint};
pub use solution::{charge_events, ChargeEvent, RawCharge, RouteStep, Solution, StepCharge, VehiclePlan};
pub use validate::{validate_plan, validate_solution, Violation, ViolationKind};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid price curve: {0}")]
    PriceCurve(String),
    #[error("time {0} lies outside the price horizon")]
    TimeOutOfRange(f64),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid solution: {0}")]
    InvalidSolution(String),
    #[error("negative recharge amount {0}")]
    NegativeRecharge(f64),
    #[error("unsupported schema '{found}', expected '{expected}'")]
    Schema { found: String, expected: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),
}
