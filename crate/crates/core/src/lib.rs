//! Joint caching and computation-offloading policies for mobile VR
//! field-of-view delivery.
//!
//! A VR device can receive each requested 3D field of view from an edge
//! server, or receive (or read from its cache) the smaller 2D input and run
//! the projection itself, within a per-period device energy budget. The
//! solvers here choose which viewpoints to cache and which to project
//! locally so that the average wireless rate needed to meet the latency
//! deadline is minimized.
//!
//! - [`model`]: domain types, rate floors, objective and feasibility.
//! - [`symmetric`]: closed-form optimum when every viewpoint is alike.
//! - [`tradeoff`]: resource sweeps and the analytical trade-off results.
//! - [`hetero`]: greedy, local-search and exhaustive solvers for
//!   viewpoints with individual parameters.

pub mod error;
pub mod hetero;
pub mod model;
pub mod symmetric;
pub mod tradeoff;

pub use error::{Error, Result};
pub use model::{
    average_rate, check_feasibility, device_rate_floor, min_device_frequency, normalize_policy,
    required_rate, server_rate_floor, FeasibilityReport, Policy, ProjectionTask, Scenario,
    ScenarioKind, SystemConfig,
};
