//! Purification Cost per Year (PCY): the annual cost of owning an air
//! purifier, normalized to a reference home size.
//!
//! * [`catalog`]: purifier, rate, AQI and reference-table types.
//! * [`cost_engine`]: the PCY formula and its components.
//! * [`analytics`]: statistics, rankings, rate sweeps and AQI scenarios.
//! * [`ingest`]: CSV loaders with per-row rejection reports.
//! * [`reproduce`]: recomputes the published figures from the shipped data.

pub mod analytics;
pub mod catalog;
pub mod cost_engine;
pub mod datasets;
mod error;
pub mod ingest;
pub mod money;
pub mod published;
pub mod reproduce;

pub use error::{Error, Result};
