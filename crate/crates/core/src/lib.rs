//! Seeded simulator of trust-managed, deception-augmented human-machine
//! surveillance teams: UGVs sense, an AI classifies, a human analyst resolves
//! uncertain cases, and a command center interleaves bait tasks to expose
//! compromised members.

pub mod adtm;
pub mod attacks;
pub mod config;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod perception;
pub mod rng;
pub mod smm;
pub mod trust;
pub mod types;

pub use engine::{run_scenario, RunRecord, ScenarioRun, World};
pub use error::{Error, Result};
pub use metrics::AggregateReport;
pub use types::{Role, ScenarioParams, Scheme, SchemeConfig, VulnTriplet};
