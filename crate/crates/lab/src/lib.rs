//! Scenario runner for minmetric: configuration, deterministic reports and
//! the registry of checks.

pub mod config;
pub mod report;
pub mod scenarios;

pub use config::{load_body, ConfigError, ScenarioConfig};
pub use scenarios::{catalog, find, run, Check, Outcome, ScenarioError};
