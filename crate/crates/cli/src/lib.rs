//! Batch runner for property checks: plan parsing, execution and reports.

pub mod config;
pub mod report;

pub use config::{parse_config, CheckRequest, ConfigError, RunPlan};
pub use report::{run, Format, Report};

/// The plan run when no `--config` is given: the whole built-in zoo with
/// every property and all audits.
pub const DEFAULT_PLAN: &str = include_str!("../plans/zoo.plan");

/// Exit status for a config error.
pub const EXIT_CONFIG: i32 = 1;
