//! Scenario files, command dispatch and data export for `hdmac`.

pub mod commands;
pub mod export;
pub mod scenario;

pub use commands::{run_command, run_file, Command, Outcome, RunOptions};
pub use scenario::{parse_scenario, scenario_hash, to_toml, Scenario, ScenarioError};
