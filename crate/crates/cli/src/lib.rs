//! Library surface of the experiment runner, kept separate from the binary
//! so integration tests can drive runs in-process.

pub mod config;
pub mod error;
pub mod report;
pub mod runner;

pub use config::{parse_direction, parse_state, EvolutionSpec, ExperimentConfig, StateSpec, Variant};
pub use error::CliError;
pub use report::{read_scan_csv, write_scan_csv, RunReport, ScanRow, SCAN_CSV_HEADER};
pub use runner::{demo_contradiction, run_experiment, scan_angles, verdict};
