//! Experiment harness: seeded ensembles, per-theorem ratio runs, sharpness
//! runs, the multiplication bound and the `fiolab` command line.

pub mod cli;
pub mod config;
pub mod ensemble;
pub mod experiment;
pub mod report;

pub use config::{ExperimentConfig, TheoremId, WindowKind};
pub use experiment::{
    multiplication_experiment, ratio_experiment, run_experiment, sharpness_experiment,
    MultiplicationConfig,
};
pub use report::{Report, TrialRecord};
