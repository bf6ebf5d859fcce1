//! Seeded Monte Carlo harness: configuration, reproducible sampling, and
//! the experiment runners behind the CLI.

pub mod config;
pub mod rng;
pub mod runner;

pub use config::{
    AggregateReport, AlphaEnvelopeStat, AlphaSummary, BucketStat, EnvelopeAggregate,
    ExperimentConfig, ExperimentKind,
};
pub use runner::{
    run_billiard_experiment, run_experiment, run_gap_experiment, run_report,
    write_experiment_outputs,
};
