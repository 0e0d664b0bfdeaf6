//! Experiment orchestration: config files, seeded runs, persistence.

pub mod commands;
pub mod config;

pub use commands::{
    baseline_maps, cmd_baseline, cmd_evolve, cmd_gen_data, cmd_landscape, cmd_skew,
    evaluate_individual_on, resolve_dataset, summarize, BaselineRow, RunRecord, Summary,
    SummaryStat,
};
pub use config::{DatasetSection, DatasetSource, ExperimentConfig, GaSection, ModelSection};
