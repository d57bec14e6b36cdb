//! Experiment runner for the edge caching toolkit: configuration, the
//! generate, forecast, place and evaluate pipeline, and CSV outputs.

pub mod cli;
pub mod config;
pub mod experiment;

pub use config::{ExperimentConfig, ForecasterKind, PreferenceMode, SweepAxis};
pub use experiment::{compare_static_dynamic, run_experiment, summarize, Comparison, ResultRow, SummaryRow};
