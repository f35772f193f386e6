//! Replicated experiments: config files, seeded parallel runs, regret
//! aggregation and CSV output.
//!
//! A run of [`run_experiment`] plays every configured algorithm for
//! `replications` independent seeds and records cumulative pseudo-regret at
//! evenly spaced checkpoints. [`write_results`] persists three files named
//! after the experiment:
//!
//! | file | contents |
//! |------|----------|
//! | `<name>.csv` | `algorithm,run_id,seed,t,cumulative_regret` |
//! | `<name>.aggregate.csv` | `algorithm,t,mean_regret,min_regret,max_regret` |
//! | `<name>.meta` | the config, the arm means, and every run's seed and final action (TOML) |

mod config;
mod experiment;
mod output;
pub mod presets;

pub use config::{
    draw_uniform_means, Algorithm, AlgorithmKind, AlgorithmSpec, EnvironmentSpec, ExperimentConfig,
    DEFAULT_EPSILON_C,
};
pub use experiment::{
    make_policy, run_experiment, run_experiment_with, AggregateResult, AlgorithmResult, CheckpointStats,
    Execution, RunFailure, RunRecord,
};
pub use output::{
    aggregate_rows, read_aggregate_rows, read_result_rows, result_rows, write_results, AggregateRow, Manifest,
    ManifestRun, OutputFiles, ResultRow, AGGREGATE_HEADER, RESULTS_HEADER,
};
