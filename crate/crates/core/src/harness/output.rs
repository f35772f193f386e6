use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{BanditError, Result};
use crate::harness::config::ExperimentConfig;
use crate::harness::experiment::AggregateResult;

pub const RESULTS_HEADER: [&str; 5] = ["algorithm", "run_id", "seed", "t", "cumulative_regret"];
pub const AGGREGATE_HEADER: [&str; 5] = ["algorithm", "t", "mean_regret", "min_regret", "max_regret"];

/// Paths written by [`write_results`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFiles {
    /// `<name>.csv`: one row per algorithm, run and checkpoint.
    pub results: PathBuf,
    /// `<name>.aggregate.csv`: one row per algorithm and checkpoint.
    pub aggregate: PathBuf,
    /// `<name>.meta`: the config and everything needed to reproduce the run.
    pub manifest: PathBuf,
}

impl OutputFiles {
    pub fn new(dir: impl AsRef<Path>, name: &str) -> Self {
        let dir = dir.as_ref();
        Self {
            results: dir.join(format!("{name}.csv")),
            aggregate: dir.join(format!("{name}.aggregate.csv")),
            manifest: dir.join(format!("{name}.meta")),
        }
    }
}

/// Sidecar manifest, stored as TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub generator: String,
    pub arm_means: Vec<f64>,
    pub best_action: Vec<usize>,
    pub optimal_reward: f64,
    pub config: ExperimentConfig,
    #[serde(default, rename = "run")]
    pub runs: Vec<ManifestRun>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRun {
    pub algorithm: String,
    pub run_id: u64,
    pub seed: u64,
    /// Absent when the policy never settled on an action.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_action: Option<Vec<usize>>,
    pub identified: bool,
    /// Set for replications excluded because the policy failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Manifest {
    pub fn from_result(result: &AggregateResult) -> Self {
        let mut runs = Vec::new();
        for alg in &result.algorithms {
            let mut entries: Vec<ManifestRun> = alg
                .runs
                .iter()
                .map(|r| ManifestRun {
                    algorithm: alg.label.clone(),
                    run_id: r.run_id,
                    seed: r.seed,
                    final_action: r.final_action.as_ref().map(|a| a.arms().to_vec()),
                    identified: r.identified,
                    error: None,
                })
                .chain(alg.failures.iter().map(|f| ManifestRun {
                    algorithm: alg.label.clone(),
                    run_id: f.run_id,
                    seed: f.seed,
                    final_action: None,
                    identified: false,
                    error: Some(f.message.clone()),
                }))
                .collect();
            entries.sort_by_key(|r| r.run_id);
            runs.extend(entries);
        }
        Self {
            generator: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_owned(),
            arm_means: result.arm_means.clone(),
            best_action: result.best_action.arms().to_vec(),
            optimal_reward: result.optimal_reward,
            config: result.config.clone(),
            runs,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifests always serialize")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        toml::from_str(&text).map_err(|e| BanditError::Io {
            path: path.to_owned(),
            message: e.to_string(),
        })
    }
}

/// One row of the results CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub algorithm: String,
    pub run_id: u64,
    pub seed: u64,
    pub t: u64,
    pub cumulative_regret: f64,
}

/// One row of the aggregate CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub algorithm: String,
    pub t: u64,
    pub mean_regret: f64,
    pub min_regret: f64,
    pub max_regret: f64,
}

pub fn result_rows(result: &AggregateResult) -> Vec<ResultRow> {
    let mut rows = Vec::new();
    for alg in &result.algorithms {
        for run in &alg.runs {
            for (&t, &cumulative_regret) in result.checkpoints.iter().zip(&run.regret) {
                rows.push(ResultRow {
                    algorithm: alg.label.clone(),
                    run_id: run.run_id,
                    seed: run.seed,
                    t,
                    cumulative_regret,
                });
            }
        }
    }
    rows
}

pub fn aggregate_rows(result: &AggregateResult) -> Vec<AggregateRow> {
    result
        .algorithms
        .iter()
        .flat_map(|alg| {
            alg.summary.iter().map(|s| AggregateRow {
                algorithm: alg.label.clone(),
                t: s.t,
                mean_regret: s.mean,
                min_regret: s.min,
                max_regret: s.max,
            })
        })
        .collect()
}

/// Writes the results CSV, the aggregate CSV and the manifest into `dir`
/// (created if missing), named after the config.
///
/// Floats are written in their shortest form that parses back to the same
/// value. Lines end in `\n`.
pub fn write_results(result: &AggregateResult, dir: impl AsRef<Path>) -> Result<OutputFiles> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let files = OutputFiles::new(dir, &result.config.name);
    write_csv(&files.results, &RESULTS_HEADER, &result_rows(result))?;
    write_csv(&files.aggregate, &AGGREGATE_HEADER, &aggregate_rows(result))?;
    let manifest = Manifest::from_result(result).to_toml();
    fs::write(&files.manifest, manifest).map_err(|e| io_error(&files.manifest, e))?;
    Ok(files)
}

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let fail = |e: csv::Error| BanditError::Io {
        path: path.to_owned(),
        message: e.to_string(),
    };
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(fail)?;
    writer.write_record(header).map_err(fail)?;
    for row in rows {
        writer.serialize(row).map_err(fail)?;
    }
    writer.flush().map_err(|e| io_error(path, e))
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path, header: &[&str]) -> Result<Vec<T>> {
    let fail = |message: String| BanditError::Io {
        path: path.to_owned(),
        message,
    };
    let mut reader = csv::Reader::from_path(path).map_err(|e| fail(e.to_string()))?;
    let found = reader.headers().map_err(|e| fail(e.to_string()))?;
    if found.iter().ne(header.iter().copied()) {
        return Err(fail(format!("unexpected header `{}`", found.iter().collect::<Vec<_>>().join(","))));
    }
    reader
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| fail(e.to_string()))
}

pub fn read_result_rows(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    read_csv(path.as_ref(), &RESULTS_HEADER)
}

pub fn read_aggregate_rows(path: impl AsRef<Path>) -> Result<Vec<AggregateRow>> {
    read_csv(path.as_ref(), &AGGREGATE_HEADER)
}

fn io_error(path: &Path, e: std::io::Error) -> BanditError {
    BanditError::Io {
        path: path.to_owned(),
        message: e.to_string(),
    }
}
