use rayon::prelude::*;

use crate::action::Action;
use crate::baselines::{CombUcb, EpsilonGreedy, Oracle};
use crate::dart::{AnytimeDart, Dart};
use crate::env::Environment;
use crate::error::Result;
use crate::harness::config::{Algorithm, ExperimentConfig};
use crate::policy::{simulate, Policy, SimRng};
use crate::rng;

/// How replications are scheduled. Both produce identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    /// On the current rayon pool.
    #[default]
    Parallel,
    Sequential,
}

/// One successful replication.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_id: u64,
    pub seed: u64,
    /// Cumulative regret at each of the experiment's checkpoints.
    pub regret: Vec<f64>,
    /// The action the policy settled on, if it did.
    pub final_action: Option<Action>,
    pub identified: bool,
}

/// A replication that returned an error; it is excluded from the summary.
#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub run_id: u64,
    pub seed: u64,
    pub message: String,
}

/// Mean, min and max cumulative regret across runs at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckpointStats {
    pub t: u64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmResult {
    pub label: String,
    pub algorithm: Algorithm,
    pub runs: Vec<RunRecord>,
    pub failures: Vec<RunFailure>,
    /// Empty when every run failed.
    pub summary: Vec<CheckpointStats>,
}

impl AlgorithmResult {
    pub fn identified_count(&self) -> usize {
        self.runs.iter().filter(|r| r.identified).count()
    }

    /// Mean cumulative regret at the horizon.
    pub fn mean_final_regret(&self) -> Option<f64> {
        self.summary.last().map(|s| s.mean)
    }
}

/// Everything produced by [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateResult {
    pub config: ExperimentConfig,
    pub arm_means: Vec<f64>,
    pub best_action: Action,
    pub optimal_reward: f64,
    pub checkpoints: Vec<u64>,
    pub algorithms: Vec<AlgorithmResult>,
}

impl AggregateResult {
    pub fn algorithm(&self, label: &str) -> Option<&AlgorithmResult> {
        self.algorithms.iter().find(|a| a.label == label)
    }

    pub fn failure_count(&self) -> usize {
        self.algorithms.iter().map(|a| a.failures.len()).sum()
    }
}

/// Runs every algorithm of `config` for `config.replications` seeded runs,
/// in parallel.
pub fn run_experiment(config: &ExperimentConfig) -> Result<AggregateResult> {
    run_experiment_with(config, Execution::Parallel)
}

/// [`run_experiment`] with an explicit schedule.
///
/// Run `r` uses the seed `replication_seed(master_seed, r)` for every
/// algorithm, so algorithms face the same reward draws whenever they play
/// the same actions. A run whose policy errors is recorded in
/// [`AlgorithmResult::failures`] and left out of the summary.
pub fn run_experiment_with(config: &ExperimentConfig, execution: Execution) -> Result<AggregateResult> {
    config.validate()?;
    let env = config.environment()?;
    let checkpoints = config.checkpoints();
    let mut algorithms = Vec::with_capacity(config.algorithms.len());
    for (label, algorithm) in config.resolved_algorithms()? {
        let run = |run_id: u64| {
            let seed = rng::replication_seed(config.master_seed, run_id);
            replicate(&env, algorithm, config.horizon, &checkpoints, run_id, seed)
        };
        let outcomes: Vec<_> = match execution {
            Execution::Parallel => (0..config.replications).into_par_iter().map(run).collect(),
            Execution::Sequential => (0..config.replications).map(run).collect(),
        };
        let mut runs = Vec::new();
        let mut failures = Vec::new();
        for outcome in outcomes {
            match outcome {
                Ok(record) => runs.push(record),
                Err(failure) => failures.push(failure),
            }
        }
        if !failures.is_empty() {
            tracing::warn!(
                algorithm = %label,
                failed = failures.len(),
                "excluding failed replications: {}",
                failures[0].message
            );
        }
        let summary = summarize(&checkpoints, &runs);
        algorithms.push(AlgorithmResult {
            label,
            algorithm,
            runs,
            failures,
            summary,
        });
    }
    Ok(AggregateResult {
        config: config.clone(),
        arm_means: env.arm_means().to_vec(),
        best_action: env.best_action().clone(),
        optimal_reward: env.optimal_reward(),
        checkpoints,
        algorithms,
    })
}

/// Builds a fresh policy for one run.
pub fn make_policy(env: &Environment, algorithm: Algorithm, horizon: u64) -> Result<Box<dyn Policy + Send>> {
    let (n, k) = (env.n_arms(), env.k());
    Ok(match algorithm {
        Algorithm::Dart(params) => Box::new(Dart::new(n, k, horizon, params)?),
        Algorithm::DartAnytime(params) => Box::new(AnytimeDart::new(n, k, params)?),
        Algorithm::CombUcb => Box::new(CombUcb::new(env)?),
        Algorithm::EpsilonGreedy(schedule) => Box::new(EpsilonGreedy::new(env, schedule)?),
        Algorithm::Oracle => Box::new(Oracle::new(env)),
    })
}

fn replicate(
    env: &Environment,
    algorithm: Algorithm,
    horizon: u64,
    checkpoints: &[u64],
    run_id: u64,
    seed: u64,
) -> std::result::Result<RunRecord, RunFailure> {
    let attempt = || -> Result<RunRecord> {
        let mut policy = make_policy(env, algorithm, horizon)?;
        let trace = simulate(env, policy.as_mut(), horizon, &mut SimRng::from_seed(seed))?;
        let final_action = policy.recommendation();
        Ok(RunRecord {
            run_id,
            seed,
            regret: trace.cumulative_regret(checkpoints).regret,
            identified: final_action.as_ref() == Some(env.best_action()),
            final_action,
        })
    };
    attempt().map_err(|e| RunFailure {
        run_id,
        seed,
        message: e.to_string(),
    })
}

fn summarize(checkpoints: &[u64], runs: &[RunRecord]) -> Vec<CheckpointStats> {
    if runs.is_empty() {
        return Vec::new();
    }
    checkpoints
        .iter()
        .enumerate()
        .map(|(c, &t)| {
            let values = runs.iter().map(|r| r.regret[c]);
            CheckpointStats {
                t,
                mean: values.clone().sum::<f64>() / runs.len() as f64,
                min: values.clone().fold(f64::INFINITY, f64::min),
                max: values.fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect()
}
