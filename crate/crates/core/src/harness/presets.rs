//! Built-in experiment configs.
//!
//! Full-scale presets use N = 45 arms and T = 10^6 steps (25 runs); each
//! has a `-desk` variant with N = 15 and T = 10^5 that finishes in seconds.
//! Bernoulli presets draw their arm means once from Uniform[0, 1] with the
//! master seed. DART entries use [`DartParams::calibrated`]; the literal
//! analysis constants are available by dropping the two constant keys.

use crate::action::binomial;
use crate::dart::DartParams;
use crate::harness::config::{AlgorithmKind, AlgorithmSpec, EnvironmentSpec, ExperimentConfig};
use crate::reward::JointReward;

/// Largest action table the presets run the enumerating baselines on.
/// Larger tables are allowed but make every UCB step scan the table.
const BASELINE_TABLE_BUDGET: u128 = 2_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub config: ExperimentConfig,
}

fn bernoulli(name: &str, n_arms: usize, k: usize, horizon: u64, reward: JointReward, replications: u64) -> ExperimentConfig {
    let mut algorithms = vec![AlgorithmSpec::with_params(AlgorithmKind::Dart, DartParams::calibrated())];
    if binomial(n_arms, k) <= BASELINE_TABLE_BUDGET {
        algorithms.push(AlgorithmSpec::new(AlgorithmKind::CombUcb));
        algorithms.push(AlgorithmSpec::new(AlgorithmKind::EpsilonGreedy));
    }
    algorithms.push(AlgorithmSpec::new(AlgorithmKind::Oracle));
    ExperimentConfig {
        name: name.to_owned(),
        n_arms,
        k,
        horizon,
        replications,
        master_seed: 1,
        checkpoint_stride: None,
        environment: EnvironmentSpec::Bernoulli { reward, means: None },
        algorithms,
    }
}

fn gaussian(name: &str, n_arms: usize, k: usize, horizon: u64) -> ExperimentConfig {
    ExperimentConfig {
        name: name.to_owned(),
        n_arms,
        k,
        horizon,
        replications: 25,
        master_seed: 1,
        checkpoint_stride: None,
        environment: EnvironmentSpec::CorrelatedGaussian {
            sigma: 0.5,
            epsilon: None,
            optimal: None,
        },
        algorithms: vec![
            AlgorithmSpec::with_params(AlgorithmKind::Dart, DartParams::calibrated()),
            AlgorithmSpec::new(AlgorithmKind::Oracle),
        ],
    }
}

/// Every preset, full-scale ones first.
pub fn all() -> Vec<Preset> {
    let mut out = Vec::new();
    let mut add = |config: ExperimentConfig, description: String| {
        out.push(Preset {
            name: config.name.clone(),
            description,
            config,
        })
    };
    for desk in [false, true] {
        let (n, horizon, suffix) = if desk { (15, 100_000, "-desk") } else { (45, 1_000_000, "") };
        for (prefix, reward) in [("fig1-mean", JointReward::Mean), ("fig2-quad", JointReward::Quadratic)] {
            for k in [2, 4, 8] {
                let name = format!("{prefix}-K{k}{suffix}");
                add(
                    bernoulli(&name, n, k, horizon, reward, 25),
                    format!("{reward} reward, N={n}, K={k}, T={horizon}, uniform Bernoulli means"),
                );
            }
        }
        let lin_horizon = if desk { 100_000 } else { 50_000 };
        add(
            bernoulli(&format!("appG-lin{suffix}"), 15, 2, lin_horizon, JointReward::Mean, 25),
            format!("mean reward, N=15, K=2, T={lin_horizon}, every baseline"),
        );
        for k in [2, 4] {
            add(
                bernoulli(&format!("appH-max-K{k}{suffix}"), 15, k, lin_horizon, JointReward::Max, 20),
                format!("max reward, N=15, K={k}, T={lin_horizon}, 20 runs"),
            );
        }
        add(
            gaussian(&format!("lowerbound-gauss{suffix}"), n, 4, horizon),
            format!("correlated Gaussian arms, sum reward, N={n}, K=4, T={horizon}, gap at the lower-bound scale"),
        );
    }
    out
}

pub fn find(name: &str) -> Option<Preset> {
    all().into_iter().find(|p| p.name == name)
}

pub fn names() -> Vec<String> {
    all().into_iter().map(|p| p.name).collect()
}
