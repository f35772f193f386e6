//! Stochastic arm environments with exact expected-reward oracles.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::action::Action;
use crate::error::{BanditError, Result};
use crate::reward::JointReward;
use crate::rng::RandomSource;

/// How individual arm rewards are generated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArmModel {
    /// Each arm is an independent Bernoulli draw with its own success probability.
    IndependentBernoulli,
    /// Every selected arm receives its base mean plus one Gaussian term
    /// `Z ~ N(0, sigma^2)` shared by all arms in the step.
    CorrelatedGaussian { epsilon: f64, sigma: f64 },
}

impl ArmModel {
    pub fn name(&self) -> &'static str {
        match self {
            Self::IndependentBernoulli => "bernoulli",
            Self::CorrelatedGaussian { .. } => "correlated_gaussian",
        }
    }
}

/// One step of feedback. Policies only ever see `joint_reward`.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardSample {
    pub arm_rewards: Vec<f64>,
    pub joint_reward: f64,
}

/// An immutable bandit instance: N arms, the number K of arms played per
/// step, and the joint reward function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    model: ArmModel,
    arm_means: Vec<f64>,
    k: usize,
    joint_reward: JointReward,
    optimal: Action,
}

fn check_dims(n_arms: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n_arms {
        return Err(BanditError::InvalidEnvironment(format!(
            "need 1 <= K < N, got N={n_arms}, K={k}"
        )));
    }
    Ok(())
}

/// Arm indices ordered by mean, largest first, ties broken by smaller index.
pub(crate) fn rank_desc(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    order
}

impl Environment {
    /// Independent Bernoulli arms with success probabilities `means`.
    ///
    /// Fails if a probability lies outside `[0, 1]` or if the K-th and
    /// (K+1)-th largest means tie, which would leave the optimal action
    /// ambiguous.
    pub fn bernoulli(means: Vec<f64>, k: usize, joint_reward: JointReward) -> Result<Self> {
        check_dims(means.len(), k)?;
        if let Some((i, p)) = means
            .iter()
            .enumerate()
            .find(|(_, p)| !(0.0..=1.0).contains(*p))
        {
            return Err(BanditError::InvalidEnvironment(format!(
                "arm {i} has mean {p}, outside [0, 1]"
            )));
        }
        let order = rank_desc(&means);
        if means[order[k - 1]] == means[order[k]] {
            return Err(BanditError::InvalidEnvironment(format!(
                "the {k}-th and {}-th largest means tie at {}; the optimal action is not unique",
                k + 1,
                means[order[k]]
            )));
        }
        let optimal = Action::new(&order[..k], means.len())?;
        Ok(Self {
            model: ArmModel::IndependentBernoulli,
            arm_means: means,
            k,
            joint_reward,
            optimal,
        })
    }

    /// The correlated lower-bound construction: arm `i` yields
    /// `1/2 + epsilon * [i in optimal] + Z`, with one `Z ~ N(0, sigma^2)` per
    /// step, and the joint reward is the sum.
    ///
    /// Rewards are left unbounded. `epsilon = 0` is accepted (every action
    /// is then optimal, and `optimal` is kept only as a label).
    pub fn correlated_gaussian(
        n_arms: usize,
        optimal: &[usize],
        epsilon: f64,
        sigma: f64,
    ) -> Result<Self> {
        let k = optimal.len();
        check_dims(n_arms, k)?;
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(BanditError::InvalidEnvironment(format!(
                "epsilon must be finite and >= 0, got {epsilon}"
            )));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(BanditError::InvalidEnvironment(format!(
                "sigma must be finite and > 0, got {sigma}"
            )));
        }
        let optimal = Action::new(optimal, n_arms)?;
        let arm_means = (0..n_arms)
            .map(|i| 0.5 + if optimal.contains(i) { epsilon } else { 0.0 })
            .collect();
        Ok(Self {
            model: ArmModel::CorrelatedGaussian { epsilon, sigma },
            arm_means,
            k,
            joint_reward: JointReward::Sum,
            optimal,
        })
    }

    /// The gap used by the lower-bound argument for horizon `horizon`:
    /// `epsilon = (sigma / 2) * sqrt(N K / (2 T))`.
    pub fn lower_bound_epsilon(n_arms: usize, k: usize, horizon: u64, sigma: f64) -> f64 {
        0.5 * sigma * ((n_arms * k) as f64 / (2.0 * horizon as f64)).sqrt()
    }

    pub fn n_arms(&self) -> usize {
        self.arm_means.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn arm_means(&self) -> &[f64] {
        &self.arm_means
    }

    pub fn joint_reward(&self) -> JointReward {
        self.joint_reward
    }

    pub fn model(&self) -> ArmModel {
        self.model
    }

    /// Whether every joint reward lies in `[0, 1]`.
    pub fn has_unit_rewards(&self) -> bool {
        matches!(self.model, ArmModel::IndependentBernoulli)
            && self.joint_reward != JointReward::Sum
    }

    pub fn check_action(&self, action: &Action) -> Result<()> {
        if action.len() != self.k {
            return Err(BanditError::WrongArity {
                got: action.len(),
                expected: self.k,
            });
        }
        match action.arms().last() {
            Some(&arm) if arm >= self.n_arms() => Err(BanditError::OutOfRange {
                arm,
                n_arms: self.n_arms(),
            }),
            _ => Ok(()),
        }
    }

    /// Draws one step of rewards for `action`.
    pub fn sample(&self, action: &Action, rng: &mut RandomSource) -> Result<RewardSample> {
        self.check_action(action)?;
        let mut arm_rewards = Vec::with_capacity(self.k);
        let joint_reward = self.sample_into(action, rng, &mut arm_rewards);
        Ok(RewardSample {
            arm_rewards,
            joint_reward,
        })
    }

    /// Allocation-free variant of [`Environment::sample`] for simulation
    /// loops. `action` must already be valid for this environment.
    pub fn sample_into(&self, action: &Action, rng: &mut RandomSource, buf: &mut Vec<f64>) -> f64 {
        buf.clear();
        match self.model {
            ArmModel::IndependentBernoulli => {
                buf.extend(action.arms().iter().map(|&i| {
                    if rng.random_bool(self.arm_means[i]) {
                        1.0
                    } else {
                        0.0
                    }
                }));
            }
            ArmModel::CorrelatedGaussian { sigma, .. } => {
                let z: f64 = sigma * rng.sample::<f64, _>(StandardNormal);
                buf.extend(action.arms().iter().map(|&i| self.arm_means[i] + z));
            }
        }
        self.joint_reward.apply(buf)
    }

    /// Exact expected joint reward of `action`.
    pub fn expected_joint_reward(&self, action: &Action) -> Result<f64> {
        self.check_action(action)?;
        let p = action.arms().iter().map(|&i| self.arm_means[i]);
        let k = self.k as f64;
        match (self.model, self.joint_reward) {
            (ArmModel::IndependentBernoulli, JointReward::Mean) => Ok(p.sum::<f64>() / k),
            (_, JointReward::Sum) => Ok(p.sum()),
            (ArmModel::IndependentBernoulli, JointReward::Max) => {
                Ok(1.0 - p.map(|q| 1.0 - q).product::<f64>())
            }
            (ArmModel::IndependentBernoulli, JointReward::Quadratic) => {
                // E[X_i^2] = p_i for Bernoulli arms; E[X_i X_j] = p_i p_j off the diagonal.
                let p: Vec<f64> = p.collect();
                let mut acc = 0.0;
                for (a, &pa) in p.iter().enumerate() {
                    acc += pa;
                    for &pb in &p[a + 1..] {
                        acc += pa * pb;
                    }
                }
                Ok(JointReward::quadratic_weight(self.k) * acc)
            }
            (model, reward) => Err(BanditError::UnsupportedCombination {
                env: model.name(),
                reward: reward.name(),
            }),
        }
    }

    /// The optimal action: the K arms with the largest means.
    pub fn best_action(&self) -> &Action {
        &self.optimal
    }

    /// Expected joint reward of the optimal action.
    pub fn optimal_reward(&self) -> f64 {
        self.expected_joint_reward(&self.optimal)
            .expect("optimal action is valid by construction")
    }
}
