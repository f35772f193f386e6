//! Per-step expected rewards and the pseudo-regret derived from them.

use serde::{Deserialize, Serialize};

/// Expected reward of the action played at every step, together with the
/// expected reward of the optimal action.
///
/// Values come from the environment's exact oracle, never from sampled
/// rewards, so regret carries no sampling noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretTrace {
    pub mu_star: f64,
    pub rewards: Vec<f64>,
}

/// Cumulative regret sampled at a set of time steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretSeries {
    /// Step counts (1-based, ascending).
    pub t: Vec<u64>,
    pub regret: Vec<f64>,
}

impl RegretSeries {
    pub fn last(&self) -> Option<f64> {
        self.regret.last().copied()
    }

    /// Regret at step `t`, if that step was checkpointed.
    pub fn at(&self, t: u64) -> Option<f64> {
        self.t.binary_search(&t).ok().map(|i| self.regret[i])
    }
}

/// Checkpoints every `stride` steps up to `horizon`, always including the
/// final step.
pub fn checkpoints(horizon: u64, stride: u64) -> Vec<u64> {
    let stride = stride.max(1);
    let mut points: Vec<u64> = (1..=horizon / stride).map(|c| c * stride).collect();
    if points.last() != Some(&horizon) && horizon > 0 {
        points.push(horizon);
    }
    points
}

/// Default spacing giving roughly 500 checkpoints.
pub fn default_stride(horizon: u64) -> u64 {
    (horizon / 500).max(1)
}

impl RegretTrace {
    pub fn new(mu_star: f64) -> Self {
        Self {
            mu_star,
            rewards: Vec::new(),
        }
    }

    pub fn with_capacity(mu_star: f64, capacity: usize) -> Self {
        Self {
            mu_star,
            rewards: Vec::with_capacity(capacity),
        }
    }

    pub fn push(&mut self, expected_reward: f64) {
        self.rewards.push(expected_reward);
    }

    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }

    /// Appends another trace recorded against the same optimum.
    pub fn extend(&mut self, other: &RegretTrace) {
        self.rewards.extend_from_slice(&other.rewards);
    }

    /// Instantaneous regret at each step.
    ///
    /// Oracle values of distinct actions that agree to within rounding can
    /// land a hair above `mu_star`; such steps count as zero regret.
    pub fn gaps(&self) -> impl Iterator<Item = f64> + '_ {
        self.rewards.iter().map(move |&mu| {
            let gap = self.mu_star - mu;
            debug_assert!(gap > -1e-9, "played action beats the optimum by {}", -gap);
            gap.max(0.0)
        })
    }

    pub fn total_regret(&self) -> f64 {
        self.gaps().sum()
    }

    /// Prefix sums of the instantaneous regret, read at `points` (ascending,
    /// at most `len()`).
    pub fn cumulative_regret(&self, points: &[u64]) -> RegretSeries {
        let mut regret = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        let mut gaps = self.gaps();
        let mut t = 0u64;
        for &point in points {
            assert!(point as usize <= self.len(), "checkpoint {point} beyond trace");
            while t < point {
                acc += gaps.next().expect("checked against len");
                t += 1;
            }
            regret.push(acc);
        }
        RegretSeries {
            t: points.to_vec(),
            regret,
        }
    }
}
