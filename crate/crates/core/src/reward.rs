//! Joint reward functions mapping the K individual arm rewards of an action
//! to the single scalar a policy observes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::BanditError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JointReward {
    /// `(1/K) * sum(d)`
    Mean,
    /// `sum(d)`
    Sum,
    /// `d^T A d` with `A` upper triangular (diagonal included) and every
    /// stored entry equal to `2 / (K (K + 1))`.
    Quadratic,
    /// `max(d)`
    Max,
}

impl JointReward {
    pub const ALL: [JointReward; 4] = [Self::Mean, Self::Sum, Self::Quadratic, Self::Max];

    pub fn name(self) -> &'static str {
        match self {
            Self::Mean => "mean",
            Self::Sum => "sum",
            Self::Quadratic => "quadratic",
            Self::Max => "max",
        }
    }

    /// The common value of every stored entry of the quadratic form for `k` arms.
    pub fn quadratic_weight(k: usize) -> f64 {
        2.0 / (k as f64 * (k as f64 + 1.0))
    }

    /// Evaluates the joint reward.
    ///
    /// The result does not depend on the order of `rewards`, bit for bit:
    /// the order-sensitive reductions run over a sorted copy.
    pub fn apply(self, rewards: &[f64]) -> f64 {
        let k = rewards.len();
        if k == 0 {
            return 0.0;
        }
        if self == Self::Max {
            return rewards.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        }
        let mut d = rewards.to_vec();
        d.sort_unstable_by(f64::total_cmp);
        match self {
            Self::Sum => d.iter().sum(),
            Self::Mean => d.iter().sum::<f64>() / k as f64,
            Self::Quadratic => {
                // sum_{i <= j} d_i d_j, accumulated row by row.
                let mut acc = 0.0;
                let mut suffix = 0.0;
                for &x in d.iter().rev() {
                    suffix += x;
                    acc += x * suffix;
                }
                Self::quadratic_weight(k) * acc
            }
            Self::Max => unreachable!(),
        }
    }
}

impl fmt::Display for JointReward {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for JointReward {
    type Err = BanditError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| BanditError::Config(format!("unknown joint reward `{s}`")))
    }
}
