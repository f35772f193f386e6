//! Canonical K-subsets of arms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{BanditError, Result};

/// A set of distinct arm indices played together in one step.
///
/// Stored sorted ascending, so two actions holding the same arms compare
/// equal regardless of the order they were built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Action(Vec<usize>);

impl Action {
    /// Canonicalizes `indices` into an action over `n_arms` arms.
    pub fn new(indices: &[usize], n_arms: usize) -> Result<Self> {
        let mut arms = indices.to_vec();
        if let Some(&arm) = arms.iter().find(|&&a| a >= n_arms) {
            return Err(BanditError::OutOfRange { arm, n_arms });
        }
        arms.sort_unstable();
        if let Some(w) = arms.windows(2).find(|w| w[0] == w[1]) {
            return Err(BanditError::DuplicateArm(w[0]));
        }
        Ok(Self(arms))
    }

    /// Like [`Action::new`], additionally requiring exactly `k` arms.
    pub fn with_arity(indices: &[usize], n_arms: usize, k: usize) -> Result<Self> {
        if indices.len() != k {
            return Err(BanditError::WrongArity {
                got: indices.len(),
                expected: k,
            });
        }
        Self::new(indices, n_arms)
    }

    /// Builds an action from indices already known to be sorted and distinct.
    pub(crate) fn from_sorted_unchecked(arms: Vec<usize>) -> Self {
        debug_assert!(arms.windows(2).all(|w| w[0] < w[1]));
        Self(arms)
    }

    pub fn arms(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, arm: usize) -> bool {
        self.0.binary_search(&arm).is_ok()
    }
}

impl TryFrom<Vec<usize>> for Action {
    type Error = BanditError;

    fn try_from(arms: Vec<usize>) -> Result<Self> {
        Self::new(&arms, usize::MAX)
    }
}

impl From<Action> for Vec<usize> {
    fn from(action: Action) -> Self {
        action.0
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, arm) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{arm}")?;
        }
        f.write_str("]")
    }
}

/// Iterates over all `k`-subsets of `0..n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Self { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.current.as_mut()?;
        let out = current.clone();
        let k = current.len();
        // Rightmost slot that can still move up.
        match (0..k).rev().find(|&i| current[i] < self.n - k + i) {
            Some(i) => {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
            }
            None => self.current = None,
        }
        Some(out)
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
