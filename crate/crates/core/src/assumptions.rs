//! Brute-force checks of the structural properties DART relies on.
//!
//! Both checks enumerate actions exhaustively, so they are limited to small
//! instances ([`ENUMERATION_LIMIT`] arms).

use crate::action::{Action, Combinations};
use crate::env::Environment;
use crate::error::{BanditError, Result};
use crate::reward::JointReward;
use crate::rng::{self, Purpose};

/// Largest number of arms the enumeration checks accept.
pub const ENUMERATION_LIMIT: usize = 12;

/// Differences smaller than this are treated as exact ties when comparing
/// averages computed by different summation orders.
const TIE_TOLERANCE: f64 = 1e-12;

fn guard(env: &Environment) -> Result<()> {
    if env.n_arms() > ENUMERATION_LIMIT {
        return Err(BanditError::TooLarge {
            n_arms: env.n_arms(),
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// Average expected joint reward over every action containing `arm`.
pub fn mean_reward_containing(env: &Environment, arm: usize) -> Result<f64> {
    guard(env)?;
    let n = env.n_arms();
    if arm >= n {
        return Err(BanditError::OutOfRange { arm, n_arms: n });
    }
    let others: Vec<usize> = (0..n).filter(|&a| a != arm).collect();
    let mut total = 0.0;
    let mut count = 0usize;
    for rest in Combinations::new(n - 1, env.k() - 1) {
        let mut arms: Vec<usize> = rest.iter().map(|&r| others[r]).collect();
        arms.push(arm);
        total += env.expected_joint_reward(&Action::new(&arms, n)?)?;
        count += 1;
    }
    Ok(total / count as f64)
}

fn sign(x: f64) -> i8 {
    if x.abs() <= TIE_TOLERANCE {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

/// Whether arms `i` and `j` are ordered the same way by their means and by
/// the average reward of the actions containing them.
pub fn verify_ordering_property(env: &Environment, i: usize, j: usize) -> Result<bool> {
    let arm_gap = env.arm_means()[i] - env.arm_means()[j];
    let action_gap = mean_reward_containing(env, i)? - mean_reward_containing(env, j)?;
    Ok(sign(arm_gap) == sign(action_gap))
}

/// Runs [`verify_ordering_property`] over every ordered pair of arms.
pub fn ordering_holds_for_all_pairs(env: &Environment) -> Result<bool> {
    let n = env.n_arms();
    for i in 0..n {
        for j in 0..n {
            if i != j && !verify_ordering_property(env, i, j)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A counterexample to monotonicity: swapping `better` for `worse` in the
/// context `others` increased the expected reward.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityViolation {
    pub others: Vec<usize>,
    pub better: usize,
    pub worse: usize,
    pub shortfall: f64,
}

/// Checks that replacing an arm by one with a larger mean never lowers the
/// expected reward, for every context of `K - 1` other arms.
pub fn find_monotonicity_violation(env: &Environment) -> Result<Option<MonotonicityViolation>> {
    guard(env)?;
    let n = env.n_arms();
    let means = env.arm_means();
    for context in Combinations::new(n, env.k() - 1) {
        let outside: Vec<usize> = (0..n).filter(|a| !context.contains(a)).collect();
        let reward_with = |arm: usize| -> Result<f64> {
            let mut arms = context.clone();
            arms.push(arm);
            env.expected_joint_reward(&Action::new(&arms, n)?)
        };
        for &i in &outside {
            for &j in &outside {
                if means[i] > means[j] {
                    let shortfall = reward_with(j)? - reward_with(i)?;
                    if shortfall > TIE_TOLERANCE {
                        return Ok(Some(MonotonicityViolation {
                            others: context.clone(),
                            better: i,
                            worse: j,
                            shortfall,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Outcome of both checks on one random instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCase {
    pub n_arms: usize,
    pub k: usize,
    pub reward: JointReward,
    pub means: Vec<f64>,
    pub ordering_holds: bool,
    pub violation: Option<MonotonicityViolation>,
}

impl GridCase {
    pub fn passed(&self) -> bool {
        self.ordering_holds && self.violation.is_none()
    }
}

/// Runs the ordering and monotonicity checks on `vectors` random mean
/// vectors for every `2 <= N <= max_arms`, `1 <= K <= min(max_k, N - 1)`
/// and joint reward.
///
/// Means are drawn from Uniform[0, 1]. Vector `v` of shape `(N, K)` uses
/// the same means for all four rewards.
pub fn verify_grid(master_seed: u64, max_arms: usize, max_k: usize, vectors: u64) -> Result<Vec<GridCase>> {
    use rand::Rng;
    let mut cases = Vec::new();
    let mut index = 0u64;
    for n in 2..=max_arms.min(ENUMERATION_LIMIT) {
        for k in 1..=max_k.min(n - 1) {
            for _ in 0..vectors {
                let mut rng = rng::replication_stream(master_seed, index, Purpose::ArmMeans);
                index += 1;
                let means: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
                for reward in JointReward::ALL {
                    let env = Environment::bernoulli(means.clone(), k, reward)?;
                    cases.push(GridCase {
                        n_arms: n,
                        k,
                        reward,
                        means: means.clone(),
                        ordering_holds: ordering_holds_for_all_pairs(&env)?,
                        violation: find_monotonicity_violation(&env)?,
                    });
                }
            }
        }
    }
    Ok(cases)
}
