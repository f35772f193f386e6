use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by environments, policies and the experiment harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BanditError {
    #[error("arm {0} appears more than once in the action")]
    DuplicateArm(usize),

    #[error("arm {arm} is out of range for {n_arms} arms")]
    OutOfRange { arm: usize, n_arms: usize },

    #[error("action has {got} arms, expected {expected}")]
    WrongArity { got: usize, expected: usize },

    #[error("invalid dimensions: need 1 <= K < N and T >= 1 (got N={n_arms}, K={k}, T={horizon})")]
    InvalidDims { n_arms: usize, k: usize, horizon: u64 },

    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),

    #[error("no closed-form expected reward for {env} arms with {reward} reward")]
    UnsupportedCombination {
        env: &'static str,
        reward: &'static str,
    },

    #[error("enumeration over {n_arms} arms exceeds the brute-force limit of {limit}")]
    TooLarge { n_arms: usize, limit: usize },

    #[error("action table of {count} actions exceeds the limit of {limit}")]
    TooManyActions { count: u128, limit: u128 },

    #[error("epoch cannot be planned with no open slots (K_e = 0)")]
    Degenerate,

    #[error("time budget exhausted (t = T = {0})")]
    BudgetExhausted(u64),

    #[error("policy does not support this environment: {0}")]
    UnsupportedEnvironment(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
}

pub type Result<T, E = BanditError> = std::result::Result<T, E>;
