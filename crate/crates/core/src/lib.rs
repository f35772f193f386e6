//! Top-K subset selection under full-bandit feedback.
//!
//! An agent picks K of N arms per step and observes one scalar: a joint
//! function (mean, sum, quadratic form or max) of the selected arms'
//! individual rewards. This crate provides
//!
//! * environments with exact expected-reward oracles ([`env`]),
//! * the DART adaptive accept/reject policy ([`dart`]),
//! * enumerating baselines and a clairvoyant oracle ([`baselines`]),
//! * brute-force checks of the ordering and monotonicity properties DART
//!   relies on ([`assumptions`]),
//! * a seeded, replicated experiment harness writing CSV results ([`harness`]).
//!
//! ```
//! use dart_core::{dart, Environment, JointReward, SimRng};
//!
//! let env = Environment::bernoulli(vec![0.9, 0.8, 0.3, 0.2, 0.1], 2, JointReward::Mean)?;
//! let run = dart::run_dart(&env, 20_000, dart::DartParams::calibrated(), &mut SimRng::from_seed(7))?;
//! assert_eq!(run.trace.len(), 20_000);
//! assert_eq!(run.state.committed(), Some(env.best_action()));
//! # Ok::<(), dart_core::BanditError>(())
//! ```

pub mod action;
pub mod assumptions;
pub mod baselines;
pub mod dart;
pub mod env;
mod error;
pub mod harness;
pub mod policy;
pub mod reward;
pub mod rng;
pub mod trace;

pub use action::Action;
pub use env::{ArmModel, Environment, RewardSample};
pub use error::{BanditError, Result};
pub use policy::{Policy, SimRng};
pub use reward::JointReward;
pub use trace::{RegretSeries, RegretTrace};
