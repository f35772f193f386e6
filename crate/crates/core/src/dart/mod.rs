//! DART: adaptive accept/reject selection of the top K arms from joint
//! rewards alone.
//!
//! Each epoch shuffles the arms still under exploration, splits them into
//! groups that fill the open slots, and plays every group alongside the arms
//! already accepted. An arm's estimate is the running mean of the joint
//! rewards of the actions it was explored in. After the epoch, arms whose
//! estimate clears the (K+1)-th ranked estimate by the current width are
//! accepted, and arms that fall short of the K-th by the same width are
//! rejected. The width halves on a fixed schedule; once it drops below the
//! resolution floor, or the top K is settled, the best current guess is
//! played for the rest of the horizon.

mod params;
mod runner;
mod state;

pub use params::DartParams;
pub use runner::{run_dart, run_dart_anytime, AnytimeDart, AnytimeRun, Dart, DartRun};
pub use state::{DartState, EpochGroup, EpochPlan, EpochSummary, Phase};
