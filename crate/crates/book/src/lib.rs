//! The guide under `book/src`, compiled as documentation so that every
//! `rust` listing in it runs as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/environments.md")]
pub mod environments {}

#[doc = include_str!("../../../book/src/dart.md")]
pub mod dart {}

#[doc = include_str!("../../../book/src/anytime.md")]
pub mod anytime {}

#[doc = include_str!("../../../book/src/baselines.md")]
pub mod baselines {}

#[doc = include_str!("../../../book/src/assumptions.md")]
pub mod assumptions {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
