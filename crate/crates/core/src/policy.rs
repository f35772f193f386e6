//! The policy interface and the simulation loop shared by every algorithm.

use crate::action::Action;
use crate::env::Environment;
use crate::error::Result;
use crate::rng::{self, Purpose, RandomSource};
use crate::trace::RegretTrace;

/// A full-bandit policy: it picks an action and sees only the joint reward.
pub trait Policy {
    fn select(&mut self, rng: &mut RandomSource) -> Result<Action>;

    fn observe(&mut self, action: &Action, joint_reward: f64) -> Result<()>;

    /// The action the policy would settle on if asked now, if any.
    fn recommendation(&self) -> Option<Action>;
}

/// Independent random streams for the environment and the policy.
#[derive(Debug, Clone)]
pub struct SimRng {
    pub env: RandomSource,
    pub policy: RandomSource,
}

impl SimRng {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            env: rng::stream(seed, Purpose::Environment),
            policy: rng::stream(seed, Purpose::Policy),
        }
    }
}

/// Plays `policy` against `env` until `stop(t)` returns true, where `t` is the
/// number of steps played so far, recording the oracle value of each action.
pub fn simulate_until<P, F>(
    env: &Environment,
    policy: &mut P,
    rng: &mut SimRng,
    mut stop: F,
) -> Result<RegretTrace>
where
    P: Policy + ?Sized,
    F: FnMut(u64) -> bool,
{
    let mut trace = RegretTrace::new(env.optimal_reward());
    let mut buf = Vec::with_capacity(env.k());
    let mut last: Option<(Action, f64)> = None;
    let mut t = 0u64;
    while !stop(t) {
        let action = policy.select(&mut rng.policy)?;
        let mu = match &last {
            Some((prev, mu)) if *prev == action => *mu,
            _ => {
                let mu = env.expected_joint_reward(&action)?;
                last = Some((action.clone(), mu));
                mu
            }
        };
        let reward = env.sample_into(&action, &mut rng.env, &mut buf);
        policy.observe(&action, reward)?;
        trace.push(mu);
        t += 1;
    }
    Ok(trace)
}

/// Plays exactly `horizon` steps.
pub fn simulate<P: Policy + ?Sized>(
    env: &Environment,
    policy: &mut P,
    horizon: u64,
    rng: &mut SimRng,
) -> Result<RegretTrace> {
    let mut trace = simulate_until(env, policy, rng, |t| t >= horizon)?;
    trace.rewards.shrink_to_fit();
    Ok(trace)
}
