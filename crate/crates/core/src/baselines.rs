//! Reference policies that treat every K-subset as a separate arm, plus the
//! clairvoyant oracle.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::action::{binomial, Action, Combinations};
use crate::env::{ArmModel, Environment};
use crate::error::{BanditError, Result};
use crate::policy::{simulate, Policy, SimRng};
use crate::rng::RandomSource;
use crate::trace::RegretTrace;

/// Largest action table the enumerating baselines will build.
pub const ACTION_TABLE_LIMIT: u128 = 1_000_000;

/// Every K-subset of the arms in lexicographic order, with per-action
/// running means and play counts.
#[derive(Debug, Clone)]
pub struct ActionTable {
    actions: Vec<Action>,
    means: Vec<f64>,
    counts: Vec<u64>,
}

impl ActionTable {
    pub fn new(n_arms: usize, k: usize) -> Result<Self> {
        let count = binomial(n_arms, k);
        if count > ACTION_TABLE_LIMIT {
            return Err(BanditError::TooManyActions {
                count,
                limit: ACTION_TABLE_LIMIT,
            });
        }
        let actions: Vec<Action> = Combinations::new(n_arms, k)
            .map(Action::from_sorted_unchecked)
            .collect();
        let len = actions.len();
        Ok(Self {
            actions,
            means: vec![0.0; len],
            counts: vec![0; len],
        })
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn action(&self, index: usize) -> &Action {
        &self.actions[index]
    }

    pub fn mean(&self, index: usize) -> f64 {
        self.means[index]
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts[index]
    }

    pub fn index_of(&self, action: &Action) -> Option<usize> {
        self.actions.binary_search(action).ok()
    }

    fn record(&mut self, index: usize, reward: f64) {
        self.counts[index] += 1;
        self.means[index] += (reward - self.means[index]) / self.counts[index] as f64;
    }

    /// Most played action, ties going to the higher running mean and then to
    /// the lexicographically first.
    pub fn most_played(&self) -> Option<&Action> {
        (0..self.len())
            .filter(|&i| self.counts[i] > 0)
            .max_by(|&a, &b| {
                self.counts[a]
                    .cmp(&self.counts[b])
                    .then(self.means[a].total_cmp(&self.means[b]))
                    .then(b.cmp(&a))
            })
            .map(|i| &self.actions[i])
    }

    /// Played action with the highest running mean (first on ties).
    fn empirical_best(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for i in 0..self.len() {
            if self.counts[i] > 0 && best.is_none_or(|b| self.means[i] > self.means[b]) {
                best = Some(i);
            }
        }
        best
    }
}

/// UCB1 over the enumerated action table: each action once in
/// lexicographic order, then the largest `mean + sqrt(2 ln t / n)`.
#[derive(Debug, Clone)]
pub struct CombUcb {
    table: ActionTable,
    t: u64,
}

impl CombUcb {
    pub fn new(env: &Environment) -> Result<Self> {
        if let ArmModel::CorrelatedGaussian { .. } = env.model() {
            return Err(BanditError::UnsupportedEnvironment(
                "UCB assumes bounded rewards; the Gaussian construction is unbounded".into(),
            ));
        }
        Ok(Self {
            table: ActionTable::new(env.n_arms(), env.k())?,
            t: 0,
        })
    }

    pub fn table(&self) -> &ActionTable {
        &self.table
    }

    fn choose(&self) -> usize {
        let len = self.table.len() as u64;
        if self.t < len {
            return self.t as usize;
        }
        let log_t = 2.0 * (self.t as f64).ln();
        let mut best = 0;
        let mut best_index = f64::NEG_INFINITY;
        for i in 0..self.table.len() {
            let index = self.table.means[i] + (log_t / self.table.counts[i] as f64).sqrt();
            if index > best_index {
                best_index = index;
                best = i;
            }
        }
        best
    }
}

impl Policy for CombUcb {
    fn select(&mut self, _rng: &mut RandomSource) -> Result<Action> {
        Ok(self.table.action(self.choose()).clone())
    }

    fn observe(&mut self, action: &Action, joint_reward: f64) -> Result<()> {
        let index = self
            .table
            .index_of(action)
            .ok_or_else(|| BanditError::InvalidEnvironment(format!("{action} not in table")))?;
        self.table.record(index, joint_reward);
        self.t += 1;
        Ok(())
    }

    fn recommendation(&self) -> Option<Action> {
        self.table.most_played().cloned()
    }
}

/// Exploration probability as a function of the 1-based step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "schedule", rename_all = "snake_case", deny_unknown_fields)]
pub enum EpsilonSchedule {
    /// `min(1, c / t)`
    InverseTime { c: f64 },
    Constant { epsilon: f64 },
}

impl EpsilonSchedule {
    pub fn at(&self, t: u64) -> f64 {
        match *self {
            Self::InverseTime { c } => (c / t as f64).min(1.0),
            Self::Constant { epsilon } => epsilon,
        }
        .clamp(0.0, 1.0)
    }
}

/// Epsilon-greedy over the enumerated action table. Until some action has
/// been played, every step explores.
#[derive(Debug, Clone)]
pub struct EpsilonGreedy {
    table: ActionTable,
    schedule: EpsilonSchedule,
    t: u64,
    best: Option<usize>,
}

impl EpsilonGreedy {
    pub fn new(env: &Environment, schedule: EpsilonSchedule) -> Result<Self> {
        Ok(Self {
            table: ActionTable::new(env.n_arms(), env.k())?,
            schedule,
            t: 0,
            best: None,
        })
    }
}

impl Policy for EpsilonGreedy {
    fn select(&mut self, rng: &mut RandomSource) -> Result<Action> {
        let epsilon = self.schedule.at(self.t + 1);
        let index = match self.best {
            Some(best) if !rng.random_bool(epsilon) => best,
            _ => rng.random_range(0..self.table.len()),
        };
        Ok(self.table.action(index).clone())
    }

    fn observe(&mut self, action: &Action, joint_reward: f64) -> Result<()> {
        let index = self
            .table
            .index_of(action)
            .ok_or_else(|| BanditError::InvalidEnvironment(format!("{action} not in table")))?;
        self.table.record(index, joint_reward);
        self.t += 1;
        self.best = match self.best {
            // Only the updated entry changed: it either overtakes the leader,
            // or, if it was the leader and dropped, a rescan is needed.
            Some(b) if b == index => self.table.empirical_best(),
            Some(b) if self.table.means[index] > self.table.means[b]
                || (self.table.means[index] == self.table.means[b] && index < b) =>
            {
                Some(index)
            }
            Some(b) => Some(b),
            None => Some(index),
        };
        Ok(())
    }

    fn recommendation(&self) -> Option<Action> {
        self.best.map(|i| self.table.action(i).clone())
    }
}

/// Plays the optimal action every step.
#[derive(Debug, Clone)]
pub struct Oracle {
    action: Action,
}

impl Oracle {
    pub fn new(env: &Environment) -> Self {
        Self {
            action: env.best_action().clone(),
        }
    }
}

impl Policy for Oracle {
    fn select(&mut self, _rng: &mut RandomSource) -> Result<Action> {
        Ok(self.action.clone())
    }

    fn observe(&mut self, _action: &Action, _joint_reward: f64) -> Result<()> {
        Ok(())
    }

    fn recommendation(&self) -> Option<Action> {
        Some(self.action.clone())
    }
}

/// Outcome of a baseline run.
#[derive(Debug, Clone)]
pub struct BaselineRun {
    pub trace: RegretTrace,
    pub recommendation: Option<Action>,
}

pub fn run_comb_ucb(env: &Environment, horizon: u64, rng: &mut SimRng) -> Result<BaselineRun> {
    let mut policy = CombUcb::new(env)?;
    let trace = simulate(env, &mut policy, horizon, rng)?;
    Ok(BaselineRun {
        trace,
        recommendation: policy.recommendation(),
    })
}

pub fn run_epsilon_greedy(
    env: &Environment,
    horizon: u64,
    schedule: EpsilonSchedule,
    rng: &mut SimRng,
) -> Result<BaselineRun> {
    let mut policy = EpsilonGreedy::new(env, schedule)?;
    let trace = simulate(env, &mut policy, horizon, rng)?;
    Ok(BaselineRun {
        trace,
        recommendation: policy.recommendation(),
    })
}

pub fn run_oracle(env: &Environment, horizon: u64, rng: &mut SimRng) -> Result<BaselineRun> {
    let mut policy = Oracle::new(env);
    let trace = simulate(env, &mut policy, horizon, rng)?;
    Ok(BaselineRun {
        trace,
        recommendation: policy.recommendation(),
    })
}
