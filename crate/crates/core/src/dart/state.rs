use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::action::Action;
use crate::dart::params::DartParams;
use crate::env::rank_desc;
use crate::error::{BanditError, Result};
use crate::rng::RandomSource;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Exploring,
    Committed(Action),
}

/// One exploring group: `K_e` distinct active arms. `update[i]` is false for
/// an arm repeated to pad the last group of an epoch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpochGroup {
    pub arms: Vec<usize>,
    pub update: Vec<bool>,
}

/// The groups of one epoch, in play order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpochPlan {
    pub groups: Vec<EpochGroup>,
}

impl EpochPlan {
    /// Splits `permutation` into consecutive groups of `group_size`. A short
    /// final group is completed with the leading arms of the permutation,
    /// which are masked out of the update.
    pub fn from_permutation(permutation: &[usize], group_size: usize) -> Result<Self> {
        if group_size == 0 || permutation.len() < group_size {
            return Err(BanditError::Degenerate);
        }
        let groups = permutation
            .chunks(group_size)
            .map(|chunk| {
                let pad = group_size - chunk.len();
                let mut arms = chunk.to_vec();
                arms.extend_from_slice(&permutation[..pad]);
                let mut update = vec![true; chunk.len()];
                update.resize(group_size, false);
                EpochGroup { arms, update }
            })
            .collect();
        Ok(Self { groups })
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

/// What an accept/reject pass did.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EpochSummary {
    pub epoch: u64,
    pub accepted: Vec<usize>,
    pub rejected: Vec<usize>,
    pub delta_halved: bool,
    pub committed: Option<Action>,
}

/// The full state of one DART run.
///
/// Arms are partitioned into `accept` (confirmed members of the top K),
/// `active` (still being explored) and `reject` (confirmed outside it).
/// `mu_hat[i]` is the running mean of the joint rewards of the actions arm
/// `i` was explored in, over `counts[i]` such steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DartState {
    n_arms: usize,
    k: usize,
    horizon: u64,
    t: u64,
    epoch: u64,
    accept: Vec<usize>,
    active: Vec<usize>,
    reject: Vec<usize>,
    mu_hat: Vec<f64>,
    counts: Vec<u64>,
    delta: f64,
    n_threshold: f64,
    lambda: f64,
    params: DartParams,
    phase: Phase,
}

impl DartState {
    pub fn new(n_arms: usize, k: usize, horizon: u64, params: DartParams) -> Result<Self> {
        if k == 0 || k >= n_arms || horizon == 0 {
            return Err(BanditError::InvalidDims { n_arms, k, horizon });
        }
        params.validate().map_err(BanditError::Config)?;
        let delta = 1.0;
        Ok(Self {
            n_arms,
            k,
            horizon,
            t: 0,
            epoch: 0,
            accept: Vec::new(),
            active: (0..n_arms).collect(),
            reject: Vec::new(),
            mu_hat: vec![0.0; n_arms],
            counts: vec![0; n_arms],
            delta,
            n_threshold: params.epoch_threshold(n_arms, horizon, delta),
            lambda: params.lambda(n_arms, k, horizon),
            params,
            phase: Phase::Exploring,
        })
    }

    /// Replaces the per-arm estimates, for resuming a run or staging a state
    /// by hand.
    pub fn with_estimates(mut self, mu_hat: Vec<f64>, counts: Vec<u64>) -> Result<Self> {
        if mu_hat.len() != self.n_arms || counts.len() != self.n_arms {
            return Err(BanditError::Config(format!(
                "estimates must have {} entries",
                self.n_arms
            )));
        }
        self.mu_hat = mu_hat;
        self.counts = counts;
        Ok(self)
    }

    /// Overrides the confidence width (and the matching epoch threshold).
    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self.n_threshold = self.params.epoch_threshold(self.n_arms, self.horizon, delta);
        self
    }

    pub fn n_arms(&self) -> usize {
        self.n_arms
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn horizon(&self) -> u64 {
        self.horizon
    }
    pub fn t(&self) -> u64 {
        self.t
    }
    pub fn epoch(&self) -> u64 {
        self.epoch
    }
    pub fn accept(&self) -> &[usize] {
        &self.accept
    }
    pub fn active(&self) -> &[usize] {
        &self.active
    }
    pub fn reject(&self) -> &[usize] {
        &self.reject
    }
    pub fn mu_hat(&self) -> &[f64] {
        &self.mu_hat
    }
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn n_threshold(&self) -> f64 {
        self.n_threshold
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn params(&self) -> &DartParams {
        &self.params
    }
    pub fn phase(&self) -> &Phase {
        &self.phase
    }

    pub fn committed(&self) -> Option<&Action> {
        match &self.phase {
            Phase::Committed(a) => Some(a),
            Phase::Exploring => None,
        }
    }

    /// Number of top-K slots not yet filled by accepted arms (`K_e`).
    pub fn open_slots(&self) -> usize {
        self.k - self.accept.len()
    }

    /// Shuffles the active arms and splits them into groups of `K_e`.
    pub fn plan_epoch(&self, rng: &mut RandomSource) -> Result<EpochPlan> {
        let mut permutation = self.active.clone();
        permutation.shuffle(rng);
        EpochPlan::from_permutation(&permutation, self.open_slots())
    }

    /// The action played for `group`: every accepted arm plus the group.
    pub fn action_for(&self, group: &EpochGroup) -> Action {
        let mut arms = Vec::with_capacity(self.k);
        arms.extend_from_slice(&self.accept);
        arms.extend_from_slice(&group.arms);
        arms.sort_unstable();
        Action::from_sorted_unchecked(arms)
    }

    /// Records the joint reward of the step that played `group`.
    ///
    /// Only unmasked group members are updated; accepted arms are played
    /// but keep their estimates.
    pub fn observe(&mut self, group: &EpochGroup, joint_reward: f64) -> Result<()> {
        if self.t >= self.horizon {
            return Err(BanditError::BudgetExhausted(self.horizon));
        }
        for (&arm, &update) in group.arms.iter().zip(&group.update) {
            if update {
                let n = self.counts[arm] as f64;
                self.mu_hat[arm] = (n * self.mu_hat[arm] + joint_reward) / (n + 1.0);
                self.counts[arm] += 1;
            }
        }
        self.t += 1;
        Ok(())
    }

    /// Advances time for a step played after commitment.
    pub fn observe_committed(&mut self) -> Result<()> {
        if self.t >= self.horizon {
            return Err(BanditError::BudgetExhausted(self.horizon));
        }
        self.t += 1;
        Ok(())
    }

    /// The accept/reject pass run after every complete epoch, followed by the
    /// confidence schedule update and the commitment check.
    pub fn end_epoch(&mut self) -> EpochSummary {
        self.epoch += 1;
        let order = rank_desc(&self.mu_hat);
        let kth = self.mu_hat[order[self.k - 1]];
        let next = self.mu_hat[order[self.k]];

        let is_active = |arm: usize| self.active.binary_search(&arm).is_ok();
        let mut accepted: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&i| is_active(i) && self.mu_hat[i] > next + self.delta)
            .collect();
        // `order` runs from the largest estimate, so truncation keeps the best.
        accepted.truncate(self.open_slots());

        let remaining = self.active.len() - accepted.len();
        let spare = (self.accept.len() + accepted.len() + remaining).saturating_sub(self.k);
        let mut rejected: Vec<usize> = order
            .iter()
            .rev()
            .copied()
            .filter(|&i| is_active(i) && self.mu_hat[i] < kth - self.delta)
            .collect();
        rejected.truncate(spare);

        self.active
            .retain(|a| !accepted.contains(a) && !rejected.contains(a));
        self.accept.extend_from_slice(&accepted);
        self.accept.sort_unstable();
        self.reject.extend_from_slice(&rejected);
        self.reject.sort_unstable();
        accepted.sort_unstable();
        rejected.sort_unstable();

        let mut delta_halved = false;
        if self.epoch as f64 >= self.n_threshold {
            self.delta /= 2.0;
            self.n_threshold = self.params.epoch_threshold(self.n_arms, self.horizon, self.delta);
            delta_halved = true;
        }

        let settled = self.accept.len() + self.active.len() == self.k || self.open_slots() == 0;
        let committed = if self.delta < self.lambda || settled {
            let action = self.best_guess();
            self.phase = Phase::Committed(action.clone());
            Some(action)
        } else {
            None
        };

        tracing::debug!(
            epoch = self.epoch,
            t = self.t,
            delta = self.delta,
            accept = self.accept.len(),
            active = self.active.len(),
            reject = self.reject.len(),
            committed = committed.is_some(),
            "dart epoch"
        );

        EpochSummary {
            epoch: self.epoch,
            accepted,
            rejected,
            delta_halved,
            committed,
        }
    }

    /// The accepted arms plus the `K_e` active arms with the largest
    /// estimates.
    pub fn best_guess(&self) -> Action {
        let mut active = self.active.clone();
        active.sort_by(|&a, &b| self.mu_hat[b].total_cmp(&self.mu_hat[a]).then(a.cmp(&b)));
        let mut arms = self.accept.clone();
        arms.extend(active.into_iter().take(self.open_slots()));
        arms.sort_unstable();
        Action::from_sorted_unchecked(arms)
    }

    /// Checks the structural invariants of the state, reporting the first
    /// violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut seen = vec![0u8; self.n_arms];
        for &a in self.accept.iter().chain(&self.active).chain(&self.reject) {
            if a >= self.n_arms {
                return Err(format!("arm {a} out of range"));
            }
            seen[a] += 1;
        }
        if let Some(a) = seen.iter().position(|&c| c != 1) {
            return Err(format!("arm {a} appears {} times across the partition", seen[a]));
        }
        for set in [&self.accept, &self.active, &self.reject] {
            if !set.windows(2).all(|w| w[0] < w[1]) {
                return Err("partition sets must be sorted".into());
            }
        }
        if self.accept.len() > self.k {
            return Err(format!("{} accepted arms exceed K = {}", self.accept.len(), self.k));
        }
        if self.phase == Phase::Exploring && self.accept.len() + self.active.len() < self.k {
            return Err("fewer than K arms remain selectable while exploring".into());
        }
        let log2 = -self.delta.log2();
        if !(log2 >= 0.0 && log2.fract() == 0.0) {
            return Err(format!("delta = {} is not a power of one half", self.delta));
        }
        let expected = self.params.epoch_threshold(self.n_arms, self.horizon, self.delta);
        if self.n_threshold != expected {
            return Err(format!("n_threshold {} != {expected}", self.n_threshold));
        }
        if self.t > self.horizon {
            return Err(format!("t = {} beyond horizon {}", self.t, self.horizon));
        }
        if let Phase::Committed(a) = &self.phase {
            if a.len() != self.k || !self.accept.iter().all(|&i| a.contains(i)) {
                return Err(format!("committed action {a} must hold K arms including all accepted"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Purpose};

    fn staged(mu_hat: Vec<f64>, k: usize, delta: f64) -> DartState {
        let n = mu_hat.len();
        DartState::new(n, k, 1_000, DartParams::default().with_lambda(0.0))
            .unwrap()
            .with_estimates(mu_hat, vec![10; n])
            .unwrap()
            .with_delta(delta)
    }

    #[test]
    fn init_values() {
        let s = DartState::new(2, 1, 1, DartParams::default()).unwrap();
        assert_eq!(s.active(), &[0, 1]);
        assert_eq!(s.delta(), 1.0);
        assert_eq!(s.phase(), &Phase::Exploring);
        assert!((s.n_threshold() - 288.0 * 2f64.ln()).abs() < 1e-12);
        s.check_invariants().unwrap();

        assert_eq!(
            DartState::new(5, 5, 10, DartParams::default()),
            Err(BanditError::InvalidDims { n_arms: 5, k: 5, horizon: 10 })
        );
        assert!(DartState::new(5, 0, 10, DartParams::default()).is_err());
    }

    #[test]
    fn lambda_formula() {
        // sqrt(720 * 45 * 8 * ln(9e7) / 1e6)
        let s = DartState::new(45, 8, 1_000_000, DartParams::default()).unwrap();
        let expected = (259_200.0 * 9.0e7f64.ln() / 1.0e6).sqrt();
        assert!((s.lambda() - expected).abs() < 1e-12);
        assert!((s.lambda() - 2.1788).abs() < 1e-4);
    }

    #[test]
    fn plan_pads_last_group_cyclically() {
        let plan = EpochPlan::from_permutation(&[3, 1, 4, 2, 5], 2).unwrap();
        let arms: Vec<_> = plan.groups.iter().map(|g| g.arms.clone()).collect();
        assert_eq!(arms, vec![vec![3, 1], vec![4, 2], vec![5, 3]]);
        assert_eq!(plan.groups[2].update, vec![true, false]);
        assert!(plan.groups[..2].iter().all(|g| g.update == vec![true, true]));

        let plan = EpochPlan::from_permutation(&[1, 2, 3, 4], 2).unwrap();
        assert_eq!(plan.len(), 2);
        assert!(plan.groups.iter().all(|g| g.update.iter().all(|&u| u)));

        let plan = EpochPlan::from_permutation(&[4, 2, 7], 3).unwrap();
        assert_eq!(plan.len(), 1);
        assert_eq!(plan.groups[0].update, vec![true; 3]);

        assert_eq!(EpochPlan::from_permutation(&[1, 2], 0), Err(BanditError::Degenerate));
    }

    #[test]
    fn random_plan_covers_active_once() {
        let s = DartState::new(7, 3, 100, DartParams::default()).unwrap();
        let plan = s.plan_epoch(&mut stream(3, Purpose::Policy)).unwrap();
        let mut updated: Vec<usize> = plan
            .groups
            .iter()
            .flat_map(|g| g.arms.iter().zip(&g.update).filter(|(_, &u)| u).map(|(&a, _)| a))
            .collect();
        updated.sort_unstable();
        assert_eq!(updated, (0..7).collect::<Vec<_>>());
        for g in &plan.groups {
            let mut arms = g.arms.clone();
            arms.sort_unstable();
            arms.dedup();
            assert_eq!(arms.len(), 3);
        }
    }

    #[test]
    fn running_mean_updates() {
        let mut s = DartState::new(4, 2, 10, DartParams::default()).unwrap();
        let g = EpochGroup { arms: vec![0, 1], update: vec![true, false] };
        s.observe(&g, 0.7).unwrap();
        assert_eq!(s.mu_hat()[0], 0.7);
        assert_eq!(s.counts()[0], 1);
        assert_eq!((s.mu_hat()[1], s.counts()[1]), (0.0, 0));
        assert_eq!(s.t(), 1);

        let mut s = DartState::new(4, 2, 10, DartParams::default())
            .unwrap()
            .with_estimates(vec![0.5, 0.0, 0.0, 0.0], vec![3, 0, 0, 0])
            .unwrap();
        s.observe(&EpochGroup { arms: vec![0, 2], update: vec![true, true] }, 0.9).unwrap();
        assert!((s.mu_hat()[0] - 0.6).abs() < 1e-15);
        assert_eq!(s.counts()[0], 4);
    }

    #[test]
    fn observe_respects_budget() {
        let mut s = DartState::new(3, 1, 1, DartParams::default()).unwrap();
        let g = EpochGroup { arms: vec![0], update: vec![true] };
        s.observe(&g, 1.0).unwrap();
        assert_eq!(s.observe(&g, 1.0), Err(BanditError::BudgetExhausted(1)));
    }

    #[test]
    fn accept_reject_worked_example() {
        let mut s = staged(vec![0.9, 0.7, 0.5, 0.3, 0.1], 2, 0.3);
        let summary = s.end_epoch();
        assert_eq!(summary.accepted, vec![0]);
        assert_eq!(summary.rejected, vec![3, 4]);
        assert_eq!(s.accept(), &[0]);
        assert_eq!(s.active(), &[1, 2]);
        assert_eq!(s.reject(), &[3, 4]);
        assert_eq!(s.open_slots(), 1);
        assert_eq!(s.phase(), &Phase::Exploring);
    }

    #[test]
    fn narrow_width_settles_and_commits() {
        let mut s = staged(vec![0.9, 0.7, 0.5, 0.3, 0.1], 2, 0.1);
        let summary = s.end_epoch();
        assert_eq!(summary.accepted, vec![0, 1]);
        assert_eq!(summary.rejected, vec![2, 3, 4]);
        assert_eq!(summary.committed.as_ref().map(|a| a.arms().to_vec()), Some(vec![0, 1]));
        assert_eq!(s.committed().unwrap().arms(), &[0, 1]);
    }

    #[test]
    fn equal_estimates_move_nothing() {
        let mut s = staged(vec![0.4; 6], 2, 0.125);
        let summary = s.end_epoch();
        assert!(summary.accepted.is_empty() && summary.rejected.is_empty());
        assert_eq!(s.active().len(), 6);
    }

    #[test]
    fn accept_cap_and_reject_floor() {
        // K = 1 but two arms clear the accept threshold: only the better one is admitted.
        let mut s = DartState::new(4, 1, 1_000, DartParams::default().with_lambda(0.0))
            .unwrap()
            .with_estimates(vec![0.8, 0.9, 0.1, 0.0], vec![5; 4])
            .unwrap()
            .with_delta(0.0625);
        let summary = s.end_epoch();
        assert_eq!(summary.accepted, vec![1]);
        s.check_invariants().unwrap();

        // Arm 0 was rejected earlier but its frozen estimate still ranks first,
        // so three active arms fall below the K-th estimate; only two may go.
        let mut s = staged(vec![0.9, 0.5, 0.2, 0.1, 0.05], 2, 0.0625);
        s.active = vec![1, 2, 3, 4];
        s.reject = vec![0];
        let summary = s.end_epoch();
        assert_eq!(summary.accepted, vec![1]);
        assert_eq!(summary.rejected, vec![3, 4]);
        assert_eq!(s.active(), &[2]);
        assert_eq!(s.committed().unwrap().arms(), &[1, 2]);
        s.check_invariants().unwrap();
    }

    #[test]
    fn full_accept_set_commits() {
        let mut s = DartState::new(5, 2, 1_000, DartParams::default().with_lambda(0.0))
            .unwrap()
            .with_estimates(vec![0.9, 0.85, 0.5, 0.48, 0.47], vec![5; 5])
            .unwrap()
            .with_delta(0.25);
        let summary = s.end_epoch();
        assert_eq!(summary.accepted, vec![0, 1]);
        assert_eq!(s.committed().unwrap().arms(), &[0, 1]);
    }

    #[test]
    fn delta_halves_on_schedule() {
        let mut s = DartState::new(3, 1, 2, DartParams::scaled(1e-3).with_lambda(0.0)).unwrap();
        // threshold = 0.288 * ln 6 < 1, so the first pass halves the width.
        let summary = s.end_epoch();
        assert!(summary.delta_halved);
        assert_eq!(s.delta(), 0.5);
        s.check_invariants().unwrap();
    }

    #[test]
    fn commits_when_width_below_floor() {
        let mut s = DartState::new(6, 2, 100, DartParams::default()).unwrap();
        assert!(s.lambda() > 1.0);
        s.mu_hat = vec![0.1, 0.6, 0.2, 0.5, 0.3, 0.0];
        let summary = s.end_epoch();
        assert_eq!(summary.committed.unwrap().arms(), &[1, 3]);
    }
}
