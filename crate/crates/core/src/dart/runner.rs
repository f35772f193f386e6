use crate::action::Action;
use crate::dart::params::DartParams;
use crate::dart::state::{DartState, EpochPlan, EpochSummary};
use crate::env::Environment;
use crate::error::{BanditError, Result};
use crate::policy::{simulate, simulate_until, Policy, SimRng};
use crate::rng::RandomSource;
use crate::trace::RegretTrace;

type EpochHook = Box<dyn FnMut(&DartState, &EpochSummary) + Send>;

/// DART as a step-at-a-time [`Policy`] for a known horizon.
pub struct Dart {
    state: DartState,
    plan: Option<EpochPlan>,
    cursor: usize,
    hook: Option<EpochHook>,
}

impl std::fmt::Debug for Dart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dart")
            .field("state", &self.state)
            .field("plan", &self.plan)
            .field("cursor", &self.cursor)
            .finish_non_exhaustive()
    }
}

impl Dart {
    pub fn new(n_arms: usize, k: usize, horizon: u64, params: DartParams) -> Result<Self> {
        Ok(Self::from_state(DartState::new(n_arms, k, horizon, params)?))
    }

    pub fn from_state(state: DartState) -> Self {
        Self {
            state,
            plan: None,
            cursor: 0,
            hook: None,
        }
    }

    /// Calls `hook` after every accept/reject pass.
    pub fn on_epoch(mut self, hook: impl FnMut(&DartState, &EpochSummary) + Send + 'static) -> Self {
        self.hook = Some(Box::new(hook));
        self
    }

    pub fn state(&self) -> &DartState {
        &self.state
    }

    pub fn into_state(self) -> DartState {
        self.state
    }
}

impl Policy for Dart {
    fn select(&mut self, rng: &mut RandomSource) -> Result<Action> {
        if let Some(action) = self.state.committed() {
            return Ok(action.clone());
        }
        if self.state.t() >= self.state.horizon() {
            return Err(BanditError::BudgetExhausted(self.state.horizon()));
        }
        let plan = match &mut self.plan {
            Some(plan) => plan,
            slot => {
                self.cursor = 0;
                slot.insert(self.state.plan_epoch(rng)?)
            }
        };
        Ok(self.state.action_for(&plan.groups[self.cursor]))
    }

    fn observe(&mut self, _action: &Action, joint_reward: f64) -> Result<()> {
        let Some(plan) = &self.plan else {
            return self.state.observe_committed();
        };
        self.state.observe(&plan.groups[self.cursor], joint_reward)?;
        self.cursor += 1;
        if self.cursor == plan.len() {
            self.plan = None;
            let summary = self.state.end_epoch();
            if let Some(hook) = &mut self.hook {
                hook(&self.state, &summary);
            }
        }
        Ok(())
    }

    fn recommendation(&self) -> Option<Action> {
        self.state.committed().cloned()
    }
}

/// Result of a fixed-horizon DART run.
#[derive(Debug, Clone)]
pub struct DartRun {
    pub trace: RegretTrace,
    pub state: DartState,
}

/// Runs DART for exactly `horizon` steps.
pub fn run_dart(
    env: &Environment,
    horizon: u64,
    params: DartParams,
    rng: &mut SimRng,
) -> Result<DartRun> {
    let mut dart = Dart::new(env.n_arms(), env.k(), horizon, params)?;
    let trace = simulate(env, &mut dart, horizon, rng)?;
    Ok(DartRun {
        trace,
        state: dart.into_state(),
    })
}

/// DART without a known horizon: fresh instances on consecutive segments of
/// 1, 2, 4, ... steps, each tuned to its own segment length.
#[derive(Debug)]
pub struct AnytimeDart {
    n_arms: usize,
    k: usize,
    params: DartParams,
    segment: u32,
    inner: Dart,
    /// Cumulative step counts at which each segment ended.
    boundaries: Vec<u64>,
    t: u64,
}

impl AnytimeDart {
    pub fn new(n_arms: usize, k: usize, params: DartParams) -> Result<Self> {
        Ok(Self {
            n_arms,
            k,
            params,
            segment: 0,
            inner: Dart::new(n_arms, k, Self::segment_len(0), params)?,
            boundaries: Vec::new(),
            t: 0,
        })
    }

    /// Length of segment `l`, counted from zero.
    pub fn segment_len(l: u32) -> u64 {
        1u64 << l
    }

    pub fn boundaries(&self) -> &[u64] {
        &self.boundaries
    }

    pub fn current(&self) -> &Dart {
        &self.inner
    }
}

impl Policy for AnytimeDart {
    fn select(&mut self, rng: &mut RandomSource) -> Result<Action> {
        if self.inner.state().t() == self.inner.state().horizon() {
            self.boundaries.push(self.t);
            self.segment += 1;
            let len = Self::segment_len(self.segment);
            self.inner = Dart::new(self.n_arms, self.k, len, self.params)?;
        }
        self.inner.select(rng)
    }

    fn observe(&mut self, action: &Action, joint_reward: f64) -> Result<()> {
        self.inner.observe(action, joint_reward)?;
        self.t += 1;
        Ok(())
    }

    fn recommendation(&self) -> Option<Action> {
        self.inner.recommendation()
    }
}

/// Result of an anytime run.
#[derive(Debug, Clone)]
pub struct AnytimeRun {
    pub trace: RegretTrace,
    /// Cumulative step counts at which completed segments ended.
    pub boundaries: Vec<u64>,
    pub recommendation: Option<Action>,
}

/// Runs [`AnytimeDart`] until `stop(t)` holds for the number of steps played.
pub fn run_dart_anytime(
    env: &Environment,
    params: DartParams,
    rng: &mut SimRng,
    stop: impl FnMut(u64) -> bool,
) -> Result<AnytimeRun> {
    let mut dart = AnytimeDart::new(env.n_arms(), env.k(), params)?;
    let trace = simulate_until(env, &mut dart, rng, stop)?;
    let mut boundaries = dart.boundaries.clone();
    if dart.inner.state().t() == dart.inner.state().horizon() {
        boundaries.push(dart.t);
    }
    Ok(AnytimeRun {
        trace,
        boundaries,
        recommendation: dart.recommendation(),
    })
}
