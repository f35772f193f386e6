//! Trace-level properties shared by every policy, and the reference
//! behaviour of the baselines.

use dart_core::action::Combinations;
use dart_core::baselines::{self, EpsilonSchedule};
use dart_core::dart::{self, DartParams, Phase};
use dart_core::harness::{make_policy, Algorithm};
use dart_core::policy::simulate;
use dart_core::{Action, Environment, JointReward, SimRng};
use proptest::prelude::*;

fn algorithms() -> Vec<Algorithm> {
    vec![
        Algorithm::Dart(DartParams::calibrated()),
        Algorithm::Dart(DartParams::default()),
        Algorithm::DartAnytime(DartParams::calibrated()),
        Algorithm::CombUcb,
        Algorithm::EpsilonGreedy(EpsilonSchedule::InverseTime { c: 5.0 }),
        Algorithm::Oracle,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn traces_are_bounded_and_regret_monotone(
        means in prop::collection::vec(0.0f64..1.0, 4..8),
        k_pick in any::<usize>(),
        horizon in 1u64..3_000,
        seed in any::<u64>(),
        f in prop::sample::select(JointReward::ALL.to_vec()),
    ) {
        let n = means.len();
        let k = 1 + k_pick % (n - 1);
        let means: Vec<f64> = means.iter().enumerate().map(|(i, m)| m * 0.99 + i as f64 * 1e-3).collect();
        let env = Environment::bernoulli(means, k, f).unwrap();
        let mu_star = env.optimal_reward();
        for algorithm in algorithms() {
            let mut policy = make_policy(&env, algorithm, horizon).unwrap();
            let trace = simulate(&env, policy.as_mut(), horizon, &mut SimRng::from_seed(seed)).unwrap();
            prop_assert_eq!(trace.len() as u64, horizon);
            prop_assert!(trace.rewards.iter().all(|&mu| mu <= mu_star + 1e-12));
            let points: Vec<u64> = (1..=horizon).collect();
            let series = trace.cumulative_regret(&points);
            prop_assert!(series.regret.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(series.regret[0] >= 0.0);
            if algorithm == Algorithm::Oracle {
                prop_assert_eq!(series.last(), Some(0.0));
            }
        }
    }
}

#[test]
fn uniform_play_matches_the_action_average() {
    let means = vec![0.9, 0.75, 0.6, 0.4, 0.3, 0.1];
    let env = Environment::bernoulli(means, 2, JointReward::Quadratic).unwrap();
    let actions: Vec<f64> = Combinations::new(6, 2)
        .map(|a| env.expected_joint_reward(&Action::new(&a, 6).unwrap()).unwrap())
        .collect();
    let expected_gap = env.optimal_reward() - actions.iter().sum::<f64>() / actions.len() as f64;

    let horizon = 200_000;
    let run = baselines::run_epsilon_greedy(
        &env,
        horizon,
        EpsilonSchedule::Constant { epsilon: 1.0 },
        &mut SimRng::from_seed(4),
    )
    .unwrap();
    let per_step = run.trace.total_regret() / horizon as f64;
    // Per-step gaps lie in [0, 1], so the standard error is below 0.5 / sqrt(T).
    assert!((per_step - expected_gap).abs() < 5.0 * 0.5 / (horizon as f64).sqrt(), "{per_step} vs {expected_gap}");
}

#[test]
fn decaying_exploration_is_sublinear() {
    let env = Environment::bernoulli(vec![0.9, 0.8, 0.5, 0.4, 0.2, 0.1], 2, JointReward::Mean).unwrap();
    let horizon = 40_000;
    let run = baselines::run_epsilon_greedy(&env, horizon, EpsilonSchedule::InverseTime { c: 5.0 }, &mut SimRng::from_seed(8))
        .unwrap();
    let series = run.trace.cumulative_regret(&[horizon / 2, horizon]);
    let (first, second) = (series.regret[0], series.regret[1] - series.regret[0]);
    assert!(second < first / 2.0, "first half {first}, second half {second}");
}

#[test]
fn dart_tail_is_flat_after_commitment() {
    let env = Environment::bernoulli(vec![0.95, 0.75, 0.55, 0.35, 0.15, 0.05], 2, JointReward::Mean).unwrap();
    let horizon = 100_000;
    let run = dart::run_dart(&env, horizon, DartParams::calibrated(), &mut SimRng::from_seed(21)).unwrap();
    let Phase::Committed(action) = run.state.phase() else {
        panic!("did not commit");
    };
    assert_eq!(action, env.best_action());
    let last_gap = run.trace.rewards.iter().rposition(|&mu| mu != env.optimal_reward()).unwrap();
    assert!(last_gap < horizon as usize / 2, "still exploring at step {last_gap}");
    let series = run.trace.cumulative_regret(&[horizon / 2, horizon]);
    assert_eq!(series.regret[0], series.regret[1]);
}

#[test]
fn ucb_beats_uniform_play_on_small_tables() {
    let env = Environment::bernoulli(vec![0.9, 0.6, 0.5, 0.3], 2, JointReward::Max).unwrap();
    let horizon = 20_000;
    let ucb = baselines::run_comb_ucb(&env, horizon, &mut SimRng::from_seed(1)).unwrap();
    let uniform = baselines::run_epsilon_greedy(&env, horizon, EpsilonSchedule::Constant { epsilon: 1.0 }, &mut SimRng::from_seed(1))
        .unwrap();
    assert!(ucb.trace.total_regret() < uniform.trace.total_regret() / 4.0);
    assert_eq!(ucb.recommendation.as_ref(), Some(env.best_action()));
}
