//! End-to-end acceptance checks. Each check prints one PASS/FAIL line with
//! the measured value and its threshold; INFO lines give context that is not
//! itself a pass condition. The process exits non-zero if any check fails.

use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use dart_core::assumptions::{self, GridCase};
use dart_core::dart::{self, Dart, DartParams, DartState};
use dart_core::harness::{
    self, presets, AggregateResult, AlgorithmKind, AlgorithmSpec, EnvironmentSpec, ExperimentConfig,
};
use dart_core::policy::simulate;
use dart_core::rng::{self, Purpose};
use dart_core::{Action, Environment, JointReward, SimRng};

const RUNS: u64 = 25;
const MASTER_SEED: u64 = 1;

struct Outcome {
    pass: bool,
    detail: String,
    info: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self {
            pass,
            detail,
            info: Vec::new(),
        }
    }

    fn info(mut self, line: String) -> Self {
        self.info.push(line);
        self
    }
}

fn identification_means() -> Vec<f64> {
    vec![0.95, 0.85, 0.75, 0.5, 0.45, 0.4, 0.35, 0.3, 0.25, 0.2]
}

fn config(name: &str, n_arms: usize, k: usize, horizon: u64, environment: EnvironmentSpec, algorithms: Vec<AlgorithmSpec>) -> ExperimentConfig {
    ExperimentConfig {
        name: name.into(),
        n_arms,
        k,
        horizon,
        replications: RUNS,
        master_seed: MASTER_SEED,
        checkpoint_stride: None,
        environment,
        algorithms,
    }
}

fn calibrated() -> AlgorithmSpec {
    AlgorithmSpec::with_params(AlgorithmKind::Dart, DartParams::calibrated())
}

fn final_regret(result: &AggregateResult, label: &str) -> f64 {
    result.algorithm(label).and_then(|a| a.mean_final_regret()).expect("no successful runs")
}

fn ordering() -> Outcome {
    let c = config(
        "ordering",
        15,
        2,
        50_000,
        EnvironmentSpec::Bernoulli { reward: JointReward::Mean, means: None },
        vec![
            calibrated(),
            AlgorithmSpec::new(AlgorithmKind::CombUcb),
            AlgorithmSpec::new(AlgorithmKind::Dart).labeled("dart-analysis"),
        ],
    );
    let started = Instant::now();
    let result = harness::run_experiment(&c).unwrap();
    let elapsed = started.elapsed();
    let (d, u) = (final_regret(&result, "dart"), final_regret(&result, "comb_ucb"));
    Outcome::new(
        d < u && elapsed < Duration::from_secs(120),
        format!("DART {d:.1} < UCB {u:.1}, {:.1}s < 120s", elapsed.as_secs_f64()),
    )
    .info(format!(
        "same runs with the analysis constants 288/720: DART {:.1}",
        final_regret(&result, "dart-analysis")
    ))
}

fn identification_config(horizon: u64) -> ExperimentConfig {
    config(
        "identification",
        10,
        3,
        horizon,
        EnvironmentSpec::Bernoulli { reward: JointReward::Mean, means: Some(identification_means()) },
        vec![calibrated()],
    )
}

fn identification() -> Outcome {
    let result = harness::run_experiment(&identification_config(100_000)).unwrap();
    let hits = result.algorithms[0].identified_count();
    Outcome::new(hits >= 22, format!("committed to the best action in {hits}/25 runs (need 22)"))
}

fn sqrt_scaling() -> Outcome {
    let long = harness::run_experiment(&identification_config(100_000)).unwrap();
    let short = harness::run_experiment(&identification_config(25_000)).unwrap();
    let (r_long, r_short) = (final_regret(&long, "dart"), final_regret(&short, "dart"));
    let ratio = r_long / r_short;
    let summary = &long.algorithms[0].summary;
    let at_quarter = summary.iter().find(|s| s.t == 25_000).unwrap().mean;
    Outcome::new(
        ratio <= 2.5,
        format!("R(1e5) / R(2.5e4) = {r_long:.1} / {r_short:.1} = {ratio:.3} (need <= 2.5)"),
    )
    .info(format!(
        "within the T=1e5 runs, R(1e5) / R(2.5e4) = {:.3}",
        r_long / at_quarter
    ))
}

/// Expected order statistics of 12 Uniform[0, 1] draws: i / 13.
fn quadratic_means() -> Vec<f64> {
    (1..=12).map(|i| i as f64 / 13.0).collect()
}

fn quadratic() -> Outcome {
    let c = config(
        "quadratic",
        12,
        4,
        100_000,
        EnvironmentSpec::Bernoulli { reward: JointReward::Quadratic, means: Some(quadratic_means()) },
        vec![calibrated(), AlgorithmSpec::new(AlgorithmKind::CombUcb)],
    );
    let result = harness::run_experiment(&c).unwrap();
    let (d, u) = (final_regret(&result, "dart"), final_regret(&result, "comb_ucb"));
    let hits = result.algorithm("dart").unwrap().identified_count();

    let uniform = harness::draw_uniform_means(12, MASTER_SEED);
    let mut sorted = uniform;
    sorted.sort_by(|a, b| b.total_cmp(a));
    Outcome::new(
        d < u && hits >= 20,
        format!("DART {d:.1} < UCB {u:.1}; committed to the best action in {hits}/25 runs (need 20)"),
    )
    .info(format!(
        "means i/13; a Uniform[0,1] draw for seed {MASTER_SEED} would put the 4th and 5th means {:.4} apart",
        sorted[3] - sorted[4]
    ))
}

fn brute_force_suite() -> Outcome {
    let started = Instant::now();
    let cases = assumptions::verify_grid(MASTER_SEED, 8, 3, 20).unwrap();
    let elapsed = started.elapsed();
    let ordering = cases.iter().filter(|c| c.ordering_holds).count();
    let monotone = cases.iter().filter(|c| c.violation.is_none()).count();
    let covered = JointReward::ALL
        .iter()
        .all(|r| cases.iter().any(|c| c.reward == *r && c.n_arms == 8 && c.k == 3));
    Outcome::new(
        cases.iter().all(GridCase::passed) && covered && elapsed < Duration::from_secs(60),
        format!(
            "ordering {ordering}/{n}, monotonicity {monotone}/{n} (N<=8, K<=3, 20 vectors, 4 rewards), {:.2}s < 60s",
            elapsed.as_secs_f64(),
            n = cases.len()
        ),
    )
}

/// 28 Bernoulli cases (7 per reward) and 2 correlated Gaussian cases.
fn oracle_cases() -> Vec<(Environment, Action)> {
    let mut cases = Vec::new();
    let shapes: [(Vec<f64>, usize, Vec<usize>); 7] = [
        (vec![0.9, 0.1], 1, vec![1]),
        (vec![0.2, 0.5, 0.8], 2, vec![0, 2]),
        (vec![0.05, 0.95, 0.5, 0.3], 2, vec![1, 2]),
        (vec![0.3, 0.6, 0.1, 0.9, 0.45], 3, vec![0, 2, 4]),
        (vec![0.7, 0.2, 0.35, 0.8, 0.65, 0.1], 4, vec![0, 1, 3, 5]),
        (vec![0.99, 0.01, 0.5, 0.25, 0.75, 0.6, 0.4], 3, vec![0, 1, 2]),
        (vec![0.15, 0.85, 0.55, 0.45, 0.65, 0.35, 0.25, 0.75], 5, vec![1, 3, 4, 6, 7]),
    ];
    for reward in JointReward::ALL {
        for (means, k, arms) in &shapes {
            let env = Environment::bernoulli(means.clone(), *k, reward).unwrap();
            let action = Action::new(arms, means.len()).unwrap();
            cases.push((env, action));
        }
    }
    let g = Environment::correlated_gaussian(6, &[0, 1], 0.1, 0.5).unwrap();
    cases.push((g.clone(), Action::new(&[1, 4], 6).unwrap()));
    let g = Environment::correlated_gaussian(8, &[2, 5, 7], 0.25, 1.0).unwrap();
    cases.push((g, Action::new(&[2, 5, 7], 8).unwrap()));
    cases
}

fn oracle_correctness() -> Outcome {
    const SAMPLES: u64 = 1_000_000;
    let cases = oracle_cases();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (i, (env, action)) in cases.iter().enumerate() {
        let mut rng = rng::replication_stream(MASTER_SEED, i as u64, Purpose::Environment);
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..SAMPLES {
            let r = env.sample(action, &mut rng).unwrap().joint_reward;
            sum += r;
            sum_sq += r * r;
        }
        let mean = sum / SAMPLES as f64;
        let var = (sum_sq / SAMPLES as f64 - mean * mean).max(0.0);
        let se = (var / SAMPLES as f64).sqrt();
        let z = (mean - env.expected_joint_reward(action).unwrap()).abs() / se;
        worst = worst.max(z);
        if z > 5.0 {
            failures.push(format!("case {i}: {z:.2} SE"));
        }
    }
    Outcome::new(
        failures.is_empty() && cases.len() == 30,
        format!("{} cases, largest deviation {worst:.2} SE (need <= 5){}", cases.len(), if failures.is_empty() { String::new() } else { format!("; {}", failures.join(", ")) }),
    )
}

fn hand_check() -> Outcome {
    let mut state = DartState::new(5, 2, 1_000, DartParams::default().with_lambda(0.0))
        .unwrap()
        .with_estimates(vec![0.9, 0.7, 0.5, 0.3, 0.1], vec![10; 5])
        .unwrap()
        .with_delta(0.3);
    let summary = state.end_epoch();
    let example = summary.accepted == [0] && summary.rejected == [3, 4] && state.active() == [1, 2];

    let env = Environment::bernoulli(identification_means(), 3, JointReward::Mean).unwrap();
    let problems = Arc::new(Mutex::new(Vec::new()));
    let epochs = Arc::new(Mutex::new(0u64));
    let (sink, count) = (problems.clone(), epochs.clone());
    let mut dart = Dart::new(10, 3, 100_000, DartParams::calibrated()).unwrap().on_epoch(move |s, _| {
        *count.lock().unwrap() += 1;
        if let Err(e) = s.check_invariants() {
            sink.lock().unwrap().push(e);
        }
    });
    simulate(&env, &mut dart, 100_000, &mut SimRng::from_seed(rng::replication_seed(MASTER_SEED, 0))).unwrap();
    let problems = problems.lock().unwrap();
    let epochs = *epochs.lock().unwrap();
    Outcome::new(
        example && problems.is_empty() && epochs > 0,
        format!(
            "accept {:?}, reject {:?} (expected [0], [3, 4]); invariants held on {epochs} epochs{}",
            summary.accepted,
            summary.rejected,
            problems.first().map(|p| format!(", first violation: {p}")).unwrap_or_default()
        ),
    )
}

fn anytime_ratio(env: &Environment) -> (f64, f64, Vec<u64>) {
    const T: u64 = 1 << 14;
    let (mut fixed, mut anytime) = (0.0, 0.0);
    let mut boundaries = Vec::new();
    for run in 0..RUNS {
        let seed = rng::replication_seed(MASTER_SEED, run);
        fixed += dart::run_dart(env, T, DartParams::calibrated(), &mut SimRng::from_seed(seed))
            .unwrap()
            .trace
            .total_regret();
        let a = dart::run_dart_anytime(env, DartParams::calibrated(), &mut SimRng::from_seed(seed), |t| t >= T).unwrap();
        anytime += a.trace.total_regret();
        boundaries = a.boundaries;
    }
    (fixed / RUNS as f64, anytime / RUNS as f64, boundaries)
}

fn anytime() -> Outcome {
    let env = Environment::bernoulli(identification_means(), 3, JointReward::Mean).unwrap();
    let (fixed, any, boundaries) = anytime_ratio(&env);
    let expected: Vec<u64> = (1..=14).map(|l| (1u64 << l) - 1).collect();
    let ratio = any / fixed;
    let mut outcome = Outcome::new(
        boundaries == expected && ratio <= 3.0,
        format!(
            "boundaries 1,3,7,...,16383: {}; anytime {any:.1} / fixed {fixed:.1} = {ratio:.3} at T=2^14 (need <= 3)",
            if boundaries == expected { "yes" } else { "no" }
        ),
    );
    let lin = Environment::bernoulli(harness::draw_uniform_means(15, MASTER_SEED), 2, JointReward::Mean).unwrap();
    let quad = Environment::bernoulli(quadratic_means(), 4, JointReward::Quadratic).unwrap();
    for (name, env) in [("N=15 K=2 uniform means", lin), ("N=12 K=4 quadratic", quad)] {
        let (f, a, _) = anytime_ratio(&env);
        outcome = outcome.info(format!("{name}: anytime / fixed = {:.3}", a / f));
    }
    outcome
}

fn write_twice(c: &ExperimentConfig) -> bool {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let files: Vec<_> = dirs
        .iter()
        .map(|d| harness::write_results(&harness::run_experiment(c).unwrap(), d.path()).unwrap())
        .collect();
    let read = |p: &std::path::Path| std::fs::read(p).unwrap();
    read(&files[0].results) == read(&files[1].results)
        && read(&files[0].aggregate) == read(&files[1].aggregate)
        && read(&files[0].manifest) == read(&files[1].manifest)
}

fn determinism() -> Outcome {
    let mut mismatched = Vec::new();
    let all = presets::all();
    for p in &all {
        let mut c = p.config.clone();
        c.replications = 3;
        c.horizon = 3_000;
        if !write_twice(&c) {
            mismatched.push(p.name.clone());
        }
    }
    let full = presets::find("appG-lin").unwrap().config;
    if !write_twice(&full) {
        mismatched.push("appG-lin (full size)".into());
    }
    Outcome::new(
        mismatched.is_empty(),
        format!(
            "{} presets at 3 runs x 3000 steps plus appG-lin at full size: {}",
            all.len(),
            if mismatched.is_empty() { "byte-identical".to_owned() } else { format!("differ: {}", mismatched.join(", ")) }
        ),
    )
}

type Check = (&'static str, fn() -> Outcome);

fn main() {
    let checks: [Check; 9] = [
        ("qualitative ordering (N=15, K=2, mean, T=5e4)", ordering),
        ("identification (N=10, K=3, mean, T=1e5)", identification),
        ("sqrt(T) scaling", sqrt_scaling),
        ("quadratic reward (N=12, K=4, T=1e5)", quadratic),
        ("ordering and monotonicity brute force", brute_force_suite),
        ("oracle vs Monte Carlo", oracle_correctness),
        ("accept/reject hand check and invariants", hand_check),
        ("anytime wrapper", anytime),
        ("determinism of presets", determinism),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let started = Instant::now();
        let outcome = check();
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "{} {name}: {} [{:.1}s]",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail,
            started.elapsed().as_secs_f64()
        );
        for line in outcome.info {
            println!("     INFO {line}");
        }
    }
    println!("{} of {} acceptance checks passed", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
