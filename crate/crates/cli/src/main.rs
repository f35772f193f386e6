use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dart_core::assumptions::{self, GridCase};
use dart_core::harness::{self, presets, AggregateResult, ExperimentConfig};
use dart_core::BanditError;

/// Top-K subset selection experiments under full-bandit feedback.
#[derive(Debug, Parser)]
#[command(name = "dart", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment and write its CSVs and manifest.
    Run(RunArgs),
    /// List the built-in presets, print one, or write them as config files.
    Presets(PresetArgs),
    /// Brute-force the ordering and monotonicity properties on random instances.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Config file, or the name of a preset.
    #[arg(long, value_name = "PATH")]
    config: String,
    /// Output directory.
    #[arg(long, value_name = "DIR", env = "DART_OUT_DIR", default_value = "results")]
    out: PathBuf,
    /// Master seed.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Number of replications.
    #[arg(long, value_name = "N")]
    runs: Option<u64>,
    /// Horizon T.
    #[arg(long, value_name = "T")]
    horizon: Option<u64>,
    /// Comma-separated algorithm labels or kinds to run.
    #[arg(long, value_name = "NAME", value_delimiter = ',')]
    algo: Vec<String>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Approximate number of checkpoints per run.
    #[arg(long, value_name = "N")]
    checkpoints: Option<u64>,
}

#[derive(Debug, Args)]
struct PresetArgs {
    /// Presets to print (or write, with --out).
    names: Vec<String>,
    /// Write `<name>.toml` for the selected presets (all if none) into DIR.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Seed for the random mean vectors.
    #[arg(long, value_name = "U64", default_value_t = 1)]
    seed: u64,
    /// Largest number of arms.
    #[arg(long, value_name = "N", default_value_t = 8)]
    max_arms: usize,
    /// Largest subset size.
    #[arg(long, value_name = "K", default_value_t = 3)]
    max_k: usize,
    /// Random mean vectors per (N, K) shape.
    #[arg(long, value_name = "N", default_value_t = 20)]
    vectors: u64,
}

/// Why the command stopped.
enum Failure {
    /// Bad config or arguments: exit 1.
    Config(String),
    /// Anything that went wrong after the config was accepted: exit 2.
    Runtime(String),
}

impl Failure {
    fn runtime(e: impl ToString) -> Self {
        Self::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "warn".into()),
        )
        .init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Presets(args) => list_presets(args),
        Command::Verify(args) => verify(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_config(args: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let path = Path::new(&args.config);
    let mut config = if path.exists() {
        ExperimentConfig::load(path).map_err(|e| match e {
            BanditError::Config(msg) => Failure::Config(msg),
            e => Failure::Config(e.to_string()),
        })?
    } else if let Some(preset) = presets::find(&args.config) {
        preset.config
    } else {
        return Err(Failure::Config(format!(
            "`{}` is neither a file nor a preset (see `dart presets`)",
            args.config
        )));
    };
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(runs) = args.runs {
        config.replications = runs;
    }
    if let Some(horizon) = args.horizon {
        config.horizon = horizon;
        if config.checkpoint_stride.is_some() && args.checkpoints.is_none() {
            config.checkpoint_stride = None;
        }
    }
    if let Some(count) = args.checkpoints {
        if count == 0 {
            return Err(Failure::Config("--checkpoints must be at least 1".into()));
        }
        config.set_checkpoint_count(count);
    }
    if !args.algo.is_empty() {
        let names: Vec<&str> = args.algo.iter().map(String::as_str).collect();
        config
            .select_algorithms(&names)
            .map_err(|e| Failure::Config(format!("--algo: {e}")))?;
    }
    config.validate().map_err(|e| match e {
        BanditError::Config(msg) => Failure::Config(msg),
        e => Failure::Config(e.to_string()),
    })?;
    Ok(config)
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let config = load_config(&args)?;
    if args.jobs == Some(0) {
        return Err(Failure::Config("--jobs must be at least 1".into()));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(Failure::runtime)?;
    let result = pool
        .install(|| harness::run_experiment(&config))
        .map_err(Failure::runtime)?;
    let files = harness::write_results(&result, &args.out).map_err(Failure::runtime)?;
    print_summary(&result);
    for path in [&files.results, &files.aggregate, &files.manifest] {
        println!("wrote {}", path.display());
    }
    if result.algorithms.iter().all(|a| a.runs.is_empty()) {
        return Err(Failure::Runtime("every replication failed".into()));
    }
    Ok(())
}

fn print_summary(result: &AggregateResult) {
    let config = &result.config;
    println!(
        "{}: N={} K={} T={} runs={} seed={}",
        config.name, config.n_arms, config.k, config.horizon, config.replications, config.master_seed
    );
    println!("best action {} with expected reward {}", result.best_action, result.optimal_reward);
    println!("{:<16} {:>16} {:>12} {:>8}", "algorithm", "mean regret", "identified", "failed");
    for alg in &result.algorithms {
        let regret = alg
            .mean_final_regret()
            .map_or_else(|| "-".to_owned(), |r| format!("{r:.3}"));
        println!(
            "{:<16} {:>16} {:>12} {:>8}",
            alg.label,
            regret,
            format!("{}/{}", alg.identified_count(), alg.runs.len()),
            alg.failures.len()
        );
    }
}

fn list_presets(args: PresetArgs) -> Result<(), Failure> {
    let all = presets::all();
    let mut selected = Vec::new();
    for name in &args.names {
        match all.iter().find(|p| &p.name == name) {
            Some(p) => selected.push(p),
            None => return Err(Failure::Config(format!("unknown preset `{name}`"))),
        }
    }
    match (&args.out, selected.is_empty()) {
        (Some(dir), _) => {
            let chosen = if selected.is_empty() { all.iter().collect() } else { selected };
            std::fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
            for p in chosen {
                let path = dir.join(format!("{}.toml", p.name));
                let text = format!("# {}\n{}", p.description, p.config.to_toml());
                std::fs::write(&path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
                println!("wrote {}", path.display());
            }
        }
        (None, true) => {
            let width = all.iter().map(|p| p.name.len()).max().unwrap_or(0);
            for p in &all {
                println!("{:<width$}  {}", p.name, p.description);
            }
        }
        (None, false) => {
            for p in selected {
                print!("# {}\n{}", p.description, p.config.to_toml());
            }
        }
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    if args.max_arms > assumptions::ENUMERATION_LIMIT {
        return Err(Failure::Config(format!(
            "--max-arms must be at most {}",
            assumptions::ENUMERATION_LIMIT
        )));
    }
    let cases =
        assumptions::verify_grid(args.seed, args.max_arms, args.max_k, args.vectors).map_err(Failure::runtime)?;
    let mut failed = 0;
    for reward in dart_core::JointReward::ALL {
        let of_reward: Vec<&GridCase> = cases.iter().filter(|c| c.reward == reward).collect();
        let ordering = of_reward.iter().filter(|c| c.ordering_holds).count();
        let monotone = of_reward.iter().filter(|c| c.violation.is_none()).count();
        let ok = ordering == of_reward.len() && monotone == of_reward.len();
        println!(
            "{} {:<10} ordering {}/{}  monotonicity {}/{}",
            if ok { "PASS" } else { "FAIL" },
            reward.name(),
            ordering,
            of_reward.len(),
            monotone,
            of_reward.len()
        );
        for case in of_reward.iter().filter(|c| !c.passed()) {
            failed += 1;
            println!("  N={} K={} means={:?} violation={:?}", case.n_arms, case.k, case.means, case.violation);
        }
    }
    if failed > 0 {
        return Err(Failure::Runtime(format!("{failed} instances failed")));
    }
    Ok(())
}
