use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::action::binomial;
use crate::baselines::{EpsilonSchedule, ACTION_TABLE_LIMIT};
use crate::dart::DartParams;
use crate::env::Environment;
use crate::error::{BanditError, Result};
use crate::reward::JointReward;
use crate::rng::{self, Purpose};
use crate::trace;

/// One replicated experiment: an environment, the algorithms to compare on
/// it, and how many seeded runs to perform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Basename of the output files.
    pub name: String,
    pub n_arms: usize,
    pub k: usize,
    pub horizon: u64,
    #[serde(default = "default_replications")]
    pub replications: u64,
    #[serde(default)]
    pub master_seed: u64,
    /// Spacing of the recorded checkpoints; defaults to `max(1, T / 500)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoint_stride: Option<u64>,
    pub environment: EnvironmentSpec,
    #[serde(rename = "algorithm")]
    pub algorithms: Vec<AlgorithmSpec>,
}

fn default_replications() -> u64 {
    25
}

/// How the arms of an experiment are generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvironmentSpec {
    /// Independent Bernoulli arms. Without explicit `means`, they are drawn
    /// once from Uniform[0, 1] using the master seed and kept for every run.
    Bernoulli {
        reward: JointReward,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        means: Option<Vec<f64>>,
    },
    /// The correlated Gaussian construction with sum reward. `epsilon`
    /// defaults to `(sigma / 2) * sqrt(N K / (2 T))` and `optimal` to the
    /// first K arms.
    CorrelatedGaussian {
        sigma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        epsilon: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        optimal: Option<Vec<usize>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    Dart,
    DartAnytime,
    CombUcb,
    EpsilonGreedy,
    Oracle,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 5] = [
        Self::Dart,
        Self::DartAnytime,
        Self::CombUcb,
        Self::EpsilonGreedy,
        Self::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Dart => "dart",
            Self::DartAnytime => "dart_anytime",
            Self::CombUcb => "comb_ucb",
            Self::EpsilonGreedy => "epsilon_greedy",
            Self::Oracle => "oracle",
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = BanditError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| BanditError::Config(format!("unknown algorithm `{s}`")))
    }
}

/// One `[[algorithm]]` entry. Only the keys relevant to `kind` may be set:
/// the DART constants for `dart` and `dart_anytime`, `c` or `epsilon` for
/// `epsilon_greedy`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub kind: AlgorithmKind,
    /// Name used in the output files; defaults to the kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule_constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

/// Exploration constant used when `epsilon_greedy` gives neither `c` nor
/// `epsilon`.
pub const DEFAULT_EPSILON_C: f64 = 5.0;

/// A validated algorithm entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    Dart(DartParams),
    DartAnytime(DartParams),
    CombUcb,
    EpsilonGreedy(EpsilonSchedule),
    Oracle,
}

impl AlgorithmSpec {
    /// An entry with every optional key unset.
    pub fn new(kind: AlgorithmKind) -> Self {
        Self {
            kind,
            label: None,
            schedule_constant: None,
            lambda_constant: None,
            lambda: None,
            c: None,
            epsilon: None,
        }
    }

    /// A `dart` or `dart_anytime` entry spelling out `params`.
    pub fn with_params(kind: AlgorithmKind, params: DartParams) -> Self {
        Self {
            schedule_constant: Some(params.schedule_constant),
            lambda_constant: Some(params.lambda_constant),
            lambda: params.lambda_override,
            ..Self::new(kind)
        }
    }

    pub fn labeled(mut self, label: &str) -> Self {
        self.label = Some(label.to_owned());
        self
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(self.kind.name())
    }

    /// Checks that only applicable keys are set and builds the algorithm.
    pub fn resolve(&self) -> Result<Algorithm> {
        let set: [(&str, bool); 5] = [
            ("schedule_constant", self.schedule_constant.is_some()),
            ("lambda_constant", self.lambda_constant.is_some()),
            ("lambda", self.lambda.is_some()),
            ("c", self.c.is_some()),
            ("epsilon", self.epsilon.is_some()),
        ];
        let allowed: &[&str] = match self.kind {
            AlgorithmKind::Dart | AlgorithmKind::DartAnytime => {
                &["schedule_constant", "lambda_constant", "lambda"]
            }
            AlgorithmKind::EpsilonGreedy => &["c", "epsilon"],
            AlgorithmKind::CombUcb | AlgorithmKind::Oracle => &[],
        };
        if let Some((key, _)) = set.iter().find(|(key, on)| *on && !allowed.contains(key)) {
            return Err(BanditError::Config(format!(
                "key `{key}` does not apply to algorithm `{}`",
                self.kind
            )));
        }
        Ok(match self.kind {
            AlgorithmKind::Dart | AlgorithmKind::DartAnytime => {
                let defaults = DartParams::default();
                let params = DartParams {
                    schedule_constant: self.schedule_constant.unwrap_or(defaults.schedule_constant),
                    lambda_constant: self.lambda_constant.unwrap_or(defaults.lambda_constant),
                    lambda_override: self.lambda,
                };
                params.validate().map_err(BanditError::Config)?;
                if self.kind == AlgorithmKind::Dart {
                    Algorithm::Dart(params)
                } else {
                    Algorithm::DartAnytime(params)
                }
            }
            AlgorithmKind::EpsilonGreedy => {
                let schedule = match (self.c, self.epsilon) {
                    (Some(_), Some(_)) => {
                        return Err(BanditError::Config(
                            "set either `c` or `epsilon` for epsilon_greedy, not both".into(),
                        ))
                    }
                    (Some(c), None) => EpsilonSchedule::InverseTime { c },
                    (None, Some(epsilon)) => EpsilonSchedule::Constant { epsilon },
                    (None, None) => EpsilonSchedule::InverseTime { c: DEFAULT_EPSILON_C },
                };
                let ok = match schedule {
                    EpsilonSchedule::InverseTime { c } => c.is_finite() && c >= 0.0,
                    EpsilonSchedule::Constant { epsilon } => (0.0..=1.0).contains(&epsilon),
                };
                if !ok {
                    return Err(BanditError::Config(format!(
                        "invalid epsilon schedule {schedule:?}"
                    )));
                }
                Algorithm::EpsilonGreedy(schedule)
            }
            AlgorithmKind::CombUcb => Algorithm::CombUcb,
            AlgorithmKind::Oracle => Algorithm::Oracle,
        })
    }
}

impl FromStr for ExperimentConfig {
    type Err = BanditError;

    /// Parses TOML. Syntax errors, type errors and unknown keys are
    /// reported with their line and column.
    fn from_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| BanditError::Config(e.to_string().trim_end().to_owned()))
    }
}

impl ExperimentConfig {
    /// Reads and validates a config file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| BanditError::Io {
            path: path.to_owned(),
            message: e.to_string(),
        })?;
        let config: Self = text
            .parse()
            .map_err(|e: BanditError| BanditError::Config(format!("{}: {}", path.display(), strip(e))))?;
        config
            .validate()
            .map_err(|e| BanditError::Config(format!("{}: {}", path.display(), strip(e))))?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("experiment configs always serialize")
    }

    pub fn stride(&self) -> u64 {
        self.checkpoint_stride
            .unwrap_or_else(|| trace::default_stride(self.horizon))
    }

    pub fn checkpoints(&self) -> Vec<u64> {
        trace::checkpoints(self.horizon, self.stride())
    }

    /// Sets the stride so that roughly `count` checkpoints are recorded.
    pub fn set_checkpoint_count(&mut self, count: u64) {
        self.checkpoint_stride = Some((self.horizon / count.max(1)).max(1));
    }

    /// Checks every field. Errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        let field = |name: &str, msg: String| BanditError::Config(format!("field `{name}`: {msg}"));
        if self.name.is_empty() || !self.name.chars().all(is_name_char) {
            return Err(field(
                "name",
                format!("`{}` must be non-empty and use only letters, digits, `-`, `_` or `.`", self.name),
            ));
        }
        if self.replications == 0 {
            return Err(field("replications", "must be at least 1".into()));
        }
        if self.checkpoint_stride == Some(0) {
            return Err(field("checkpoint_stride", "must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(field("algorithm", "at least one [[algorithm]] entry is required".into()));
        }
        if self.n_arms < 2 {
            return Err(field("n_arms", format!("need at least 2 arms, got {}", self.n_arms)));
        }
        if self.k == 0 || self.k >= self.n_arms {
            return Err(field("k", format!("need 1 <= k < n_arms = {}, got {}", self.n_arms, self.k)));
        }
        if self.horizon == 0 {
            return Err(field("horizon", "must be at least 1".into()));
        }
        let env = self.environment().map_err(|e| field("environment", strip(e)))?;
        let mut labels = Vec::new();
        for (i, spec) in self.algorithms.iter().enumerate() {
            let at = format!("algorithm[{i}]");
            spec.resolve().map_err(|e| field(&at, strip(e)))?;
            let label = spec.label();
            if label.is_empty() || !label.chars().all(is_name_char) {
                return Err(field(&at, format!("label `{label}` must use only letters, digits, `-`, `_` or `.`")));
            }
            if labels.contains(&label) {
                return Err(field(&at, format!("duplicate label `{label}`; set `label` to tell entries apart")));
            }
            labels.push(label);
            if matches!(spec.kind, AlgorithmKind::CombUcb | AlgorithmKind::EpsilonGreedy) {
                let count = binomial(self.n_arms, self.k);
                if count > ACTION_TABLE_LIMIT {
                    return Err(field(&at, strip(BanditError::TooManyActions { count, limit: ACTION_TABLE_LIMIT })));
                }
            }
            if spec.kind == AlgorithmKind::CombUcb && !env.has_unit_rewards() {
                return Err(field(&at, "comb_ucb needs rewards in [0, 1]".into()));
            }
        }
        Ok(())
    }

    /// Builds the environment shared by every run.
    pub fn environment(&self) -> Result<Environment> {
        if self.horizon == 0 {
            return Err(BanditError::InvalidDims {
                n_arms: self.n_arms,
                k: self.k,
                horizon: 0,
            });
        }
        match &self.environment {
            EnvironmentSpec::Bernoulli { reward, means } => {
                let means = match means {
                    Some(means) => {
                        if means.len() != self.n_arms {
                            return Err(BanditError::InvalidEnvironment(format!(
                                "{} means given for n_arms = {}",
                                means.len(),
                                self.n_arms
                            )));
                        }
                        means.clone()
                    }
                    None => draw_uniform_means(self.n_arms, self.master_seed),
                };
                Environment::bernoulli(means, self.k, *reward)
            }
            EnvironmentSpec::CorrelatedGaussian { sigma, epsilon, optimal } => {
                let optimal = optimal.clone().unwrap_or_else(|| (0..self.k).collect());
                if optimal.len() != self.k {
                    return Err(BanditError::InvalidEnvironment(format!(
                        "optimal set has {} arms, expected k = {}",
                        optimal.len(),
                        self.k
                    )));
                }
                let epsilon = epsilon.unwrap_or_else(|| {
                    Environment::lower_bound_epsilon(self.n_arms, self.k, self.horizon, *sigma)
                });
                Environment::correlated_gaussian(self.n_arms, &optimal, epsilon, *sigma)
            }
        }
    }

    /// Validated algorithms with their output labels, in config order.
    pub fn resolved_algorithms(&self) -> Result<Vec<(String, Algorithm)>> {
        self.algorithms
            .iter()
            .map(|spec| Ok((spec.label().to_owned(), spec.resolve()?)))
            .collect()
    }

    /// Keeps only the named algorithms, in the given order. A name matches
    /// an entry's label; a bare kind with no matching entry is added with
    /// default settings.
    pub fn select_algorithms(&mut self, names: &[&str]) -> Result<()> {
        let mut selected = Vec::with_capacity(names.len());
        for &name in names {
            match self.algorithms.iter().find(|a| a.label() == name) {
                Some(spec) => selected.push(spec.clone()),
                None => selected.push(AlgorithmSpec::new(name.parse()?)),
            }
        }
        self.algorithms = selected;
        Ok(())
    }
}

/// Arm means drawn once from Uniform[0, 1] for `master_seed`.
pub fn draw_uniform_means(n_arms: usize, master_seed: u64) -> Vec<f64> {
    use rand::Rng;
    let mut rng = rng::stream(master_seed, Purpose::ArmMeans);
    (0..n_arms).map(|_| rng.random::<f64>()).collect()
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.')
}

/// The message of a config error without the variant prefix.
fn strip(e: BanditError) -> String {
    match e {
        BanditError::Config(msg) => msg,
        e => e.to_string(),
    }
}
