use serde::{Deserialize, Serialize};

/// Constants of DART's confidence schedule.
///
/// With `c_n = schedule_constant` and `c_l = lambda_constant`:
///
/// * the confidence width `delta` starts at 1 and halves once the epoch
///   counter reaches `c_n * ln(N T) / delta^2`;
/// * exploration stops once `delta < lambda`, where
///   `lambda = sqrt(c_l * N * K * ln(2 N T) / T)` unless overridden.
///
/// [`DartParams::default`] uses the constants from the regret analysis
/// (288 and 720). They are conservative: `lambda` exceeds 1 for every
/// horizon below roughly `720 N K ln(2NT)`, in which case DART commits
/// after a single epoch. [`DartParams::calibrated`] keeps the same shape
/// with a Hoeffding-sized width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DartParams {
    #[serde(default = "DartParams::analysis_schedule_constant")]
    pub schedule_constant: f64,
    #[serde(default = "DartParams::analysis_lambda_constant")]
    pub lambda_constant: f64,
    /// Fixed resolution floor, replacing the formula (for example to apply a
    /// known bi-Lipschitz factor).
    #[serde(default, rename = "lambda", skip_serializing_if = "Option::is_none")]
    pub lambda_override: Option<f64>,
}

impl Default for DartParams {
    fn default() -> Self {
        Self {
            schedule_constant: Self::ANALYSIS_SCHEDULE,
            lambda_constant: Self::ANALYSIS_LAMBDA,
            lambda_override: None,
        }
    }
}

impl DartParams {
    pub const ANALYSIS_SCHEDULE: f64 = 288.0;
    pub const ANALYSIS_LAMBDA: f64 = 720.0;

    fn analysis_schedule_constant() -> f64 {
        Self::ANALYSIS_SCHEDULE
    }

    fn analysis_lambda_constant() -> f64 {
        Self::ANALYSIS_LAMBDA
    }

    /// Both analysis constants multiplied by `scale`.
    pub fn scaled(scale: f64) -> Self {
        Self {
            schedule_constant: Self::ANALYSIS_SCHEDULE * scale,
            lambda_constant: Self::ANALYSIS_LAMBDA * scale,
            lambda_override: None,
        }
    }

    /// Schedule constant 2 (lambda constant 5).
    ///
    /// With `delta^2 = 2 ln(NT) / e`, Hoeffding bounds the chance that an
    /// arm's estimate after `e` epochs strays by more than `delta / 2` by
    /// `2 / (NT)`.
    pub fn calibrated() -> Self {
        Self::scaled(1.0 / 144.0)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda_override = Some(lambda);
        self
    }

    /// The resolution floor for `n_arms` arms, `k` slots and horizon `horizon`.
    pub fn lambda(&self, n_arms: usize, k: usize, horizon: u64) -> f64 {
        self.lambda_override.unwrap_or_else(|| {
            let (n, k, t) = (n_arms as f64, k as f64, horizon as f64);
            (self.lambda_constant * n * k * (2.0 * n * t).ln() / t).sqrt()
        })
    }

    /// Number of epochs after which `delta` halves.
    pub fn epoch_threshold(&self, n_arms: usize, horizon: u64, delta: f64) -> f64 {
        self.schedule_constant * (n_arms as f64 * horizon as f64).ln() / (delta * delta)
    }

    pub(crate) fn validate(&self) -> Result<(), String> {
        if !(self.schedule_constant.is_finite() && self.schedule_constant > 0.0) {
            return Err(format!("schedule_constant must be > 0, got {}", self.schedule_constant));
        }
        if !(self.lambda_constant.is_finite() && self.lambda_constant > 0.0) {
            return Err(format!("lambda_constant must be > 0, got {}", self.lambda_constant));
        }
        if let Some(l) = self.lambda_override {
            if !(l.is_finite() && l >= 0.0) {
                return Err(format!("lambda must be finite and >= 0, got {l}"));
            }
        }
        Ok(())
    }
}
