use crate::env::FeatureMode;
use crate::mmd::{Estimator, KernelFamily};
use crate::{Error, Result};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Adaptive scaling of the Lagrange multiplier σ.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(default, deny_unknown_fields))]
pub struct SigmaConfig {
    pub init: f64,
    pub up_factor: f64,
    pub down_factor: f64,
    pub same_goal_factor: f64,
    /// Fixed threshold ε. When absent, ε is `epsilon_scale` times the median
    /// trajectory-to-memory MMD of the first batch of each phase.
    pub epsilon: Option<f64>,
    pub epsilon_scale: f64,
    /// Upper limit on σ; unbounded when absent.
    pub max: Option<f64>,
}

impl Default for SigmaConfig {
    fn default() -> Self {
        Self { init: 0.5, up_factor: 1.05, down_factor: 0.98, same_goal_factor: 1.2, epsilon: None, epsilon_scale: 0.1, max: None }
    }
}

/// How trajectory distances are turned into intrinsic rewards.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(default, deny_unknown_fields))]
pub struct IntrinsicConfig {
    pub delta: f64,
    pub kernel: KernelFamily,
    /// Fixed bandwidth; the median heuristic over `B ∪ M` is used when absent.
    pub bandwidth: Option<f64>,
    pub estimator: Estimator,
    pub features: FeatureMode,
}

impl Default for IntrinsicConfig {
    fn default() -> Self {
        Self {
            delta: 0.7,
            kernel: KernelFamily::Gaussian,
            bandwidth: None,
            estimator: Estimator::Biased,
            features: FeatureMode::Coords,
        }
    }
}

/// A goal counts as converged when at least `threshold` of the last
/// `window` episodes ended on it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(default, deny_unknown_fields))]
pub struct ConvergenceConfig {
    pub window: usize,
    pub threshold: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self { window: 50, threshold: 0.9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(default, deny_unknown_fields))]
pub struct TrainConfig {
    pub gamma: f64,
    pub gae_lambda: f64,
    pub clip_epsilon: f64,
    pub episodes_per_iter: usize,
    pub epochs_per_iter: usize,
    /// Overrides the environment's step budget when set.
    pub max_episode_len: Option<u32>,
    pub policy_lr: f64,
    pub value_lr: f64,
    pub entropy_coef: f64,
    pub seed: u64,
    /// Maximum number of outer phases G.
    pub goal_count: usize,
    /// Total iteration budget across all phases.
    pub iterations: usize,
    /// Trajectories kept per memory key.
    pub memory_capacity: usize,
    /// Disables the distance reward entirely (vanilla and independent baselines).
    pub intrinsic_enabled: bool,
    pub intrinsic: IntrinsicConfig,
    pub sigma: SigmaConfig,
    pub convergence: ConvergenceConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            gamma: 0.99,
            gae_lambda: 0.95,
            clip_epsilon: 0.2,
            episodes_per_iter: 8,
            epochs_per_iter: 65,
            max_episode_len: None,
            policy_lr: 1.8e-5,
            value_lr: 1.2e-4,
            entropy_coef: 0.0,
            seed: 0,
            goal_count: 2,
            iterations: 1000,
            memory_capacity: 5,
            intrinsic_enabled: true,
            intrinsic: IntrinsicConfig::default(),
            sigma: SigmaConfig::default(),
            convergence: ConvergenceConfig::default(),
        }
    }
}

impl TrainConfig {
    /// Same hyperparameters with the distance reward switched off and one phase.
    pub fn vanilla(&self) -> Self {
        Self { intrinsic_enabled: false, goal_count: 1, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::invalid(m));
        if !(0.0..1.0).contains(&self.gamma) {
            return bad("gamma must be in [0, 1)");
        }
        if !(0.0..=1.0).contains(&self.gae_lambda) {
            return bad("gae_lambda must be in [0, 1]");
        }
        if !(self.clip_epsilon > 0.0 && self.clip_epsilon < 1.0) {
            return bad("clip_epsilon must be in (0, 1)");
        }
        if self.episodes_per_iter == 0 || self.goal_count == 0 || self.memory_capacity == 0 {
            return bad("episodes_per_iter, goal_count and memory_capacity must be positive");
        }
        if !(self.policy_lr > 0.0 && self.value_lr > 0.0) {
            return bad("learning rates must be positive");
        }
        if !(self.entropy_coef >= 0.0) {
            return bad("entropy_coef must be non-negative");
        }
        if let Some(0) = self.max_episode_len {
            return bad("max_episode_len must be positive");
        }
        let s = &self.sigma;
        if !(s.init > 0.0 && s.up_factor > 0.0 && s.down_factor > 0.0 && s.same_goal_factor > 0.0) {
            return bad("sigma and its factors must be positive");
        }
        if matches!(s.max, Some(m) if !(m >= s.init)) {
            return bad("sigma max must be at least the initial sigma");
        }
        if matches!(s.epsilon, Some(e) if !(e > 0.0)) || !(s.epsilon_scale > 0.0) {
            return bad("epsilon must be positive");
        }
        if matches!(self.intrinsic.bandwidth, Some(h) if !(h > 0.0)) {
            return bad("bandwidth must be positive");
        }
        if !self.intrinsic.delta.is_finite() {
            return bad("delta must be finite");
        }
        let c = &self.convergence;
        if c.window == 0 || !(c.threshold > 0.0 && c.threshold <= 1.0) {
            return bad("convergence window must be positive and threshold in (0, 1]");
        }
        Ok(())
    }
}
