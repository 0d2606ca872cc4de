use alloc::vec;
use alloc::vec::Vec;

use super::batch::{unique_observations, OnPolicyBatch};
use super::config::TrainConfig;
use super::trajectory::OBS_DIM;
use crate::nn::{log_softmax, Adam, AdamConfig, CategoricalPolicy, Mlp, MlpGrads, HIDDEN};
use crate::rng::{stream, TAG_INIT_POLICY, TAG_INIT_VALUE};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpoSample {
    pub obs: [f64; OBS_DIM],
    pub action: usize,
    pub old_log_prob: f64,
    /// Total advantage `A_e + σ A_i`.
    pub advantage: f64,
    pub value_target: f64,
}

/// Samples grouped by distinct observation so each network pass touches
/// every state once.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub samples: Vec<PpoSample>,
    pub unique_obs: Vec<f64>,
    pub index: Vec<usize>,
}

impl SampleSet {
    pub fn new(samples: Vec<PpoSample>) -> Self {
        let obs: Vec<[f64; OBS_DIM]> = samples.iter().map(|s| s.obs).collect();
        let (unique_obs, index) = unique_observations(&obs);
        Self { samples, unique_obs, index }
    }

    /// One sample per step with advantage `A_e + σ A_i` and target `Q_e`.
    pub fn from_batch(batch: &OnPolicyBatch, sigma: f64) -> Self {
        let mut samples = Vec::with_capacity(batch.sample_count());
        for (ti, t) in batch.trajectories.iter().enumerate() {
            for (si, s) in t.steps.iter().enumerate() {
                samples.push(PpoSample {
                    obs: s.obs,
                    action: s.action,
                    old_log_prob: s.log_prob,
                    advantage: batch.a_e[ti][si] + sigma * batch.a_i[ti][si],
                    value_target: batch.q_e[ti][si],
                });
            }
        }
        Self::new(samples)
    }

    pub fn rows(&self) -> usize {
        self.unique_obs.len() / OBS_DIM
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SurrogateStats {
    pub objective: f64,
    pub entropy: f64,
    pub clip_fraction: f64,
    pub approx_kl: f64,
}

/// Gradient (ascent direction) of
/// `Σ_i w_i [min(r_i A_i, clip(r_i, 1±ε) A_i) + c·H(π(·|s_i))]`.
pub fn surrogate_gradient(
    policy: &CategoricalPolicy,
    set: &SampleSet,
    weights: &[f64],
    clip: f64,
    entropy_coef: f64,
) -> Result<(MlpGrads, SurrogateStats)> {
    if weights.len() != set.len() {
        return Err(Error::DimensionMismatch { expected: set.len(), got: weights.len() });
    }
    let na = policy.actions();
    let rows = set.rows();
    let trace = policy.net.forward_batch(&set.unique_obs, rows)?;
    let logits = trace.output();
    let mut lps = vec![0.0; rows * na];
    let mut ents = vec![0.0; rows];
    for r in 0..rows {
        let lp = log_softmax(&logits[r * na..(r + 1) * na]);
        ents[r] = -lp.iter().map(|&l| libm::exp(l) * l).sum::<f64>();
        lps[r * na..(r + 1) * na].copy_from_slice(&lp);
    }
    let mut up = vec![0.0; rows * na];
    let mut stats = SurrogateStats::default();
    let mut clipped_weight = 0.0;
    let mut total_weight = 0.0;
    for ((s, &u), &w) in set.samples.iter().zip(&set.index).zip(weights) {
        if s.action >= na {
            return Err(Error::invalid("action index out of range"));
        }
        let lp = &lps[u * na..(u + 1) * na];
        let ratio = libm::exp(lp[s.action] - s.old_log_prob);
        let adv = s.advantage;
        let clipped = ratio.clamp(1.0 - clip, 1.0 + clip);
        let saturated = (adv > 0.0 && ratio > 1.0 + clip) || (adv < 0.0 && ratio < 1.0 - clip);
        stats.objective += w * (ratio * adv).min(clipped * adv);
        stats.entropy += w * ents[u];
        stats.approx_kl += w * (s.old_log_prob - lp[s.action]);
        total_weight += w;
        let g = &mut up[u * na..(u + 1) * na];
        if saturated {
            clipped_weight += w;
        } else {
            let scale = w * adv * ratio;
            for (j, gj) in g.iter_mut().enumerate() {
                let ind = if j == s.action { 1.0 } else { 0.0 };
                *gj += scale * (ind - libm::exp(lp[j]));
            }
        }
        if entropy_coef != 0.0 {
            let h = ents[u];
            for (j, gj) in g.iter_mut().enumerate() {
                let p = libm::exp(lp[j]);
                *gj -= w * entropy_coef * p * (lp[j] + h);
            }
        }
    }
    stats.objective += entropy_coef * stats.entropy;
    if total_weight != 0.0 {
        stats.clip_fraction = clipped_weight / total_weight;
        stats.entropy /= total_weight;
        stats.approx_kl /= total_weight;
    }
    if !stats.objective.is_finite() {
        return Err(Error::NonFinite("policy objective".into()));
    }
    let grads = policy.net.backward_batch(&trace, &up)?;
    Ok((grads, stats))
}

/// Gradient (descent direction) of `Σ_i w_i ½ (V(s_i) − target_i)²` and the loss.
pub fn value_gradient(value: &Mlp, set: &SampleSet, weights: &[f64]) -> Result<(MlpGrads, f64)> {
    if weights.len() != set.len() {
        return Err(Error::DimensionMismatch { expected: set.len(), got: weights.len() });
    }
    let trace = value.forward_batch(&set.unique_obs, set.rows())?;
    let v = trace.output();
    let mut up = vec![0.0; set.rows()];
    let mut loss = 0.0;
    for ((s, &u), &w) in set.samples.iter().zip(&set.index).zip(weights) {
        let e = v[u] - s.value_target;
        loss += 0.5 * w * e * e;
        up[u] += w * e;
    }
    if !loss.is_finite() {
        return Err(Error::NonFinite("value loss".into()));
    }
    Ok((value.backward_batch(&trace, &up)?, loss))
}

/// Policy and value networks with their optimizer states.
#[derive(Debug, Clone, PartialEq)]
pub struct Learner {
    pub policy: CategoricalPolicy,
    pub value: Mlp,
    pub policy_opt: Adam,
    pub value_opt: Adam,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UpdateStats {
    /// Surrogate objective in the first epoch (ratio 1).
    pub policy_objective: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub approx_kl: f64,
    pub clip_fraction: f64,
}

impl Learner {
    /// Networks for learner `index`, initialized from seed-derived streams.
    pub fn new(obs_dim: usize, actions: usize, cfg: &TrainConfig, index: u64) -> Self {
        let mut prng = stream(cfg.seed, &[TAG_INIT_POLICY, index]);
        let mut vrng = stream(cfg.seed, &[TAG_INIT_VALUE, index]);
        let policy = CategoricalPolicy::init(obs_dim, actions, &mut prng);
        let value = Mlp::tanh_mlp(obs_dim, &[HIDDEN, HIDDEN], 1, core::f64::consts::SQRT_2, 1.0, &mut vrng);
        let policy_opt = Adam::new(AdamConfig::with_lr(cfg.policy_lr), policy.net.param_count());
        let value_opt = Adam::new(AdamConfig::with_lr(cfg.value_lr), value.param_count());
        Self { policy, value, policy_opt, value_opt }
    }

    /// FNV-1a hash over the bit patterns of all network parameters.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for v in self.policy.net.flatten().into_iter().chain(self.value.flatten()) {
            for b in v.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        h
    }

    /// Full-batch clipped-surrogate update on `A_e + σ A_i` for
    /// `epochs_per_iter` epochs, then the same number of value epochs.
    pub fn ppo_update(&mut self, batch: &OnPolicyBatch, sigma: f64, cfg: &TrainConfig) -> Result<UpdateStats> {
        let set = SampleSet::from_batch(batch, sigma);
        let mut stats = UpdateStats::default();
        if set.is_empty() {
            return Ok(stats);
        }
        let w = vec![1.0 / set.len() as f64; set.len()];
        let mut params = self.policy.net.flatten();
        for epoch in 0..cfg.epochs_per_iter {
            let (g, s) = surrogate_gradient(&self.policy, &set, &w, cfg.clip_epsilon, cfg.entropy_coef)?;
            if epoch == 0 {
                stats.policy_objective = s.objective;
            }
            stats.entropy = s.entropy;
            stats.approx_kl = s.approx_kl;
            stats.clip_fraction = s.clip_fraction;
            let descent: Vec<f64> = g.flatten().into_iter().map(|x| -x).collect();
            self.policy_opt.step(&mut params, &descent)?;
            self.policy.net.set_flat(&params)?;
        }
        let mut vparams = self.value.flatten();
        for epoch in 0..cfg.epochs_per_iter {
            let (g, loss) = value_gradient(&self.value, &set, &w)?;
            if epoch == 0 {
                stats.value_loss = loss;
            }
            self.value_opt.step(&mut vparams, &g.flatten())?;
            self.value.set_flat(&vparams)?;
        }
        Ok(stats)
    }
}
