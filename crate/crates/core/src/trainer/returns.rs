use alloc::vec;
use alloc::vec::Vec;

use super::batch::OnPolicyBatch;
use crate::{Error, Result};

/// `Q_t = Σ_{l ≥ 0} γ^l r_{t+l}` to the end of the episode.
pub fn discounted_returns(rewards: &[f64], gamma: f64) -> Vec<f64> {
    let mut out = vec![0.0; rewards.len()];
    let mut acc = 0.0;
    for t in (0..rewards.len()).rev() {
        acc = rewards[t] + gamma * acc;
        out[t] = acc;
    }
    out
}

/// Generalized advantage estimate. `bootstrap` is the value of the state
/// after the last step (0 for terminal episodes).
pub fn gae(rewards: &[f64], values: &[f64], bootstrap: f64, gamma: f64, lambda: f64) -> Result<Vec<f64>> {
    if rewards.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: rewards.len(), got: values.len() });
    }
    let n = rewards.len();
    let mut out = vec![0.0; n];
    let mut acc = 0.0;
    for t in (0..n).rev() {
        let next_v = if t + 1 < n { values[t + 1] } else { bootstrap };
        let td = rewards[t] + gamma * next_v - values[t];
        acc = td + gamma * lambda * acc;
        out[t] = acc;
    }
    Ok(out)
}

/// Fills `q_e` and `q_i` for every episode.
pub fn compute_returns(batch: &mut OnPolicyBatch, gamma: f64) {
    for (ti, t) in batch.trajectories.iter().enumerate() {
        let re: Vec<f64> = t.steps.iter().map(|s| s.reward).collect();
        batch.q_e[ti] = discounted_returns(&re, gamma);
        batch.q_i[ti] = discounted_returns(&batch.r_i[ti], gamma);
    }
}

/// Fills `a_e` by GAE over the extrinsic stream and sets `a_i = q_i`.
/// Requires value estimates and returns.
pub fn compute_advantages(batch: &mut OnPolicyBatch, gamma: f64, lambda: f64) -> Result<()> {
    for (ti, t) in batch.trajectories.iter().enumerate() {
        let re: Vec<f64> = t.steps.iter().map(|s| s.reward).collect();
        batch.a_e[ti] = gae(&re, &batch.values[ti], batch.bootstrap[ti], gamma, lambda)?;
        batch.a_i[ti] = batch.q_i[ti].clone();
    }
    Ok(())
}
