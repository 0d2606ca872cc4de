use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::trajectory::{Trajectory, OBS_DIM};
use crate::mmd::{DistanceBatch, KernelSpec};
use crate::nn::Mlp;
use crate::Result;

/// Distance annotations of a batch against a non-empty memory.
#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicAnnotation {
    pub kernel: KernelSpec,
    /// `MMD²(τ, M)` per trajectory under the configured estimator.
    pub traj_distances: Vec<f64>,
    /// `√ MMD²_biased(τ, M)` per trajectory, the scale used by σ scaling.
    pub asm_distances: Vec<f64>,
    /// `D(x, M)` per occurrence, flattened in batch order.
    pub distances: DistanceBatch,
}

/// The N trajectories of one iteration and everything derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct OnPolicyBatch {
    pub trajectories: Vec<Trajectory>,
    pub values: Vec<Vec<f64>>,
    /// `V(s_T)` for truncated episodes, 0 for terminal ones.
    pub bootstrap: Vec<f64>,
    pub intrinsic: Option<IntrinsicAnnotation>,
    pub r_i: Vec<Vec<f64>>,
    pub q_e: Vec<Vec<f64>>,
    pub q_i: Vec<Vec<f64>>,
    pub a_e: Vec<Vec<f64>>,
    pub a_i: Vec<Vec<f64>>,
}

impl OnPolicyBatch {
    pub fn new(trajectories: Vec<Trajectory>) -> Self {
        let zeros: Vec<Vec<f64>> = trajectories.iter().map(|t| vec![0.0; t.len()]).collect();
        let n = trajectories.len();
        Self {
            trajectories,
            values: zeros.clone(),
            bootstrap: vec![0.0; n],
            intrinsic: None,
            r_i: zeros.clone(),
            q_e: zeros.clone(),
            q_i: zeros.clone(),
            a_e: zeros.clone(),
            a_i: zeros,
        }
    }

    pub fn sample_count(&self) -> usize {
        self.trajectories.iter().map(Trajectory::len).sum()
    }

    /// Fills value estimates, evaluating each distinct observation once.
    pub fn annotate_values(&mut self, value_net: &Mlp) -> Result<()> {
        let mut obs: Vec<[f64; OBS_DIM]> = Vec::with_capacity(self.sample_count() + self.trajectories.len());
        for t in &self.trajectories {
            obs.extend(t.steps.iter().map(|s| s.obs));
            obs.push(t.final_obs);
        }
        let (unique, index) = unique_observations(&obs);
        let out = value_net.forward_batch(&unique, unique.len() / OBS_DIM)?;
        let v = out.output();
        let mut k = 0;
        for (ti, t) in self.trajectories.iter().enumerate() {
            for si in 0..t.len() {
                self.values[ti][si] = v[index[k]];
                k += 1;
            }
            self.bootstrap[ti] = if t.truncated { v[index[k]] } else { 0.0 };
            k += 1;
        }
        Ok(())
    }

    pub fn mean_extrinsic_return(&self) -> f64 {
        if self.trajectories.is_empty() {
            return 0.0;
        }
        self.trajectories.iter().map(Trajectory::extrinsic_return).sum::<f64>() / self.trajectories.len() as f64
    }

    /// Fraction of episodes that ended on `goal`.
    pub fn success_rate(&self, goal: u32) -> f64 {
        if self.trajectories.is_empty() {
            return 0.0;
        }
        let hits = self.trajectories.iter().filter(|t| t.episode_goal == Some(goal)).count();
        hits as f64 / self.trajectories.len() as f64
    }

    pub fn mean_raw_mmd(&self) -> Option<f64> {
        let a = self.intrinsic.as_ref()?;
        Some(a.traj_distances.iter().sum::<f64>() / a.traj_distances.len().max(1) as f64)
    }
}

/// Deduplicates observations by bit pattern. Returns the flattened distinct
/// rows in first-seen order and the row index of every input.
pub fn unique_observations(obs: &[[f64; OBS_DIM]]) -> (Vec<f64>, Vec<usize>) {
    let mut map: BTreeMap<[u64; OBS_DIM], usize> = BTreeMap::new();
    let mut flat = Vec::new();
    let mut index = Vec::with_capacity(obs.len());
    for o in obs {
        let key = o.map(f64::to_bits);
        let next = map.len();
        let id = *map.entry(key).or_insert_with(|| {
            flat.extend_from_slice(o);
            next
        });
        index.push(id);
    }
    (flat, index)
}
