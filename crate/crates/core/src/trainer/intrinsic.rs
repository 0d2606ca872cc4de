use alloc::vec::Vec;

use super::batch::{IntrinsicAnnotation, OnPolicyBatch};
use super::config::IntrinsicConfig;
use super::trajectory::{FeatureMap, Trajectory};
use crate::mmd::{
    intrinsic_reward, median_heuristic, normalize_distances, pair_distances, traj_distance_to_memory,
    EmpiricalMeasure, Estimator, KernelSpec, ReferenceSet, TrajectoryFeatures,
};
use crate::Result;

/// Annotates `batch` with distances to `memory` and the clipped intrinsic
/// reward. An empty memory leaves every `r_i` at 0 and no annotation.
pub fn annotate_intrinsic(
    batch: &mut OnPolicyBatch,
    memory: &[&Trajectory],
    fmap: FeatureMap,
    cfg: &IntrinsicConfig,
) -> Result<()> {
    for r in batch.r_i.iter_mut() {
        r.iter_mut().for_each(|x| *x = 0.0);
    }
    batch.intrinsic = None;
    let memory: Vec<&Trajectory> = memory.iter().copied().filter(|t| !t.is_empty()).collect();
    if memory.is_empty() || batch.sample_count() == 0 {
        return Ok(());
    }
    let feats: Vec<TrajectoryFeatures> = batch.trajectories.iter().map(|t| fmap.trajectory(t)).collect();
    let mem_feats: Vec<TrajectoryFeatures> = memory.iter().map(|t| fmap.trajectory(t)).collect();
    let bandwidth = match cfg.bandwidth {
        Some(h) => h,
        None => median_heuristic(cfg.kernel, feats.iter().chain(&mem_feats).flat_map(|f| f.points())),
    };
    let kernel = KernelSpec::new(cfg.kernel, bandwidth)?;
    let mem_refs: Vec<&TrajectoryFeatures> = mem_feats.iter().collect();
    let reference = ReferenceSet::new(&mem_refs, kernel)?;

    let mut biased = Vec::with_capacity(feats.len());
    for f in &feats {
        let m = EmpiricalMeasure::new(f, &kernel)?;
        biased.push(reference.distance_measure(&m)?);
    }
    let traj_distances = match cfg.estimator {
        Estimator::Biased => biased.clone(),
        Estimator::Unbiased => feats
            .iter()
            .map(|f| traj_distance_to_memory(f, &mem_refs, &kernel, Estimator::Unbiased).map(|d| d.unwrap_or(0.0)))
            .collect::<Result<Vec<_>>>()?,
    };
    let asm_distances = biased.iter().map(|d| libm::sqrt(d.max(0.0))).collect();

    let keys: Vec<_> = batch.trajectories.iter().map(|t| fmap.pair_keys(t)).collect();
    let raw = pair_distances(&keys, &traj_distances)?;
    let distances = normalize_distances(&raw)?;
    let mut k = 0;
    for r in batch.r_i.iter_mut() {
        for x in r.iter_mut() {
            *x = intrinsic_reward(distances.normalized[k], cfg.delta);
            k += 1;
        }
    }
    batch.intrinsic = Some(IntrinsicAnnotation { kernel, traj_distances, asm_distances, distances });
    Ok(())
}
