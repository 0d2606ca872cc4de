//! Kernel MMD between trajectories and the distance-based intrinsic reward.
//!
//! Each trajectory is treated as an empirical state-action visitation
//! distribution over feature points `g(s, a)`. The squared MMD between two
//! such distributions is
//!
//! ```text
//! MMD²(τ, υ) = E[k(x, x')] − 2 E[k(x, y)] + E[k(y, y')]
//! ```
//!
//! The biased V-statistic (all index pairs, diagonals included) is used for
//! rewards because it is non-negative and exactly zero on identical inputs.
//! The unbiased U-statistic is available for diagnostics.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Result};

/// A point in feature space.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeaturePoint(pub Vec<f64>);

impl FeaturePoint {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum KernelFamily {
    /// `exp(−‖a−b‖² / (2h²))`
    Gaussian,
    /// `exp(−‖a−b‖₁ / h)`
    Laplace,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    family: KernelFamily,
    bandwidth: f64,
}

impl KernelSpec {
    pub fn new(family: KernelFamily, bandwidth: f64) -> Result<Self> {
        if !(bandwidth > 0.0) || !bandwidth.is_finite() {
            return Err(Error::invalid("kernel bandwidth must be positive and finite"));
        }
        Ok(Self { family, bandwidth })
    }

    pub fn gaussian(bandwidth: f64) -> Result<Self> {
        Self::new(KernelFamily::Gaussian, bandwidth)
    }

    pub fn laplace(bandwidth: f64) -> Result<Self> {
        Self::new(KernelFamily::Laplace, bandwidth)
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Kernel value with the dimension check skipped.
    #[inline]
    pub(crate) fn eval_unchecked(&self, a: &[f64], b: &[f64]) -> f64 {
        match self.family {
            KernelFamily::Gaussian => {
                let mut d2 = 0.0;
                for (x, y) in a.iter().zip(b) {
                    let d = x - y;
                    d2 += d * d;
                }
                libm::exp(-d2 / (2.0 * self.bandwidth * self.bandwidth))
            }
            KernelFamily::Laplace => {
                let mut d1 = 0.0;
                for (x, y) in a.iter().zip(b) {
                    d1 += (x - y).abs();
                }
                libm::exp(-d1 / self.bandwidth)
            }
        }
    }

    /// Distance in the metric the kernel is built on (L2 or L1).
    fn metric(&self, a: &[f64], b: &[f64]) -> f64 {
        match self.family {
            KernelFamily::Gaussian => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                libm::sqrt(d2)
            }
            KernelFamily::Laplace => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        }
    }
}

pub fn kernel_eval(a: &[f64], b: &[f64], k: &KernelSpec) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    Ok(k.eval_unchecked(a, b))
}

/// Ordered feature points of one trajectory, stored flat.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryFeatures {
    dim: usize,
    coords: Vec<f64>,
}

impl TrajectoryFeatures {
    pub fn new(dim: usize) -> Self {
        Self { dim, coords: Vec::new() }
    }

    pub fn from_points(points: &[FeaturePoint]) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::invalid("trajectory features must be non-empty"))?;
        let mut out = Self::new(first.dim());
        for p in points {
            out.push(p.as_slice())?;
        }
        Ok(out)
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.len() % dim != 0 {
            return Err(Error::invalid("flat coordinates do not match dimension"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("feature coordinates".into()));
        }
        Ok(Self { dim, coords })
    }

    pub fn push(&mut self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: point.len() });
        }
        if point.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("feature point".into()));
        }
        self.coords.extend_from_slice(point);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.coords.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim.max(1))
    }
}

fn check_pair(a: &TrajectoryFeatures, b: &TrajectoryFeatures, min_len: usize) -> Result<()> {
    if a.len() < min_len || b.len() < min_len {
        return Err(Error::invalid(alloc::format!(
            "MMD estimator needs at least {min_len} point(s) per trajectory"
        )));
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(())
}

/// Empirical measure: distinct points with multiplicities. Evaluating the
/// V-statistic on it gives the same value as on the raw point list while
/// touching each distinct pair once.
#[derive(Debug, Clone)]
pub struct EmpiricalMeasure {
    dim: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
    self_term: f64,
}

impl EmpiricalMeasure {
    pub fn new(traj: &TrajectoryFeatures, k: &KernelSpec) -> Result<Self> {
        if traj.is_empty() {
            return Err(Error::invalid("trajectory features must be non-empty"));
        }
        let dim = traj.dim();
        let mut order: Vec<usize> = (0..traj.len()).collect();
        order.sort_by(|&i, &j| cmp_points(traj.point(i), traj.point(j)));
        let mut points = Vec::new();
        let mut counts: Vec<f64> = Vec::new();
        let mut last: Option<usize> = None;
        for &i in &order {
            match last {
                Some(l) if cmp_points(traj.point(l), traj.point(i)) == Ordering::Equal => {
                    *counts.last_mut().unwrap() += 1.0;
                }
                _ => {
                    points.extend_from_slice(traj.point(i));
                    counts.push(1.0);
                    last = Some(i);
                }
            }
        }
        let n = traj.len() as f64;
        let weights: Vec<f64> = counts.iter().map(|c| c / n).collect();
        let mut m = Self { dim, points, weights, self_term: 0.0 };
        m.self_term = m.cross_term(&m, k);
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn distinct(&self) -> usize {
        self.weights.len()
    }

    /// `E[k(x, x')]` under this measure.
    pub fn self_term(&self) -> f64 {
        self.self_term
    }

    /// `E[k(x, y)]` with `x` from `self`, `y` from `other`.
    pub fn cross_term(&self, other: &EmpiricalMeasure, k: &KernelSpec) -> f64 {
        let mut total = 0.0;
        for (i, wi) in self.weights.iter().enumerate() {
            let a = &self.points[i * self.dim..(i + 1) * self.dim];
            let mut row = 0.0;
            for (j, wj) in other.weights.iter().enumerate() {
                let b = &other.points[j * other.dim..(j + 1) * other.dim];
                row += wj * k.eval_unchecked(a, b);
            }
            total += wi * row;
        }
        total
    }

    /// Biased MMD² between two measures, clamped at zero against rounding.
    pub fn mmd2(&self, other: &EmpiricalMeasure, k: &KernelSpec) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let v = self.self_term + other.self_term - 2.0 * self.cross_term(other, k);
        Ok(v.max(0.0))
    }
}

fn cmp_points(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Biased (V-statistic) MMD² estimate. Always `≥ 0`.
pub fn mmd2_biased(a: &TrajectoryFeatures, b: &TrajectoryFeatures, k: &KernelSpec) -> Result<f64> {
    check_pair(a, b, 1)?;
    let ma = EmpiricalMeasure::new(a, k)?;
    let mb = EmpiricalMeasure::new(b, k)?;
    ma.mmd2(&mb, k)
}

/// Unbiased (U-statistic) MMD² estimate; within-set sums exclude the
/// diagonal. May be negative.
pub fn mmd2_unbiased(a: &TrajectoryFeatures, b: &TrajectoryFeatures, k: &KernelSpec) -> Result<f64> {
    check_pair(a, b, 2)?;
    let within = |t: &TrajectoryFeatures| {
        let n = t.len();
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += k.eval_unchecked(t.point(i), t.point(j));
            }
        }
        2.0 * s / (n as f64 * (n as f64 - 1.0))
    };
    let mut cross = 0.0;
    for x in a.points() {
        for y in b.points() {
            cross += k.eval_unchecked(x, y);
        }
    }
    cross /= (a.len() * b.len()) as f64;
    Ok(within(a) + within(b) - 2.0 * cross)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Estimator {
    #[default]
    Biased,
    Unbiased,
}

pub fn mmd2(a: &TrajectoryFeatures, b: &TrajectoryFeatures, k: &KernelSpec, est: Estimator) -> Result<f64> {
    match est {
        Estimator::Biased => mmd2_biased(a, b, k),
        Estimator::Unbiased => mmd2_unbiased(a, b, k),
    }
}

/// `min over υ ∈ M of MMD²(τ, υ)`, or `None` when the memory is empty.
pub fn traj_distance_to_memory(
    traj: &TrajectoryFeatures,
    memory: &[&TrajectoryFeatures],
    k: &KernelSpec,
    est: Estimator,
) -> Result<Option<f64>> {
    let mut best: Option<f64> = None;
    for m in memory {
        let d = mmd2(traj, m, k, est)?;
        best = Some(match best {
            Some(b) if b <= d => b,
            _ => d,
        });
    }
    Ok(best)
}

/// Precomputed memory measures for repeated biased distance queries.
#[derive(Debug, Clone)]
pub struct ReferenceSet {
    kernel: KernelSpec,
    measures: Vec<EmpiricalMeasure>,
}

impl ReferenceSet {
    pub fn new(memory: &[&TrajectoryFeatures], kernel: KernelSpec) -> Result<Self> {
        let measures = memory
            .iter()
            .map(|t| EmpiricalMeasure::new(t, &kernel))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { kernel, measures })
    }

    pub fn is_empty(&self) -> bool {
        self.measures.is_empty()
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    /// Biased `MMD²(τ, M)`; `None` for an empty memory.
    pub fn distance(&self, traj: &TrajectoryFeatures) -> Result<Option<f64>> {
        if self.measures.is_empty() {
            return Ok(None);
        }
        let m = EmpiricalMeasure::new(traj, &self.kernel)?;
        self.distance_measure(&m).map(Some)
    }

    pub fn distance_measure(&self, m: &EmpiricalMeasure) -> Result<f64> {
        let mut best = f64::INFINITY;
        for r in &self.measures {
            best = best.min(m.mmd2(r, &self.kernel)?);
        }
        Ok(best)
    }
}

/// Value identity of a state-action occurrence: the bit patterns of the
/// observation plus the action index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairKey {
    state: Vec<u64>,
    action: u32,
}

impl PairKey {
    pub fn new(state: &[f64], action: u32) -> Self {
        Self { state: state.iter().map(|v| v.to_bits()).collect(), action }
    }
}

/// `D(x, M)`: the mean of `MMD²(τ, M)` over batch trajectories containing an
/// occurrence equal to `x`.
pub fn pair_distance(x: &PairKey, batch: &[Vec<PairKey>], traj_distances: &[f64]) -> Result<f64> {
    if batch.len() != traj_distances.len() {
        return Err(Error::DimensionMismatch { expected: batch.len(), got: traj_distances.len() });
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for (keys, d) in batch.iter().zip(traj_distances) {
        if keys.iter().any(|k| k == x) {
            sum += d;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::invalid("state-action pair does not occur in the batch"));
    }
    Ok(sum / count as f64)
}

/// `D(x, M)` for every occurrence in the batch, flattened in batch order.
pub fn pair_distances(batch: &[Vec<PairKey>], traj_distances: &[f64]) -> Result<Vec<f64>> {
    if batch.len() != traj_distances.len() {
        return Err(Error::DimensionMismatch { expected: batch.len(), got: traj_distances.len() });
    }
    // key -> (sum of distances, number of distinct trajectories, last trajectory seen)
    let mut acc: BTreeMap<&PairKey, (f64, usize, usize)> = BTreeMap::new();
    for (ti, (keys, d)) in batch.iter().zip(traj_distances).enumerate() {
        for key in keys {
            let e = acc.entry(key).or_insert((0.0, 0, usize::MAX));
            if e.2 != ti {
                e.0 += d;
                e.1 += 1;
                e.2 = ti;
            }
        }
    }
    Ok(batch
        .iter()
        .flat_map(|keys| keys.iter())
        .map(|key| {
            let (s, c, _) = acc[key];
            s / c as f64
        })
        .collect())
}

/// Standard deviation below which a batch is treated as constant.
pub const DEGENERATE_STD: f64 = 1e-8;

/// Raw and standardized distances of one batch.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceBatch {
    pub raw: Vec<f64>,
    pub normalized: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    /// Set when `std < DEGENERATE_STD`; all normalized values are then 0.
    pub degenerate: bool,
}

pub fn normalize_distances(raw: &[f64]) -> Result<DistanceBatch> {
    if raw.is_empty() {
        return Err(Error::invalid("cannot normalize an empty distance list"));
    }
    if raw.iter().any(|d| !d.is_finite()) {
        return Err(Error::NonFinite("raw distances".into()));
    }
    let n = raw.len() as f64;
    let mean = raw.iter().sum::<f64>() / n;
    let var = raw.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
    let std = libm::sqrt(var);
    let degenerate = std < DEGENERATE_STD;
    let normalized = if degenerate {
        alloc::vec![0.0; raw.len()]
    } else {
        raw.iter().map(|d| (d - mean) / std).collect()
    };
    Ok(DistanceBatch { raw: raw.to_vec(), normalized, mean, std, degenerate })
}

/// `min(d̂ − δ, 0)`.
#[inline]
pub fn intrinsic_reward(normalized_distance: f64, delta: f64) -> f64 {
    (normalized_distance - delta).min(0.0)
}

/// Points beyond which the median heuristic subsamples with a fixed stride.
pub const MEDIAN_MAX_POINTS: usize = 512;

/// Median pairwise distance (in the kernel's own metric) over a point cloud.
/// Falls back to the mean positive distance, then to 1, when the median is 0.
pub fn median_heuristic<'a>(
    family: KernelFamily,
    points: impl IntoIterator<Item = &'a [f64]>,
) -> f64 {
    let all: Vec<&[f64]> = points.into_iter().collect();
    let stride = all.len().div_ceil(MEDIAN_MAX_POINTS).max(1);
    let pts: Vec<&[f64]> = all.iter().step_by(stride).copied().collect();
    let metric = KernelSpec { family, bandwidth: 1.0 };
    let mut d = Vec::with_capacity(pts.len() * pts.len().saturating_sub(1) / 2);
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            d.push(metric.metric(pts[i], pts[j]));
        }
    }
    if d.is_empty() {
        return 1.0;
    }
    let mid = d.len() / 2;
    let (_, m, _) = d.select_nth_unstable_by(mid, |a, b| a.total_cmp(b));
    let median = *m;
    if median > 0.0 && median.is_finite() {
        return median;
    }
    let positive: Vec<f64> = d.iter().copied().filter(|x| *x > 0.0).collect();
    if positive.is_empty() {
        1.0
    } else {
        positive.iter().sum::<f64>() / positive.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn traj(points: &[&[f64]]) -> TrajectoryFeatures {
        let pts: Vec<FeaturePoint> = points.iter().map(|p| FeaturePoint(p.to_vec())).collect();
        TrajectoryFeatures::from_points(&pts).unwrap()
    }

    #[test]
    fn kernel_closed_forms() {
        let g = KernelSpec::gaussian(libm::sqrt(2.0)).unwrap();
        assert_eq!(kernel_eval(&[0.0, 0.0], &[0.0, 0.0], &g).unwrap(), 1.0);
        let v = kernel_eval(&[0.0], &[2.0], &g).unwrap();
        assert!((v - libm::exp(-1.0)).abs() < 1e-15);
        let l = KernelSpec::laplace(2.0).unwrap();
        let v = kernel_eval(&[0.0], &[2.0], &l).unwrap();
        assert!((v - 0.367_879_441_171_442_3).abs() < 1e-15);
    }

    #[test]
    fn kernel_rejects_bad_input() {
        assert!(KernelSpec::gaussian(0.0).is_err());
        assert!(KernelSpec::laplace(-1.0).is_err());
        let g = KernelSpec::gaussian(1.0).unwrap();
        assert!(matches!(
            kernel_eval(&[0.0], &[0.0, 1.0], &g),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn biased_closed_form() {
        let g = KernelSpec::gaussian(libm::sqrt(2.0)).unwrap();
        let v = mmd2_biased(&traj(&[&[0.0]]), &traj(&[&[2.0]]), &g).unwrap();
        assert!((v - (2.0 - 2.0 * libm::exp(-1.0))).abs() < 1e-12);
        assert!((v - 1.264_241).abs() < 1e-6);
    }

    #[test]
    fn biased_identical_is_zero() {
        let g = KernelSpec::gaussian(0.7).unwrap();
        let a = traj(&[&[0.1, 0.2], &[0.3, 0.4], &[0.1, 0.2]]);
        assert!(mmd2_biased(&a, &a, &g).unwrap().abs() < 1e-12);
    }

    #[test]
    fn unbiased_closed_forms() {
        let g = KernelSpec::gaussian(1.0).unwrap();
        let a = traj(&[&[0.0], &[1.0]]);
        let v = mmd2_unbiased(&a, &a, &g).unwrap();
        assert!((v - (libm::exp(-0.5) - 1.0)).abs() < 1e-12);
        assert!((v + 0.393_469).abs() < 1e-6);

        let a = traj(&[&[0.0], &[0.0]]);
        let b = traj(&[&[10.0], &[10.0]]);
        let v = mmd2_unbiased(&a, &b, &g).unwrap();
        assert!((v - (2.0 - 2.0 * libm::exp(-50.0))).abs() < 1e-12);
    }

    #[test]
    fn estimators_reject_short_inputs() {
        let g = KernelSpec::gaussian(1.0).unwrap();
        let one = traj(&[&[0.0]]);
        let two = traj(&[&[0.0], &[1.0]]);
        assert!(mmd2_unbiased(&one, &two, &g).is_err());
        assert!(mmd2_biased(&TrajectoryFeatures::new(1), &two, &g).is_err());
        assert!(TrajectoryFeatures::from_points(&[]).is_err());
    }

    #[test]
    fn distance_to_memory_cases() {
        let g = KernelSpec::gaussian(0.5).unwrap();
        let t = traj(&[&[0.0, 0.0], &[0.1, 0.0]]);
        assert_eq!(traj_distance_to_memory(&t, &[], &g, Estimator::Biased).unwrap(), None);
        let d = traj_distance_to_memory(&t, &[&t], &g, Estimator::Biased).unwrap().unwrap();
        assert!(d.abs() < 1e-12);

        let u1 = traj(&[&[1.0, 1.0], &[0.9, 1.0]]);
        let u2 = traj(&[&[0.2, 0.0], &[0.3, 0.0]]);
        let d1 = mmd2_biased(&t, &u1, &g).unwrap();
        let d2 = mmd2_biased(&t, &u2, &g).unwrap();
        assert!(d1 > d2);
        let d = traj_distance_to_memory(&t, &[&u1, &u2], &g, Estimator::Biased).unwrap().unwrap();
        assert_eq!(d, d2);

        let refs = ReferenceSet::new(&[&u1, &u2], g).unwrap();
        assert!((refs.distance(&t).unwrap().unwrap() - d2).abs() < 1e-14);
    }

    #[test]
    fn pair_distance_averages_over_containing_trajectories() {
        let a = PairKey::new(&[0.0, 0.0], 0);
        let b = PairKey::new(&[0.5, 0.0], 1);
        let c = PairKey::new(&[0.5, 0.0], 2);
        let batch = vec![vec![a.clone(), b.clone()], vec![a.clone(), c.clone(), a.clone()]];
        let d = [0.2, 0.6];
        assert!((pair_distance(&b, &batch, &d).unwrap() - 0.2).abs() < 1e-15);
        assert!((pair_distance(&a, &batch, &d).unwrap() - 0.4).abs() < 1e-15);
        let missing = PairKey::new(&[0.9, 0.9], 0);
        assert!(pair_distance(&missing, &batch, &d).is_err());
        let all = pair_distances(&batch, &d).unwrap();
        assert_eq!(all.len(), 5);
        assert!((all[0] - 0.4).abs() < 1e-15);
        assert!((all[1] - 0.2).abs() < 1e-15);
        assert!((all[3] - 0.6).abs() < 1e-15);
        assert!((all[4] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn normalization_cases() {
        let b = normalize_distances(&[1.0, 3.0]).unwrap();
        assert_eq!(b.normalized, vec![-1.0, 1.0]);
        assert!(!b.degenerate);
        let b = normalize_distances(&[0.3, 0.3, 0.3]).unwrap();
        assert_eq!(b.normalized, vec![0.0, 0.0, 0.0]);
        assert!(b.degenerate);
        assert!(normalize_distances(&[]).is_err());
    }

    #[test]
    fn intrinsic_reward_cases() {
        let delta = 0.7;
        assert_eq!(intrinsic_reward(delta, delta), 0.0);
        assert_eq!(intrinsic_reward(delta + 1.0, delta), 0.0);
        assert!((intrinsic_reward(delta - 0.3, delta) + 0.3).abs() < 1e-15);
    }

    #[test]
    fn median_heuristic_basic() {
        let pts: [&[f64]; 3] = [&[0.0], &[1.0], &[3.0]];
        // distances 1, 3, 2 -> median 2
        assert_eq!(median_heuristic(KernelFamily::Gaussian, pts), 2.0);
        let same: [&[f64]; 3] = [&[1.0], &[1.0], &[1.0]];
        assert_eq!(median_heuristic(KernelFamily::Gaussian, same), 1.0);
    }
}
