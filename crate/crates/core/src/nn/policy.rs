use alloc::vec::Vec;

use super::{Mlp, HIDDEN};
use crate::rng::{uniform, Rng};
use crate::{Error, Result};

/// Numerically stable log-softmax.
pub fn log_softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = logits.iter().map(|&l| libm::exp(l - m)).sum();
    let lse = m + libm::log(s);
    logits.iter().map(|&l| l - lse).collect()
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    log_softmax(logits).into_iter().map(libm::exp).collect()
}

/// Categorical distribution over discrete actions parameterized by an MLP.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalPolicy {
    pub net: Mlp,
}

impl CategoricalPolicy {
    pub fn new(net: Mlp) -> Self {
        Self { net }
    }

    /// `obs_dim → 64 → 64 → actions` with a near-uniform initial head.
    pub fn init(obs_dim: usize, actions: usize, rng: &mut Rng) -> Self {
        Self::new(Mlp::tanh_mlp(obs_dim, &[HIDDEN, HIDDEN], actions, core::f64::consts::SQRT_2, 0.01, rng))
    }

    pub fn actions(&self) -> usize {
        self.net.output_dim()
    }

    pub fn log_probs(&self, obs: &[f64]) -> Result<Vec<f64>> {
        Ok(log_softmax(&self.net.forward(obs)?))
    }

    pub fn log_prob_and_entropy(&self, obs: &[f64], action: usize) -> Result<(f64, f64)> {
        if action >= self.actions() {
            return Err(Error::invalid("action index out of range"));
        }
        let lp = self.log_probs(obs)?;
        Ok((lp[action], entropy_from_log_probs(&lp)))
    }

    /// Draws an action by inverse-CDF sampling; returns it with its log-probability.
    pub fn sample(&self, obs: &[f64], rng: &mut Rng) -> Result<(usize, f64)> {
        let lp = self.log_probs(obs)?;
        Ok(sample_from_log_probs(&lp, rng))
    }
}

pub(crate) fn entropy_from_log_probs(lp: &[f64]) -> f64 {
    let h: f64 = -lp.iter().map(|&l| libm::exp(l) * l).sum::<f64>();
    h.max(0.0)
}

pub(crate) fn sample_from_log_probs(lp: &[f64], rng: &mut Rng) -> (usize, f64) {
    let u = uniform(rng);
    let mut acc = 0.0;
    for (a, &l) in lp.iter().enumerate() {
        acc += libm::exp(l);
        if u < acc {
            return (a, l);
        }
    }
    let last = lp.len() - 1;
    (last, lp[last])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{Activation, Dense};
    use alloc::vec;

    fn fixed_logits(logits: &[f64]) -> CategoricalPolicy {
        let mut l = Dense::zeros(1, logits.len(), Activation::Identity);
        l.bias = logits.to_vec();
        CategoricalPolicy::new(Mlp::new(vec![l]).unwrap())
    }

    #[test]
    fn uniform_logits() {
        let p = fixed_logits(&[0.0; 4]);
        let (lp, h) = p.log_prob_and_entropy(&[0.0], 2).unwrap();
        assert!((lp - libm::log(0.25)).abs() < 1e-12);
        assert!((h - libm::log(4.0)).abs() < 1e-12);
    }

    #[test]
    fn peaked_logits() {
        let p = fixed_logits(&[10.0, 0.0, 0.0, 0.0]);
        let (lp, h) = p.log_prob_and_entropy(&[0.0], 0).unwrap();
        assert!(libm::exp(lp) > 0.9998, "{}", libm::exp(lp));
        assert!(h < 0.01);
        assert!(p.log_prob_and_entropy(&[0.0], 4).is_err());
    }

    #[test]
    fn shift_invariance() {
        let a = softmax(&[0.3, -1.2, 2.0]);
        let b = softmax(&[100.3, 98.8, 102.0]);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampling_frequencies() {
        let p = fixed_logits(&[0.0, libm::log(3.0)]);
        let mut rng = crate::rng::stream(1, &[]);
        let n = 20_000;
        let ones = (0..n).filter(|_| p.sample(&[0.0], &mut rng).unwrap().0 == 1).count();
        let f = ones as f64 / n as f64;
        assert!((f - 0.75).abs() < 0.02, "{f}");
    }
}
