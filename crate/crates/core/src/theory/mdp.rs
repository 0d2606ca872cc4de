use alloc::vec;
use alloc::vec::Vec;

use super::linalg::lu_solve;
use crate::rng::{standard_normal, uniform, Rng};
use crate::{Error, Result};

const STOCHASTIC_TOL: f64 = 1e-12;

/// Finite MDP with separate extrinsic and (non-positive) intrinsic rewards.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularMDP {
    pub states: usize,
    pub actions: usize,
    /// `p[(s * A + a) * S + s']`
    pub p: Vec<f64>,
    /// `r_e[s * A + a]`
    pub r_e: Vec<f64>,
    pub r_i: Vec<f64>,
    pub rho0: Vec<f64>,
    pub gamma: f64,
}

/// Row-stochastic `π[s * A + a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularPolicy {
    pub states: usize,
    pub actions: usize,
    pub pi: Vec<f64>,
}

impl TabularPolicy {
    pub fn new(states: usize, actions: usize, pi: Vec<f64>) -> Result<Self> {
        if pi.len() != states * actions {
            return Err(Error::DimensionMismatch { expected: states * actions, got: pi.len() });
        }
        for s in 0..states {
            let row = &pi[s * actions..(s + 1) * actions];
            if row.iter().any(|&x| !(x >= 0.0)) || (row.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
                return Err(Error::invalid("policy rows must be probability vectors"));
            }
        }
        Ok(Self { states, actions, pi })
    }

    pub fn uniform(states: usize, actions: usize) -> Self {
        Self { states, actions, pi: vec![1.0 / actions as f64; states * actions] }
    }

    /// Softmax of Gaussian logits with standard deviation `scale`.
    pub fn random(states: usize, actions: usize, scale: f64, rng: &mut Rng) -> Self {
        let logits: Vec<f64> = (0..states * actions).map(|_| scale * standard_normal(rng)).collect();
        Self::from_logits(states, actions, &logits)
    }

    pub fn from_logits(states: usize, actions: usize, logits: &[f64]) -> Self {
        let mut pi = Vec::with_capacity(states * actions);
        for s in 0..states {
            pi.extend(crate::nn::softmax(&logits[s * actions..(s + 1) * actions]));
        }
        Self { states, actions, pi }
    }

    /// `(1 − w) π + w q`.
    pub fn mix(&self, other: &TabularPolicy, w: f64) -> Self {
        let pi = self.pi.iter().zip(&other.pi).map(|(a, b)| (1.0 - w) * a + w * b).collect();
        Self { states: self.states, actions: self.actions, pi }
    }

    pub fn row(&self, s: usize) -> &[f64] {
        &self.pi[s * self.actions..(s + 1) * self.actions]
    }
}

impl TabularMDP {
    pub fn new(
        states: usize,
        actions: usize,
        p: Vec<f64>,
        r_e: Vec<f64>,
        r_i: Vec<f64>,
        rho0: Vec<f64>,
        gamma: f64,
    ) -> Result<Self> {
        if states == 0 || actions == 0 {
            return Err(Error::invalid("empty MDP"));
        }
        if p.len() != states * actions * states {
            return Err(Error::DimensionMismatch { expected: states * actions * states, got: p.len() });
        }
        if r_e.len() != states * actions || r_i.len() != states * actions || rho0.len() != states {
            return Err(Error::invalid("reward or start shapes do not match"));
        }
        if !(0.0..1.0).contains(&gamma) {
            return Err(Error::invalid("gamma must be in [0, 1)"));
        }
        for row in p.chunks(states) {
            if row.iter().any(|&x| !(x >= 0.0)) || (row.iter().sum::<f64>() - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::invalid("transition rows must be probability vectors"));
            }
        }
        if r_i.iter().any(|&r| !(r <= 0.0)) {
            return Err(Error::invalid("intrinsic rewards must be non-positive"));
        }
        if rho0.iter().any(|&x| !(x >= 0.0)) || (rho0.iter().sum::<f64>() - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::invalid("start distribution must be a probability vector"));
        }
        Ok(Self { states, actions, p, r_e, r_i, rho0, gamma })
    }

    /// Random dense instance: transition rows from normalized uniforms,
    /// `R_e ∈ [−1, 1]`, `R_i ∈ [−1, 0]`.
    pub fn random(states: usize, actions: usize, gamma: f64, rng: &mut Rng) -> Self {
        let mut p = Vec::with_capacity(states * actions * states);
        for _ in 0..states * actions {
            // cube the uniforms so rows are peaked rather than near-uniform
            let row: Vec<f64> = (0..states).map(|_| libm::pow(uniform(rng), 3.0)).collect();
            p.extend(normalized(row));
        }
        let r_e = (0..states * actions).map(|_| 2.0 * uniform(rng) - 1.0).collect();
        let r_i = (0..states * actions).map(|_| -uniform(rng)).collect();
        let rho0 = normalized((0..states).map(|_| uniform(rng)).collect());
        Self { states, actions, p, r_e, r_i, rho0, gamma }
    }

    pub fn prob(&self, s: usize, a: usize, s2: usize) -> f64 {
        self.p[(s * self.actions + a) * self.states + s2]
    }

    /// `R_e + σ R_i`.
    pub fn total_reward(&self, sigma: f64) -> Vec<f64> {
        self.r_e.iter().zip(&self.r_i).map(|(e, i)| e + sigma * i).collect()
    }

    fn check_policy(&self, pi: &TabularPolicy) -> Result<()> {
        if pi.states != self.states || pi.actions != self.actions {
            return Err(Error::DimensionMismatch { expected: self.states * self.actions, got: pi.states * pi.actions });
        }
        Ok(())
    }

    /// `P_π[s][s'] = Σ_a π(a|s) P(s'|s,a)`.
    pub fn policy_transition(&self, pi: &TabularPolicy) -> Vec<f64> {
        let (ns, na) = (self.states, self.actions);
        let mut m = vec![0.0; ns * ns];
        for s in 0..ns {
            for a in 0..na {
                let w = pi.pi[s * na + a];
                for s2 in 0..ns {
                    m[s * ns + s2] += w * self.prob(s, a, s2);
                }
            }
        }
        m
    }

    /// State values of `π` under per-(s,a) reward `r`.
    pub fn values(&self, pi: &TabularPolicy, r: &[f64]) -> Result<Vec<f64>> {
        self.check_policy(pi)?;
        let (ns, na) = (self.states, self.actions);
        let pp = self.policy_transition(pi);
        let mut a = vec![0.0; ns * ns];
        for i in 0..ns {
            for j in 0..ns {
                a[i * ns + j] = if i == j { 1.0 } else { 0.0 } - self.gamma * pp[i * ns + j];
            }
        }
        let rpi: Vec<f64> = (0..ns).map(|s| (0..na).map(|x| pi.pi[s * na + x] * r[s * na + x]).sum()).collect();
        lu_solve(&a, &rpi)
    }

    /// `Q(s,a) = r(s,a) + γ Σ P(s'|s,a) V(s')` for the reward `r`.
    pub fn q_values(&self, pi: &TabularPolicy, r: &[f64]) -> Result<Vec<f64>> {
        let v = self.values(pi, r)?;
        Ok(self.one_step(r, &v))
    }

    /// `r(s,a) + γ Σ_{s'} P(s'|s,a) f(s')`.
    pub fn one_step(&self, r: &[f64], f: &[f64]) -> Vec<f64> {
        let (ns, na) = (self.states, self.actions);
        let mut q = vec![0.0; ns * na];
        for s in 0..ns {
            for a in 0..na {
                let ev: f64 = (0..ns).map(|s2| self.prob(s, a, s2) * f[s2]).sum();
                q[s * na + a] = r[s * na + a] + self.gamma * ev;
            }
        }
        q
    }

    /// Advantages `Q − V` of `π` under reward `r`.
    pub fn advantages(&self, pi: &TabularPolicy, r: &[f64]) -> Result<Vec<f64>> {
        let v = self.values(pi, r)?;
        let q = self.one_step(r, &v);
        let na = self.actions;
        Ok(q.iter().enumerate().map(|(i, x)| x - v[i / na]).collect())
    }
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    if s <= 0.0 {
        let n = v.len() as f64;
        v.iter_mut().for_each(|x| *x = 1.0 / n);
        return v;
    }
    v.iter_mut().for_each(|x| *x /= s);
    // push rounding into the largest entry so the row sums to 1 exactly enough
    let err = 1.0 - v.iter().sum::<f64>();
    if let Some(m) = (0..v.len()).max_by(|&i, &j| v[i].total_cmp(&v[j])) {
        v[m] += err;
    }
    v
}

/// Normalized discounted state visitation `d^π = (1−γ) ρ₀ᵀ (I − γ P_π)⁻¹`.
pub fn exact_visitation(mdp: &TabularMDP, pi: &TabularPolicy) -> Result<Vec<f64>> {
    mdp.check_policy(pi)?;
    let ns = mdp.states;
    let pp = mdp.policy_transition(pi);
    // (I − γ P_πᵀ) d = (1 − γ) ρ₀
    let mut a = vec![0.0; ns * ns];
    for i in 0..ns {
        for j in 0..ns {
            a[i * ns + j] = if i == j { 1.0 } else { 0.0 } - mdp.gamma * pp[j * ns + i];
        }
    }
    let b: Vec<f64> = mdp.rho0.iter().map(|x| (1.0 - mdp.gamma) * x).collect();
    let d = lu_solve(&a, &b)?;
    let s: f64 = d.iter().sum();
    Ok(d.into_iter().map(|x| (x / s).max(0.0)).collect())
}

/// `L(π, σ) = E_{s₀∼ρ₀}[V^π_{R_e + σR_i}(s₀)]`.
pub fn exact_objective(mdp: &TabularMDP, pi: &TabularPolicy, sigma: f64) -> Result<f64> {
    let v = mdp.values(pi, &mdp.total_reward(sigma))?;
    Ok(mdp.rho0.iter().zip(&v).map(|(p, x)| p * x).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_absorbing_state() {
        let m = TabularMDP::new(1, 1, vec![1.0], vec![2.0], vec![0.0], vec![1.0], 0.9).unwrap();
        let pi = TabularPolicy::uniform(1, 1);
        assert_eq!(exact_visitation(&m, &pi).unwrap(), vec![1.0]);
        assert!((exact_objective(&m, &pi, 3.0).unwrap() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn two_state_cycle() {
        let m = TabularMDP::new(2, 1, vec![0.0, 1.0, 1.0, 0.0], vec![0.0; 2], vec![0.0; 2], vec![1.0, 0.0], 0.5).unwrap();
        let d = exact_visitation(&m, &TabularPolicy::uniform(2, 1)).unwrap();
        assert!((d[0] - 2.0 / 3.0).abs() < 1e-12 && (d[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(TabularMDP::new(1, 1, vec![0.5], vec![0.0], vec![0.0], vec![1.0], 0.9).is_err());
        assert!(TabularMDP::new(1, 1, vec![1.0], vec![0.0], vec![0.5], vec![1.0], 0.9).is_err());
        assert!(TabularMDP::new(1, 1, vec![1.0], vec![0.0], vec![0.0], vec![1.0], 1.0).is_err());
    }
}
