use alloc::vec;
use alloc::vec::Vec;

use crate::nn::softmax;
use crate::{Error, Result};

/// Finite-horizon MDP with deterministic transitions and a tabular softmax
/// policy `π(a|s) ∝ exp θ[s·A + a]`, small enough to enumerate every path.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicChain {
    pub states: usize,
    pub actions: usize,
    /// `next[s * A + a]`
    pub next: Vec<usize>,
    /// Non-positive `R_i[s * A + a]`.
    pub r_i: Vec<f64>,
    pub start: usize,
    pub horizon: usize,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratedPath {
    pub states: Vec<usize>,
    pub actions: Vec<usize>,
    pub prob: f64,
}

impl DeterministicChain {
    pub fn new(states: usize, actions: usize, next: Vec<usize>, r_i: Vec<f64>, start: usize, horizon: usize, gamma: f64) -> Result<Self> {
        if next.len() != states * actions || r_i.len() != states * actions {
            return Err(Error::DimensionMismatch { expected: states * actions, got: next.len() });
        }
        if next.iter().any(|&s| s >= states) || start >= states {
            return Err(Error::invalid("state index out of range"));
        }
        if r_i.iter().any(|&r| !(r <= 0.0)) {
            return Err(Error::invalid("intrinsic rewards must be non-positive"));
        }
        Ok(Self { states, actions, next, r_i, start, horizon, gamma })
    }

    fn probs(&self, theta: &[f64]) -> Vec<f64> {
        let mut p = Vec::with_capacity(theta.len());
        for s in 0..self.states {
            p.extend(softmax(&theta[s * self.actions..(s + 1) * self.actions]));
        }
        p
    }

    /// All `A^horizon` action sequences from the start state.
    pub fn enumerate(&self, theta: &[f64]) -> Vec<EnumeratedPath> {
        let pi = self.probs(theta);
        let mut out = Vec::new();
        let total = self.actions.pow(self.horizon as u32);
        for code in 0..total {
            let mut c = code;
            let mut s = self.start;
            let mut states = Vec::with_capacity(self.horizon);
            let mut actions = Vec::with_capacity(self.horizon);
            let mut prob = 1.0;
            for _ in 0..self.horizon {
                let a = c % self.actions;
                c /= self.actions;
                states.push(s);
                actions.push(a);
                prob *= pi[s * self.actions + a];
                s = self.next[s * self.actions + a];
            }
            out.push(EnumeratedPath { states, actions, prob });
        }
        out
    }

    fn path_return(&self, p: &EnumeratedPath, from: usize) -> f64 {
        let mut g = 0.0;
        let mut w = 1.0;
        for t in from..self.horizon {
            g += w * self.r_i[p.states[t] * self.actions + p.actions[t]];
            w *= self.gamma;
        }
        g
    }

    /// `E[Σ_t γ^t R_i(s_t, a_t)]`.
    pub fn objective(&self, theta: &[f64]) -> f64 {
        self.enumerate(theta).iter().map(|p| p.prob * self.path_return(p, 0)).sum()
    }

    /// `Σ_τ G(τ) ∇p(τ)` with `∇p` expanded by the product rule over softmax
    /// Jacobians, no log-derivative involved.
    pub fn analytic_gradient(&self, theta: &[f64]) -> Vec<f64> {
        let pi = self.probs(theta);
        let na = self.actions;
        let mut grad = vec![0.0; theta.len()];
        for p in self.enumerate(theta) {
            let g = self.path_return(&p, 0);
            for t in 0..self.horizon {
                let (s, a) = (p.states[t], p.actions[t]);
                let others: f64 = (0..self.horizon)
                    .filter(|&u| u != t)
                    .map(|u| pi[p.states[u] * na + p.actions[u]])
                    .product();
                let pa = pi[s * na + a];
                for b in 0..na {
                    let ind = if a == b { 1.0 } else { 0.0 };
                    grad[s * na + b] += g * others * pa * (ind - pi[s * na + b]);
                }
            }
        }
        grad
    }

    /// Per-step terms of the score-function form: `(s_t, a_t, p(τ) γ^t, Q_t(τ))`
    /// where `Q_t` is the discounted intrinsic return from `t`.
    pub fn score_terms(&self, theta: &[f64]) -> Vec<(usize, usize, f64, f64)> {
        let mut out = Vec::new();
        for p in self.enumerate(theta) {
            let mut w = p.prob;
            for t in 0..self.horizon {
                out.push((p.states[t], p.actions[t], w, self.path_return(&p, t)));
                w *= self.gamma;
            }
        }
        out
    }

    /// `Σ_τ p(τ) Σ_t γ^t ∇log π(a_t|s_t) Q_t(τ)`.
    pub fn reinforce_gradient(&self, theta: &[f64]) -> Vec<f64> {
        let pi = self.probs(theta);
        let na = self.actions;
        let mut grad = vec![0.0; theta.len()];
        for (s, a, w, q) in self.score_terms(theta) {
            for b in 0..na {
                let ind = if a == b { 1.0 } else { 0.0 };
                grad[s * na + b] += w * q * (ind - pi[s * na + b]);
            }
        }
        grad
    }
}
