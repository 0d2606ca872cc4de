//! Performance-bound checks over random tabular instances, as a CSV table.
//!
//! One row per (instance, f) pair: `f = zero` uses the zero function and
//! `f = value` the value function of π under the combined reward.
//!
//! ```text
//! gamma,instance,seed,states,actions,sigma,f,d_minus,delta_l,d_plus,holds,cor1_rhs,cor1_holds,lemma3_l1,lemma3_bound,lemma3_holds,sigma_bound,sigma_bound_alt
//! 0.9,0,9000,4,3,1.2,zero,-3.1,0.02,3.4,true,-0.9,true,0.11,0.83,true,,
//! ```
//!
//! `sigma_bound` is the σ lower bound for an improvement threshold of
//! `delta`; `sigma_bound_alt` is the same expression with the sign of the
//! `√(2η)γε/(1−γ)` term flipped. Both are empty when the intrinsic
//! advantage is not positive.

use std::io::Write;

use anyhow::Result;
use tace_core::rng::{derive_seed, stream, uniform};
use tace_core::theory::{advantage_statistics, all_reports, sigma_lower_bound, TabularMDP, TabularPolicy};

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub instances: usize,
    pub gammas: Vec<f64>,
    pub seed: u64,
    /// Improvement threshold Δ for the σ lower bound column.
    pub delta: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { instances: 200, gammas: vec![0.5, 0.9, 0.99], seed: 2024, delta: 0.01 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub gamma: f64,
    pub instance: usize,
    pub seed: u64,
    pub states: usize,
    pub actions: usize,
    pub sigma: f64,
    pub f: &'static str,
    pub d_minus: f64,
    pub delta_l: f64,
    pub d_plus: f64,
    pub holds: bool,
    pub cor1_rhs: f64,
    pub cor1_holds: bool,
    pub lemma3_l1: f64,
    pub lemma3_bound: f64,
    pub lemma3_holds: bool,
    pub sigma_bound: Option<f64>,
    pub sigma_bound_alt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VerifySummary {
    pub rows: usize,
    pub theorem_failures: usize,
    pub corollary_failures: usize,
    pub lemma_failures: usize,
}

impl VerifySummary {
    pub fn all_hold(&self) -> bool {
        self.theorem_failures + self.corollary_failures + self.lemma_failures == 0
    }
}

/// 2–8 states, 2–4 actions, π′ anywhere between π and an unrelated policy.
pub fn random_instance(seed: u64, gamma: f64) -> (TabularMDP, TabularPolicy, TabularPolicy, f64) {
    let mut rng = stream(seed, &[]);
    let states = 2 + (uniform(&mut rng) * 7.0) as usize;
    let actions = 2 + (uniform(&mut rng) * 3.0) as usize;
    let mdp = TabularMDP::random(states, actions, gamma, &mut rng);
    let pi = TabularPolicy::random(states, actions, 1.0, &mut rng);
    let other = TabularPolicy::random(states, actions, 2.0, &mut rng);
    let pi2 = pi.mix(&other, uniform(&mut rng));
    let sigma = 2.0 * uniform(&mut rng);
    (mdp, pi, pi2, sigma)
}

pub fn verify(cfg: &VerifyConfig) -> Result<Vec<VerifyRow>> {
    let mut rows = Vec::new();
    for &gamma in &cfg.gammas {
        for instance in 0..cfg.instances {
            let seed = derive_seed(cfg.seed, &[gamma.to_bits(), instance as u64]);
            let (mdp, pi, pi2, sigma) = random_instance(seed, gamma);
            let (thm, cor, lem) = all_reports(&mdp, &pi, &pi2, sigma)?;
            let stats = advantage_statistics(&mdp, &pi, &pi2, sigma)?;
            let bound = sigma_lower_bound(stats.a_e_mean, stats.a_i_mean, stats.eta, cfg.delta, gamma, stats.epsilon).ok();
            for (r, f) in thm.iter().zip(["zero", "value"]) {
                rows.push(VerifyRow {
                    gamma,
                    instance,
                    seed,
                    states: mdp.states,
                    actions: mdp.actions,
                    sigma,
                    f,
                    d_minus: r.d_minus,
                    delta_l: r.delta_l,
                    d_plus: r.d_plus,
                    holds: r.holds,
                    cor1_rhs: cor.rhs,
                    cor1_holds: cor.holds,
                    lemma3_l1: lem.l1,
                    lemma3_bound: lem.bound,
                    lemma3_holds: lem.holds,
                    sigma_bound: bound.map(|b| b.value),
                    sigma_bound_alt: bound.map(|b| b.minus_variant),
                });
            }
        }
    }
    Ok(rows)
}

pub fn summarize(rows: &[VerifyRow]) -> VerifySummary {
    let mut s = VerifySummary { rows: rows.len(), ..Default::default() };
    for r in rows {
        s.theorem_failures += usize::from(!r.holds);
        // corollary and lemma columns repeat on both rows of an instance
        if r.f == "zero" {
            s.corollary_failures += usize::from(!r.cor1_holds);
            s.lemma_failures += usize::from(!r.lemma3_holds);
        }
    }
    s
}

pub fn write_csv<W: Write>(w: W, rows: &[VerifyRow]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record([
        "gamma",
        "instance",
        "seed",
        "states",
        "actions",
        "sigma",
        "f",
        "d_minus",
        "delta_l",
        "d_plus",
        "holds",
        "cor1_rhs",
        "cor1_holds",
        "lemma3_l1",
        "lemma3_bound",
        "lemma3_holds",
        "sigma_bound",
        "sigma_bound_alt",
    ])?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        csv.write_record([
            r.gamma.to_string(),
            r.instance.to_string(),
            r.seed.to_string(),
            r.states.to_string(),
            r.actions.to_string(),
            r.sigma.to_string(),
            r.f.to_string(),
            r.d_minus.to_string(),
            r.delta_l.to_string(),
            r.d_plus.to_string(),
            r.holds.to_string(),
            r.cor1_rhs.to_string(),
            r.cor1_holds.to_string(),
            r.lemma3_l1.to_string(),
            r.lemma3_bound.to_string(),
            r.lemma3_holds.to_string(),
            opt(r.sigma_bound),
            opt(r.sigma_bound_alt),
        ])?;
    }
    csv.flush()?;
    Ok(())
}
