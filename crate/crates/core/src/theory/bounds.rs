use alloc::format;
use alloc::vec::Vec;

use super::mdp::{exact_objective, exact_visitation, TabularMDP, TabularPolicy};
use crate::{Error, Result};

/// Slack allowed when comparing exact quantities against their bounds.
pub const BOUND_TOL: f64 = 1e-9;

/// `½ Σ |p − q|`.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// `Σ p log(p / q)`, with `0 log 0 = 0`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(a, _)| **a > 0.0)
        .map(|(a, b)| a * libm::log(a / b))
        .sum()
}

/// `E_{s∼d}[D_TV(π′‖π)[s]]`.
pub fn mean_tv(d: &[f64], pi: &TabularPolicy, pi2: &TabularPolicy) -> f64 {
    d.iter().enumerate().map(|(s, w)| w * tv_distance(pi2.row(s), pi.row(s))).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub t: f64,
    pub epsilon_f: f64,
    pub mean_tv: f64,
    pub d_plus: f64,
    pub d_minus: f64,
    /// Exact `L(π′, σ) − L(π, σ)`.
    pub delta_l: f64,
    pub holds: bool,
}

/// The two-sided bound on `L(π′, σ) − L(π, σ)` for an arbitrary state function `f`.
pub fn check_theorem1(
    mdp: &TabularMDP,
    pi: &TabularPolicy,
    pi2: &TabularPolicy,
    sigma: f64,
    f: &[f64],
) -> Result<BoundReport> {
    if f.len() != mdp.states {
        return Err(Error::DimensionMismatch { expected: mdp.states, got: f.len() });
    }
    let (ns, na, g) = (mdp.states, mdp.actions, mdp.gamma);
    let r = mdp.total_reward(sigma);
    // δ̄_f(s,a) = r(s,a) + γ E[f(s')] − f(s)
    let mut delta = mdp.one_step(&r, f);
    for (i, x) in delta.iter_mut().enumerate() {
        *x -= f[i / na];
    }
    let d = exact_visitation(mdp, pi)?;
    let mut t = 0.0;
    let mut epsilon_f: f64 = 0.0;
    for s in 0..ns {
        let mut inner = 0.0;
        let mut under_new = 0.0;
        for a in 0..na {
            let k = s * na + a;
            inner += (pi2.pi[k] - pi.pi[k]) * delta[k];
            under_new += pi2.pi[k] * delta[k];
        }
        t += d[s] * inner;
        epsilon_f = epsilon_f.max(under_new.abs());
    }
    let tv = mean_tv(&d, pi, pi2);
    let slack = 2.0 * g * epsilon_f * tv / ((1.0 - g) * (1.0 - g));
    let d_plus = t / (1.0 - g) + slack;
    let d_minus = t / (1.0 - g) - slack;
    let delta_l = exact_objective(mdp, pi2, sigma)? - exact_objective(mdp, pi, sigma)?;
    let holds = d_plus + BOUND_TOL >= delta_l && delta_l >= d_minus - BOUND_TOL;
    Ok(BoundReport { t, epsilon_f, mean_tv: tv, d_plus, d_minus, delta_l, holds })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corollary1Report {
    pub delta_l: f64,
    pub rhs: f64,
    /// `max_s |E_{a∼π′}[A(s,a)]|`
    pub epsilon: f64,
    /// `E_{s∼d^π, a∼π′}[A(s,a)]`
    pub mean_advantage: f64,
    pub mean_tv: f64,
    pub holds: bool,
}

/// The advantage form of the lower bound, with `A` the advantage of `π`
/// under the total reward `R_e + σ R_i`.
pub fn check_corollary1(mdp: &TabularMDP, pi: &TabularPolicy, pi2: &TabularPolicy, sigma: f64) -> Result<Corollary1Report> {
    let (ns, na, g) = (mdp.states, mdp.actions, mdp.gamma);
    let adv = mdp.advantages(pi, &mdp.total_reward(sigma))?;
    let d = exact_visitation(mdp, pi)?;
    let mut mean_advantage = 0.0;
    let mut epsilon: f64 = 0.0;
    for s in 0..ns {
        let e: f64 = (0..na).map(|a| pi2.pi[s * na + a] * adv[s * na + a]).sum();
        mean_advantage += d[s] * e;
        epsilon = epsilon.max(e.abs());
    }
    let tv = mean_tv(&d, pi, pi2);
    let rhs = (mean_advantage - 2.0 * g * epsilon * tv / (1.0 - g)) / (1.0 - g);
    let delta_l = exact_objective(mdp, pi2, sigma)? - exact_objective(mdp, pi, sigma)?;
    Ok(Corollary1Report { delta_l, rhs, epsilon, mean_advantage, mean_tv: tv, holds: delta_l >= rhs - BOUND_TOL })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma3Report {
    /// `‖d^{π′} − d^π‖₁`
    pub l1: f64,
    /// `2γ/(1−γ) · E_{d^π}[D_TV]`
    pub bound: f64,
    pub holds: bool,
}

pub fn check_lemma3(mdp: &TabularMDP, pi: &TabularPolicy, pi2: &TabularPolicy) -> Result<Lemma3Report> {
    let d = exact_visitation(mdp, pi)?;
    let d2 = exact_visitation(mdp, pi2)?;
    let l1 = d.iter().zip(&d2).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let bound = 2.0 * mdp.gamma / (1.0 - mdp.gamma) * mean_tv(&d, pi, pi2);
    Ok(Lemma3Report { l1, bound, holds: l1 <= bound + BOUND_TOL })
}

/// Quantities entering the σ lower bound, computed exactly on an instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvantageStatistics {
    /// `E_{s∼d^π, a∼π′}[A_e]`
    pub a_e_mean: f64,
    /// `E_{s∼d^π, a∼π′}[A_i]`, the advantage of the unscaled intrinsic reward.
    pub a_i_mean: f64,
    /// `E_{s∼d^π}[D_KL(π′‖π)[s]]`
    pub eta: f64,
    pub mean_tv: f64,
    /// `max_s |E_{a∼π′}[A_e + σ A_i]|` evaluated at the given σ.
    pub epsilon: f64,
}

pub fn advantage_statistics(mdp: &TabularMDP, pi: &TabularPolicy, pi2: &TabularPolicy, sigma: f64) -> Result<AdvantageStatistics> {
    let (ns, na) = (mdp.states, mdp.actions);
    let ae = mdp.advantages(pi, &mdp.r_e)?;
    let ai = mdp.advantages(pi, &mdp.r_i)?;
    let d = exact_visitation(mdp, pi)?;
    let (mut a_e_mean, mut a_i_mean, mut eta, mut epsilon): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for s in 0..ns {
        let mut e = 0.0;
        let mut i = 0.0;
        for a in 0..na {
            let k = s * na + a;
            e += pi2.pi[k] * ae[k];
            i += pi2.pi[k] * ai[k];
        }
        a_e_mean += d[s] * e;
        a_i_mean += d[s] * i;
        eta += d[s] * kl_divergence(pi2.row(s), pi.row(s));
        epsilon = epsilon.max((e + sigma * i).abs());
    }
    Ok(AdvantageStatistics { a_e_mean, a_i_mean, eta, mean_tv: mean_tv(&d, pi, pi2), epsilon })
}

/// Lower bound on σ guaranteeing an improvement of at least Δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaBound {
    /// `[(1−γ)Δ − E[A_e] + √(2η) γ ε / (1−γ)] / E[A_i]`, the form that follows
    /// from the advantage lower bound.
    pub value: f64,
    /// The variant with the KL term subtracted instead of added.
    pub minus_variant: f64,
    /// `(1−γ)Δ − E[A_e] − √(2η) γ ε / (1−γ)`.
    pub condition_margin: f64,
    /// Whether `condition_margin > 0`.
    pub condition_holds: bool,
}

pub fn sigma_lower_bound(a_e_mean: f64, a_i_mean: f64, eta: f64, delta: f64, gamma: f64, epsilon: f64) -> Result<SigmaBound> {
    for (name, v) in [("A_e mean", a_e_mean), ("A_i mean", a_i_mean), ("eta", eta), ("Delta", delta), ("epsilon", epsilon)] {
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("{name}")));
        }
    }
    if !(a_i_mean > 0.0) {
        return Err(Error::Precondition(format!("mean intrinsic advantage must be positive, got {a_i_mean}")));
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::Precondition("gamma must be in [0, 1)".into()));
    }
    if eta < 0.0 || epsilon < 0.0 {
        return Err(Error::Precondition("eta and epsilon must be non-negative".into()));
    }
    let kl_term = libm::sqrt(2.0 * eta) * gamma * epsilon / (1.0 - gamma);
    let base = (1.0 - gamma) * delta - a_e_mean;
    let margin = base - kl_term;
    Ok(SigmaBound {
        value: (base + kl_term) / a_i_mean,
        minus_variant: margin / a_i_mean,
        condition_margin: margin,
        condition_holds: margin > 0.0,
    })
}

/// Convenience for sweeps: every report for one instance.
pub fn all_reports(
    mdp: &TabularMDP,
    pi: &TabularPolicy,
    pi2: &TabularPolicy,
    sigma: f64,
) -> Result<(Vec<BoundReport>, Corollary1Report, Lemma3Report)> {
    let zero = alloc::vec![0.0; mdp.states];
    let v = mdp.values(pi, &mdp.total_reward(sigma))?;
    let t = alloc::vec![check_theorem1(mdp, pi, pi2, sigma, &zero)?, check_theorem1(mdp, pi, pi2, sigma, &v)?];
    Ok((t, check_corollary1(mdp, pi, pi2, sigma)?, check_lemma3(mdp, pi, pi2)?))
}
