use tace_core::rng::{stream, uniform, Rng};
use tace_core::theory::*;
use tace_core::Error;

fn instance(rng: &mut Rng, gamma: f64) -> (TabularMDP, TabularPolicy, TabularPolicy, f64) {
    let states = 2 + (uniform(rng) * 7.0) as usize;
    let actions = 2 + (uniform(rng) * 3.0) as usize;
    let mdp = TabularMDP::random(states, actions, gamma, rng);
    let pi = TabularPolicy::random(states, actions, 1.0, rng);
    let other = TabularPolicy::random(states, actions, 2.0, rng);
    // from nearby to far-off updates
    let pi2 = pi.mix(&other, uniform(rng));
    let sigma = 2.0 * uniform(rng);
    (mdp, pi, pi2, sigma)
}

#[test]
fn bound_suite_on_random_instances() {
    for gamma in [0.5, 0.9, 0.99] {
        let mut rng = stream(2024, &[(gamma * 100.0) as u64]);
        for case in 0..200 {
            let (mdp, pi, pi2, sigma) = instance(&mut rng, gamma);
            let (thm, cor, lem) = all_reports(&mdp, &pi, &pi2, sigma).unwrap();
            for r in &thm {
                assert!(r.holds, "γ={gamma} case {case}: {r:?}");
                assert!(r.d_plus + BOUND_TOL >= r.delta_l && r.delta_l >= r.d_minus - BOUND_TOL);
            }
            assert!(cor.holds, "γ={gamma} case {case}: {cor:?}");
            assert!(lem.holds, "γ={gamma} case {case}: {lem:?}");

            let d = exact_visitation(&mdp, &pi).unwrap();
            for s in 0..mdp.states {
                let (p, q) = (pi2.row(s), pi.row(s));
                let tv = tv_distance(p, q);
                assert!(tv <= (0.5 * kl_divergence(p, q)).sqrt() + 1e-12);
            }
            assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-9);

            let same = check_theorem1(&mdp, &pi, &pi, sigma, &mdp.values(&pi, &mdp.total_reward(sigma)).unwrap()).unwrap();
            assert!(same.d_plus.abs() <= 1e-10 && same.d_minus.abs() <= 1e-10);
            assert!(same.delta_l.abs() <= 1e-10);
        }
    }
}

#[test]
fn zero_sigma_drops_the_intrinsic_term() {
    let mut rng = stream(3, &[]);
    let (mut mdp, pi, pi2, _) = instance(&mut rng, 0.9);
    let a = check_corollary1(&mdp, &pi, &pi2, 0.0).unwrap();
    mdp.r_i.iter_mut().for_each(|r| *r = 3.0 * *r - 0.5);
    let b = check_corollary1(&mdp, &pi, &pi2, 0.0).unwrap();
    assert!((a.delta_l - b.delta_l).abs() < 1e-12);
    assert!((a.rhs - b.rhs).abs() < 1e-12);
}

#[test]
fn monte_carlo_agrees_with_the_exact_objective() {
    let mut rng = stream(11, &[]);
    let mdp = TabularMDP::random(4, 3, 0.8, &mut rng);
    let pi = TabularPolicy::random(4, 3, 1.0, &mut rng);
    let sigma = 0.6;
    let exact = exact_objective(&mdp, &pi, sigma).unwrap();
    let r = mdp.total_reward(sigma);
    let draw = |w: &[f64], rng: &mut Rng| {
        let u = uniform(rng);
        let mut acc = 0.0;
        for (i, p) in w.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        w.len() - 1
    };
    let episodes = 40_000;
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..episodes {
        let mut s = draw(&mdp.rho0, &mut rng);
        let (mut g, mut disc) = (0.0, 1.0);
        // 0.8^80 < 1e-7
        for _ in 0..80 {
            let a = draw(pi.row(s), &mut rng);
            g += disc * r[s * mdp.actions + a];
            disc *= mdp.gamma;
            let row = &mdp.p[(s * mdp.actions + a) * mdp.states..(s * mdp.actions + a + 1) * mdp.states];
            s = draw(row, &mut rng);
        }
        sum += g;
        sq += g * g;
    }
    let mean = sum / episodes as f64;
    let se = ((sq / episodes as f64 - mean * mean) / episodes as f64).sqrt();
    assert!((mean - exact).abs() < 4.0 * se, "{mean} vs {exact} (se {se})");
}

#[test]
fn sigma_bound_direct_substitution() {
    let b = sigma_lower_bound(0.05, 0.2, 0.02, 1.0, 0.9, 0.5).unwrap();
    // base = 0.1 − 0.05 = 0.05; kl term = √0.04 · 0.9 · 0.5 / 0.1 = 0.9
    assert!((b.value - 4.75).abs() < 1e-12);
    assert!((b.minus_variant + 4.25).abs() < 1e-12);
    assert!((b.condition_margin + 0.85).abs() < 1e-12);
    assert!(!b.condition_holds);
    assert!(matches!(sigma_lower_bound(0.05, 0.0, 0.02, 1.0, 0.9, 0.5), Err(Error::Precondition(_))));
    assert!(matches!(sigma_lower_bound(0.05, -0.1, 0.02, 1.0, 0.9, 0.5), Err(Error::Precondition(_))));
}

/// Greedy policy on the intrinsic advantage of `pi`.
fn intrinsic_greedy(mdp: &TabularMDP, pi: &TabularPolicy) -> TabularPolicy {
    let adv = mdp.advantages(pi, &mdp.r_i).unwrap();
    let na = mdp.actions;
    let mut p = vec![0.0; mdp.states * na];
    for s in 0..mdp.states {
        let best = (0..na).max_by(|&a, &b| adv[s * na + a].total_cmp(&adv[s * na + b])).unwrap();
        p[s * na + best] = 1.0;
    }
    TabularPolicy::new(mdp.states, na, p).unwrap()
}

#[test]
fn sigma_at_the_bound_delivers_the_improvement() {
    let mut checked = 0;
    for seed in 0..200u64 {
        let mut rng = stream(seed, &[77]);
        let mdp = TabularMDP::random(4, 2, 0.9, &mut rng);
        let pi = TabularPolicy::random(4, 2, 1.0, &mut rng);
        let pi2 = pi.mix(&intrinsic_greedy(&mdp, &pi), 0.05);
        let stats = advantage_statistics(&mdp, &pi, &pi2, 0.0).unwrap();
        if !(stats.a_i_mean > 0.0) {
            continue;
        }
        let target = 0.01;
        // ε depends on σ, so iterate σ ← bound(ε(σ)) to a fixed point
        let mut sigma: f64 = 0.0;
        let mut settled = false;
        for _ in 0..200 {
            let s = advantage_statistics(&mdp, &pi, &pi2, sigma).unwrap();
            let next = sigma_lower_bound(s.a_e_mean, s.a_i_mean, s.eta, target, mdp.gamma, s.epsilon).unwrap().value.max(0.0);
            if next <= sigma * (1.0 + 1e-12) {
                settled = true;
                break;
            }
            sigma = next;
        }
        if !settled || sigma > 1e6 {
            continue;
        }
        let gain = exact_objective(&mdp, &pi2, sigma).unwrap() - exact_objective(&mdp, &pi, sigma).unwrap();
        assert!(gain >= target - 1e-9, "seed {seed}: σ={sigma} gain {gain}");
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} usable instances");
}

#[test]
fn linear_solver_residuals() {
    let mut rng = stream(8, &[]);
    for n in 1..10 {
        let mut a: Vec<f64> = (0..n * n).map(|_| uniform(&mut rng) - 0.5).collect();
        for i in 0..n {
            a[i * n + i] += n as f64;
        }
        let b: Vec<f64> = (0..n).map(|_| uniform(&mut rng)).collect();
        let x = lu_solve(&a, &b).unwrap();
        assert!(residual_norm(&a, &x, &b) < 1e-12);
    }
    assert!(matches!(lu_solve(&[1.0, 2.0, 2.0, 4.0], &[1.0, 1.0]), Err(Error::Singular)));
}
