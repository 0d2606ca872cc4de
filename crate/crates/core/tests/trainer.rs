use std::collections::BTreeMap;

use tace_core::env::*;
use tace_core::mmd::{PairKey, pair_distances};
use tace_core::multiagent::TcmaeTrainer;
use tace_core::nn::CategoricalPolicy;
use tace_core::rng::stream;
use tace_core::trainer::*;

fn rollouts(env: &GridWorld, seed: u64, n: usize) -> Vec<Trajectory> {
    let policy = CategoricalPolicy::init(OBS_DIM, Action::COUNT, &mut stream(seed, &[42]));
    collect_rollouts(env, &policy, n, seed, 0, &Sequential).unwrap()
}

fn gaussian(a: &[f64], b: &[f64], h: f64) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-d2 / (2.0 * h * h)).exp()
}

fn brute_mmd2(a: &[Vec<f64>], b: &[Vec<f64>], h: f64) -> f64 {
    let mean = |x: &[Vec<f64>], y: &[Vec<f64>]| {
        x.iter().flat_map(|p| y.iter().map(move |q| gaussian(p, q, h))).sum::<f64>() / (x.len() * y.len()) as f64
    };
    mean(a, a) + mean(b, b) - 2.0 * mean(a, b)
}

fn coords(env: &GridWorld, t: &Trajectory) -> Vec<Vec<f64>> {
    t.steps
        .iter()
        .map(|s| vec![s.pos.x as f64 / env.width() as f64, s.pos.y as f64 / env.height() as f64])
        .collect()
}

#[test]
fn pair_distances_match_membership_scan() {
    let env = open_two_goal(5, 5, 30);
    let batch = rollouts(&env, 3, 8);
    let fmap = FeatureMap { width: 5, height: 5, mode: FeatureMode::Coords };
    let keys: Vec<Vec<PairKey>> = batch.iter().map(|t| fmap.pair_keys(t)).collect();
    let dists: Vec<f64> = (0..8).map(|i| 0.1 + i as f64 * 0.37).collect();
    let got = pair_distances(&keys, &dists).unwrap();
    let mut k = 0;
    for t in &batch {
        for s in &t.steps {
            let members: Vec<f64> = batch
                .iter()
                .zip(&dists)
                .filter(|(u, _)| u.steps.iter().any(|o| o.pos == s.pos && o.action == s.action))
                .map(|(_, d)| *d)
                .collect();
            let want = members.iter().sum::<f64>() / members.len() as f64;
            assert!((got[k] - want).abs() < 1e-12);
            k += 1;
        }
    }
    assert_eq!(k, got.len());
}

#[test]
fn annotation_matches_a_from_scratch_recomputation() {
    let env = open_two_goal(10, 10, 40);
    let batch_trajs = rollouts(&env, 1, 8);
    let memory = rollouts(&env, 2, 5);
    let h = 0.3;
    let delta = 0.7;
    let cfg = IntrinsicConfig { bandwidth: Some(h), delta, ..IntrinsicConfig::default() };
    let fmap = FeatureMap { width: 10, height: 10, mode: FeatureMode::Coords };
    let mut batch = OnPolicyBatch::new(batch_trajs.clone());
    let refs: Vec<&Trajectory> = memory.iter().collect();
    annotate_intrinsic(&mut batch, &refs, fmap, &cfg).unwrap();

    let mem: Vec<Vec<Vec<f64>>> = memory.iter().map(|t| coords(&env, t)).collect();
    let traj_d: Vec<f64> = batch_trajs
        .iter()
        .map(|t| {
            let c = coords(&env, t);
            mem.iter().map(|m| brute_mmd2(&c, m, h)).fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut raw = Vec::new();
    for t in &batch_trajs {
        for s in &t.steps {
            let members: Vec<f64> = batch_trajs
                .iter()
                .zip(&traj_d)
                .filter(|(u, _)| u.steps.iter().any(|o| o.pos == s.pos && o.action == s.action))
                .map(|(_, d)| *d)
                .collect();
            raw.push(members.iter().sum::<f64>() / members.len() as f64);
        }
    }
    let n = raw.len() as f64;
    let mean = raw.iter().sum::<f64>() / n;
    let std = (raw.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n).sqrt();
    let want: Vec<f64> = raw.iter().map(|d| ((d - mean) / std - delta).min(0.0)).collect();
    let got: Vec<f64> = batch.r_i.iter().flatten().copied().collect();
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-9, "{g} vs {w}");
    }
    let ann = batch.intrinsic.as_ref().unwrap();
    for (a, b) in ann.traj_distances.iter().zip(&traj_d) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!(got.iter().all(|r| *r <= 0.0));
}

#[test]
fn empty_memory_and_exact_copies() {
    let env = open_two_goal(10, 10, 40);
    let trajs = rollouts(&env, 4, 4);
    let fmap = FeatureMap { width: 10, height: 10, mode: FeatureMode::Coords };
    let cfg = IntrinsicConfig::default();
    let mut batch = OnPolicyBatch::new(trajs.clone());
    annotate_intrinsic(&mut batch, &[], fmap, &cfg).unwrap();
    assert!(batch.intrinsic.is_none());
    assert!(batch.r_i.iter().flatten().all(|r| *r == 0.0));

    // every batch trajectory identical to its memory copy
    let one = vec![trajs[0].clone(); 4];
    let mut batch = OnPolicyBatch::new(one.clone());
    let refs: Vec<&Trajectory> = one.iter().collect();
    annotate_intrinsic(&mut batch, &refs, fmap, &cfg).unwrap();
    let ann = batch.intrinsic.as_ref().unwrap();
    assert!(ann.distances.degenerate);
    assert!(ann.traj_distances.iter().all(|d| d.abs() < 1e-12));
    assert!(batch.r_i.iter().flatten().all(|r| *r == -cfg.delta));
}

#[test]
fn returns_examples() {
    assert_eq!(discounted_returns(&[-1.0, -1.0], 0.5), vec![-1.5, -1.0]);
    assert_eq!(discounted_returns(&[0.0, 0.0, 0.0], 0.9), vec![0.0; 3]);
    // λ = 1 with zero values gives discounted returns
    let a = gae(&[0.0, 0.0, 1.0], &[0.0; 3], 0.0, 0.9, 1.0).unwrap();
    for (x, y) in a.iter().zip([0.81, 0.9, 1.0]) {
        assert!((x - y).abs() < 1e-15);
    }
    // λ = 0 gives one-step TD errors, bootstrapping the final value
    let b = gae(&[1.0, 2.0], &[0.5, 0.25], 4.0, 0.5, 0.0).unwrap();
    assert_eq!(b, vec![1.0 + 0.5 * 0.25 - 0.5, 2.0 + 0.5 * 4.0 - 0.25]);
    assert!(gae(&[1.0], &[0.0, 0.0], 0.0, 0.9, 0.95).is_err());
}

#[test]
fn sigma_follows_the_scaling_rules() {
    let cfg = SigmaConfig { init: 1.0, epsilon: Some(0.1), ..SigmaConfig::default() };
    let mut c = SigmaController::new(cfg);
    let streams: [(&[f64], bool, f64); 7] = [
        (&[0.05, 0.5], false, 1.05),
        (&[0.3, 0.5], false, 0.98),
        (&[0.15, 0.5], false, 1.0),
        (&[0.1, 0.9], true, 1.05 * 1.2),
        (&[0.2, 0.2], true, 0.98 * 1.2),
        (&[0.19, 0.4], true, 1.2),
        (&[], false, 1.0),
    ];
    let mut expected = 1.0;
    for (d, same, factor) in streams {
        let f = c.update(Some(d), same);
        assert_eq!(f, factor);
        expected *= factor;
        assert_eq!(c.sigma, expected);
    }
    assert_eq!(c.update(None, true), 1.0);
    assert_eq!(c.sigma, expected);
    c.reset();
    assert_eq!(c.sigma, 1.0);

    let mut capped = SigmaController::new(SigmaConfig { max: Some(1.1), ..cfg });
    capped.update(Some(&[0.0]), true);
    assert_eq!(capped.sigma, 1.1);

    // ε derived from the first batch: 0.1 × median
    let mut derived = SigmaController::new(SigmaConfig::default());
    derived.update(Some(&[1.0, 3.0, 2.0]), false);
    assert_eq!(derived.epsilon, Some(0.2));
    assert_eq!(derived.sigma, 0.5 * 0.98);
}

#[test]
fn memory_is_fifo_per_key() {
    let env = open_two_goal(5, 5, 10);
    let trajs = rollouts(&env, 9, 8);
    let mut m = ReplayMemory::new(3);
    for t in &trajs {
        m.push(1, t.clone());
    }
    m.push(2, trajs[0].clone());
    assert_eq!(m.len_for(1), 3);
    assert_eq!(m.len(), 4);
    let kept: Vec<u64> = m.get(1).map(|t| t.episode_id).collect();
    assert_eq!(kept, vec![trajs[5].episode_id, trajs[6].episode_id, trajs[7].episode_id]);
    let mut r = ReplayMemory::new(5);
    memory_refresh(&mut r, 0, &trajs);
    assert_eq!(r.get(0).map(|t| t.episode_id).collect::<Vec<_>>(), trajs[3..].iter().map(|t| t.episode_id).collect::<Vec<_>>());
}

#[test]
fn convergence_needs_ninety_percent_of_the_window() {
    let cfg = ConvergenceConfig::default();
    let mut recent = vec![Some(1); 45];
    recent.extend([None; 5]);
    assert_eq!(detect_convergence(&recent, &cfg), Some(1));
    recent[0] = Some(0);
    assert_eq!(detect_convergence(&recent, &cfg), None);
    assert_eq!(detect_convergence(&recent[..40], &cfg), None);
}

fn small_cfg(seed: u64) -> TrainConfig {
    TrainConfig { seed, iterations: 10, epochs_per_iter: 5, ..TrainConfig::default() }
}

#[test]
fn runs_are_deterministic_per_seed() {
    let run = |seed| {
        let mut t = TcppoTrainer::new(open_two_goal(10, 10, 30), small_cfg(seed)).unwrap();
        let mut rets = Vec::new();
        t.run(&Sequential, |m, _| rets.push(m.mean_extrinsic_return.to_bits())).unwrap();
        (t.learner.fingerprint(), rets)
    };
    assert_eq!(run(5), run(5));
    assert_ne!(run(5).0, run(6).0);
}

#[test]
fn empty_memory_and_single_agent_reduce_to_ppo() {
    let base = TrainConfig { goal_count: 1, ..small_cfg(12) };
    let world = open_two_goal(12, 12, 40);

    let mut ppo = TcppoTrainer::new(world.clone(), base.vanilla()).unwrap();
    ppo.run(&Sequential, |_, _| {}).unwrap();
    let mut tc = TcppoTrainer::new(world.clone(), base.clone()).unwrap();
    tc.run(&Sequential, |_, b| assert!(b.intrinsic.is_none())).unwrap();
    assert!(tc.memory.is_empty());
    assert_eq!(tc.learner.fingerprint(), ppo.learner.fingerprint());

    let single = MpeGrid::new(world, vec![Cell::new(0, 0)], true).unwrap();
    let mut ma = TcmaeTrainer::new(single, base).unwrap();
    ma.run(&Sequential, |_, _| {}).unwrap();
    assert_eq!(ma.team.agents[0].learner.fingerprint(), ppo.learner.fingerprint());
}

#[test]
fn phase_loop_stores_the_converged_suboptimal_goal() {
    // an 8×1 corridor where only the suboptimal goal is within reach
    let world = GridWorld::new(
        8,
        1,
        &[],
        Cell::new(0, 0),
        vec![
            Goal { id: 0, cell: Cell::new(7, 0), reward: 6.0 },
            Goal { id: 1, cell: Cell::new(1, 0), reward: 1.0 },
        ],
        4,
    )
    .unwrap();
    let cfg = TrainConfig { iterations: 40, epochs_per_iter: 3, policy_lr: 3e-3, ..small_cfg(1) };
    let mut t = TcppoTrainer::new(world, cfg).unwrap();
    let mut events = Vec::new();
    t.run(&Sequential, |m, _| events.extend(m.event)).unwrap();
    assert_eq!(events.first(), Some(&PhaseEvent::StoredSuboptimal { goal: 1 }));
    assert_eq!(t.memory.len_for(1), 5);
    assert!(t.memory.get(1).all(|m| m.episode_goal == Some(1)));
    assert_eq!(t.phase(), 1);
}

#[test]
fn visitation_counts_whole_paths() {
    let env = open_two_goal(6, 6, 20);
    let trajs = rollouts(&env, 2, 3);
    let counts = trajectory_visitation(6, 6, &trajs);
    let total: usize = trajs.iter().map(|t| t.len() + 1).sum();
    assert_eq!(counts.iter().sum::<u64>() as usize, total);
    let mut by_cell: BTreeMap<(i32, i32), u64> = BTreeMap::new();
    for t in &trajs {
        for c in t.path() {
            *by_cell.entry((c.x, c.y)).or_default() += 1;
        }
    }
    for ((x, y), n) in by_cell {
        assert_eq!(counts[(y * 6 + x) as usize], n);
    }
}
