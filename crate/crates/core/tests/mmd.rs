use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use tace_core::mmd::*;

fn brute_kernel(a: &[f64], b: &[f64], family: KernelFamily, h: f64) -> f64 {
    match family {
        KernelFamily::Gaussian => {
            let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            (-d2 / (2.0 * h * h)).exp()
        }
        KernelFamily::Laplace => {
            let d1: f64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
            (-d1 / h).exp()
        }
    }
}

fn brute_biased(a: &[Vec<f64>], b: &[Vec<f64>], family: KernelFamily, h: f64) -> f64 {
    let mean = |x: &[Vec<f64>], y: &[Vec<f64>]| {
        let mut s = 0.0;
        for p in x {
            for q in y {
                s += brute_kernel(p, q, family, h);
            }
        }
        s / (x.len() * y.len()) as f64
    };
    mean(a, a) + mean(b, b) - 2.0 * mean(a, b)
}

fn brute_unbiased(a: &[Vec<f64>], b: &[Vec<f64>], family: KernelFamily, h: f64) -> f64 {
    let within = |x: &[Vec<f64>]| {
        let mut s = 0.0;
        for (i, p) in x.iter().enumerate() {
            for (j, q) in x.iter().enumerate() {
                if i != j {
                    s += brute_kernel(p, q, family, h);
                }
            }
        }
        s / (x.len() * (x.len() - 1)) as f64
    };
    let mut cross = 0.0;
    for p in a {
        for q in b {
            cross += brute_kernel(p, q, family, h);
        }
    }
    within(a) + within(b) - 2.0 * cross / (a.len() * b.len()) as f64
}

fn feats(points: &[Vec<f64>]) -> TrajectoryFeatures {
    let pts: Vec<FeaturePoint> = points.iter().map(|p| FeaturePoint(p.clone())).collect();
    TrajectoryFeatures::from_points(&pts).unwrap()
}

fn family() -> impl Strategy<Value = KernelFamily> {
    prop_oneof![Just(KernelFamily::Gaussian), Just(KernelFamily::Laplace)]
}

/// Two point clouds of equal dimension with lengths in 2..=50. Coordinates are
/// drawn from a small lattice half the time so repeated points occur.
fn pair_strategy() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    (1usize..=4, any::<bool>()).prop_flat_map(|(dim, lattice)| {
        let coord = if lattice {
            (0i32..4).prop_map(|v| v as f64 * 0.5).boxed()
        } else {
            (-3.0f64..3.0).boxed()
        };
        let point = prop::collection::vec(coord, dim);
        (prop::collection::vec(point.clone(), 2..=50), prop::collection::vec(point, 2..=50))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn estimators_match_double_sums((a, b) in pair_strategy(), fam in family(), h in 0.2f64..4.0) {
        let k = KernelSpec::new(fam, h).unwrap();
        let (fa, fb) = (feats(&a), feats(&b));
        let biased = mmd2_biased(&fa, &fb, &k).unwrap();
        let unbiased = mmd2_unbiased(&fa, &fb, &k).unwrap();
        prop_assert!((biased - brute_biased(&a, &b, fam, h)).abs() < 1e-12);
        prop_assert!((unbiased - brute_unbiased(&a, &b, fam, h)).abs() < 1e-12);
        prop_assert!(biased >= 0.0);
        let swapped = mmd2_biased(&fb, &fa, &k).unwrap();
        prop_assert!((biased - swapped).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_is_symmetric(a in prop::collection::vec(-5.0f64..5.0, 3), b in prop::collection::vec(-5.0f64..5.0, 3), fam in family(), h in 0.1f64..5.0) {
        let k = KernelSpec::new(fam, h).unwrap();
        prop_assert_eq!(kernel_eval(&a, &b, &k).unwrap(), kernel_eval(&b, &a, &k).unwrap());
        prop_assert_eq!(kernel_eval(&a, &a, &k).unwrap(), 1.0);
    }

    #[test]
    fn gram_matrix_is_psd(points in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 2), 1..=8), fam in family(), h in 0.2f64..3.0) {
        let k = KernelSpec::new(fam, h).unwrap();
        let n = points.len();
        let g = DMatrix::from_fn(n, n, |i, j| kernel_eval(&points[i], &points[j], &k).unwrap());
        let eig = SymmetricEigen::new(g);
        prop_assert!(eig.eigenvalues.min() >= -1e-9);
    }

    #[test]
    fn self_distance_is_zero(a in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 2), 1..30), fam in family()) {
        let k = KernelSpec::new(fam, 1.0).unwrap();
        let fa = feats(&a);
        prop_assert!(mmd2_biased(&fa, &fa, &k).unwrap().abs() < 1e-12);
    }

    #[test]
    fn memory_distance_never_increases_as_memory_grows(
        traj in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 2..12),
        memory in prop::collection::vec(prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 2..12), 1..6),
    ) {
        let k = KernelSpec::gaussian(0.5).unwrap();
        let t = feats(&traj);
        let mem: Vec<TrajectoryFeatures> = memory.iter().map(|m| feats(m)).collect();
        let mut prev = f64::INFINITY;
        for i in 1..=mem.len() {
            let refs: Vec<&TrajectoryFeatures> = mem[..i].iter().collect();
            let d = traj_distance_to_memory(&t, &refs, &k, Estimator::Biased).unwrap().unwrap();
            prop_assert!(d <= prev);
            let cached = ReferenceSet::new(&refs, k).unwrap().distance(&t).unwrap().unwrap();
            prop_assert!((cached - d).abs() < 1e-12);
            prev = d;
        }
    }

    #[test]
    fn normalization_invariants(raw in prop::collection::vec(0.0f64..10.0, 2..64), shift in -5.0f64..5.0, scale in 0.01f64..100.0) {
        let b = normalize_distances(&raw).unwrap();
        prop_assume!(!b.degenerate);
        let n = raw.len() as f64;
        let mean = b.normalized.iter().sum::<f64>() / n;
        let var = b.normalized.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        prop_assert!(mean.abs() < 1e-9);
        prop_assert!((var - 1.0).abs() < 1e-6);
        let moved: Vec<f64> = raw.iter().map(|x| x * scale + shift).collect();
        let m = normalize_distances(&moved).unwrap();
        for (x, y) in b.normalized.iter().zip(&m.normalized) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn intrinsic_reward_shape(d in -10.0f64..10.0, e in 0.0f64..5.0, delta in 0.0f64..1.0) {
        let r = intrinsic_reward(d, delta);
        prop_assert!(r <= 0.0);
        prop_assert!(intrinsic_reward(d + e, delta) >= r);
        if d >= delta {
            prop_assert_eq!(r, 0.0);
        }
    }
}

#[test]
fn mmd_closed_forms() {
    let g = KernelSpec::gaussian(1.0).unwrap();
    let a = feats(&[vec![0.0], vec![1.0]]);
    let b = feats(&[vec![0.0], vec![3.0]]);
    // mpmath reference values
    assert!((mmd2_biased(&a, &b, &g).unwrap() - 0.432_332_358_381_693_65).abs() < 1e-15);
    assert!((mmd2_unbiased(&a, &b, &g).unwrap() - -0.258_847_813_492_868_48).abs() < 1e-15);
    let s = KernelSpec::gaussian(2f64.sqrt()).unwrap();
    let v = mmd2_biased(&feats(&[vec![0.0]]), &feats(&[vec![2.0]]), &s).unwrap();
    assert!((v - (2.0 - 2.0 * (-1f64).exp())).abs() < 1e-15);
    let u = mmd2_unbiased(&a, &a, &g).unwrap();
    assert!((u - ((-0.5f64).exp() - 1.0)).abs() < 1e-15);
    let far = mmd2_unbiased(&feats(&[vec![0.0], vec![0.0]]), &feats(&[vec![10.0], vec![10.0]]), &g).unwrap();
    assert!((far - 2.0).abs() < 1e-15);
    assert!(mmd2_unbiased(&feats(&[vec![0.0]]), &a, &g).is_err());
}

#[test]
fn memory_minimum_is_the_closer_reference() {
    let k = KernelSpec::gaussian(1.0).unwrap();
    let t = feats(&[vec![0.0, 0.0], vec![0.5, 0.0]]);
    let near = feats(&[vec![0.0, 0.1], vec![0.4, 0.0]]);
    let far = feats(&[vec![3.0, 3.0], vec![2.0, 3.0]]);
    let d_near = mmd2_biased(&t, &near, &k).unwrap();
    let d_far = mmd2_biased(&t, &far, &k).unwrap();
    assert!(d_far > d_near);
    let got = traj_distance_to_memory(&t, &[&far, &near], &k, Estimator::Biased).unwrap();
    assert_eq!(got, Some(d_near));
    assert_eq!(traj_distance_to_memory(&t, &[], &k, Estimator::Biased).unwrap(), None);
    assert_eq!(traj_distance_to_memory(&t, &[&t], &k, Estimator::Biased).unwrap(), Some(0.0));
}

#[test]
fn normalization_examples() {
    let b = normalize_distances(&[1.0, 3.0]).unwrap();
    assert_eq!(b.normalized, vec![-1.0, 1.0]);
    assert_eq!(b.std, 1.0);
    let c = normalize_distances(&[0.25; 3]).unwrap();
    assert!(c.degenerate);
    assert_eq!(c.normalized, vec![0.0; 3]);
    assert!(normalize_distances(&[]).is_err());
    assert!(normalize_distances(&[1.0, f64::NAN]).is_err());
}

#[test]
fn pair_distance_examples() {
    let x = PairKey::new(&[0.1, 0.2], 3);
    let y = PairKey::new(&[0.3, 0.2], 0);
    let batch = vec![vec![x.clone(), y.clone()], vec![y.clone()], vec![x.clone(), x.clone()]];
    let d = [0.5, 1.5, 2.5];
    assert_eq!(pair_distance(&y, &batch, &d).unwrap(), 1.0);
    assert_eq!(pair_distance(&x, &batch, &d).unwrap(), 1.5);
    assert!(pair_distance(&x, &batch[1..2], &d[1..2]).is_err());
    let single = vec![vec![y.clone()]];
    assert_eq!(pair_distance(&y, &single, &[0.75]).unwrap(), 0.75);
    // a repeated occurrence inside one trajectory counts that trajectory once
    assert_eq!(pair_distances(&batch, &d).unwrap(), vec![1.5, 1.0, 1.0, 1.5, 1.5]);
}

#[test]
fn median_heuristic_small_cloud() {
    let pts: [&[f64]; 3] = [&[0.0], &[1.0], &[3.0]];
    // pairwise distances 1, 2, 3
    assert_eq!(median_heuristic(KernelFamily::Gaussian, pts), 2.0);
    let same: [&[f64]; 2] = [&[1.0, 1.0], &[1.0, 1.0]];
    assert_eq!(median_heuristic(KernelFamily::Laplace, same), 1.0);
}
