mod common;

use common::*;
use proptest::prelude::*;
use std::f64::consts::FRAC_PI_2;
use signsum::balancing::{
    approximate_point, cluster_and_pair, eliminate, greedy_in_order, greedy_signs, parity_balance, projection_split,
};
use signsum::config::{CoefficientVector, SignAssignment, VectorConfig};
use signsum::constructions::construct_orthonormal_multiplicity;
use signsum::enumerate::{enumerate, min_signed_norm};
use signsum::geometry::{
    chord_length, distance_to_inner, inner_to_distance, nearest_orthonormal, orthonormality_residual,
    project_onto_plane, ChordQuery, PlaneBasis,
};
use signsum::precision::PrecisionPolicy;
use signsum::search::{maximize_min_norm, SearchSpec};

fn dbl() -> PrecisionPolicy {
    PrecisionPolicy::double()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hits_are_monotone_and_conserved(cfg in unit_config(1..=4, 1..=10), r1 in 0.0f64..3.0, r2 in 0.0f64..3.0) {
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let a = enumerate(&cfg, lo, &dbl()).unwrap();
        let b = enumerate(&cfg, hi, &dbl()).unwrap();
        prop_assert!(a.hits <= b.hits);
        prop_assert_eq!(a.hits + a.misses(), 1u64 << cfg.len());
        let all = enumerate(&cfg, cfg.len() as f64 + 1.0, &dbl()).unwrap();
        prop_assert_eq!(all.hits, 1u64 << cfg.len());
    }

    #[test]
    fn negating_a_vector_changes_nothing(cfg in unit_config(1..=4, 1..=10), i in 0usize..10, r in 0.1f64..2.5) {
        let i = i % cfg.len();
        let a = enumerate(&cfg, r, &dbl()).unwrap();
        let b = enumerate(&cfg.negated(i), r, &dbl()).unwrap();
        prop_assert_eq!(a.hits, b.hits);
        prop_assert!((a.min_norm - b.min_norm).abs() <= 1e-12);
    }

    #[test]
    fn rotation_invariance(cfg in unit_config(2..=5, 1..=10), seed in any::<u64>(), r in 0.1f64..2.5) {
        let q = random_orthogonal(cfg.dim(), seed);
        let rot = cfg.transformed(&q).unwrap();
        let a = enumerate(&cfg, r, &dbl()).unwrap();
        let b = enumerate(&rot, r, &dbl()).unwrap();
        prop_assert!((a.min_norm - b.min_norm).abs() <= 1e-10);
        prop_assert_eq!(a.hits, b.hits);
    }

    #[test]
    fn hits_are_even_for_generic_configs(cfg in unit_config(1..=4, 1..=11), r in 0.05f64..3.0) {
        prop_assert_eq!(enumerate(&cfg, r, &dbl()).unwrap().hits % 2, 0);
    }

    #[test]
    fn engine_agrees_with_brute_force(cfg in unit_config(1..=4, 1..=12), r in 0.0f64..3.0) {
        let rep = enumerate(&cfg, r, &dbl()).unwrap();
        let (min, argmin) = min_signed_norm(&cfg, &dbl()).unwrap();
        prop_assert_eq!(min, rep.min_norm);
        prop_assert_eq!(&argmin, &rep.argmin);
        prop_assert!((min - brute_min(cfg.vectors(), None)).abs() <= 1e-12);
        prop_assert_eq!(rep.hits, brute_hits(cfg.vectors(), r, 1e-12));
        let s = signsum::config::signed_sum(&cfg, &argmin).unwrap();
        prop_assert!((norm(&s) - min).abs() <= 1e-12);
    }

    #[test]
    fn sign_masks_round_trip(n in 1usize..40, raw in any::<u64>()) {
        let mask = raw & ((1u64 << n) - 1);
        let s = SignAssignment::from_mask(mask, n);
        prop_assert_eq!(s.mask(), mask);
        prop_assert_eq!(s.len(), n);
    }

    #[test]
    fn config_file_round_trip(cfg in unit_config(1..=6, 1..=12)) {
        let back = VectorConfig::from_json(&cfg.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn odd_multiplicities_sit_at_sqrt_d(ms in proptest::collection::vec(0usize..3, 1..=4)) {
        let ms: Vec<usize> = ms.into_iter().map(|k| 2 * k + 1).collect();
        prop_assume!(ms.iter().sum::<usize>() <= 13);
        let d = ms.len();
        let cfg = construct_orthonormal_multiplicity(d, &ms).unwrap();
        let (min, _) = min_signed_norm(&cfg, &dbl()).unwrap();
        prop_assert_eq!(min, (d as f64).sqrt());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn chord_at_least_twice_offset(r in 0.1f64..10.0, frac in 0.05f64..0.95, theta in -FRAC_PI_2..FRAC_PI_2) {
        let a = r * frac;
        let c = chord_length(&ChordQuery::new(r, a, theta).unwrap());
        prop_assert!(c >= 2.0 * a - 1e-12);
        if (c - 2.0 * a).abs() < 1e-12 {
            prop_assert!(theta.abs() < 1e-6);
        }
    }

    #[test]
    fn chord_matches_line_circle_intersection(r in 0.1f64..10.0, frac in 0.01f64..0.99, theta in -FRAC_PI_2..FRAC_PI_2) {
        let a = r * frac;
        // Point (0, h), direction (cos t, sin t): |p + s dir|^2 = r^2 is s^2 + 2 h sin(t) s + h^2 - r^2 = 0.
        let h = (r * r - a * a).sqrt();
        let (b, c) = (2.0 * h * theta.sin(), h * h - r * r);
        let oracle = (b * b - 4.0 * c).sqrt();
        let got = chord_length(&ChordQuery::new(r, a, theta).unwrap());
        prop_assert!((got - oracle).abs() <= 1e-12 * r.max(1.0));
    }

    #[test]
    fn cosine_fact_round_trip(x in 0.0f64..=2.0) {
        let back = inner_to_distance(distance_to_inner(x).unwrap()).unwrap();
        prop_assert!((back - x).abs() <= 1e-12);
    }

    #[test]
    fn projection_is_pythagorean(seed in any::<u64>(), d in 3usize..7) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let u = gaussian_unit(d, &mut rng);
        let w = gaussian_unit(d, &mut rng);
        let y = gaussian_unit(d, &mut rng);
        let plane = PlaneBasis::new(u, w);
        prop_assume!(plane.is_ok());
        let (z, p) = project_onto_plane(&y, &plane.unwrap()).unwrap();
        let lhs = norm(&y).powi(2);
        prop_assert!((lhs - norm(&z).powi(2) - norm(&p).powi(2)).abs() <= 1e-10);
    }
}

fn near_orthonormal(d: usize, scale: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    (0..d)
        .map(|i| {
            let mut v: Vec<f64> = (0..d).map(|_| scale * rand::Rng::gen_range(&mut rng, -1.0..1.0)).collect();
            v[i] = 1.0;
            unit(v)
        })
        .collect()
}

fn max_inner(xs: &[Vec<f64>]) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            m = m.max(xs[i].iter().zip(&xs[j]).map(|(a, b)| a * b).sum::<f64>().abs());
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nearest_orthonormal_is_idempotent(d in 1usize..7, seed in any::<u64>()) {
        let q = random_orthogonal(d, seed);
        let cols: Vec<Vec<f64>> = (0..d).map(|j| (0..d).map(|i| q[i][j]).collect()).collect();
        let nb = nearest_orthonormal(&cols, 1e-12).unwrap();
        for (a, b) in nb.basis.iter().zip(&cols) {
            for (x, y) in a.iter().zip(b) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn nearest_orthonormal_is_equivariant(d in 2usize..7, scale in 0.0f64..0.01, seed in any::<u64>()) {
        let xs = near_orthonormal(d, scale, seed);
        let delta = max_inner(&xs);
        let q = random_orthogonal(d, seed ^ 0x9e37);
        let apply = |v: &Vec<f64>| -> Vec<f64> { q.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect() };
        let qxs: Vec<Vec<f64>> = xs.iter().map(apply).collect();
        let a = nearest_orthonormal(&xs, delta).unwrap();
        let b = nearest_orthonormal(&qxs, delta + 1e-15).unwrap();
        prop_assert!(a.max_distance <= a.bound + 1e-12);
        prop_assert!(orthonormality_residual(&a.basis) <= 1e-10);
        for (e, qe) in a.basis.iter().zip(&b.basis) {
            let rotated = apply(e);
            for (x, y) in rotated.iter().zip(qe) {
                prop_assert!((x - y).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn greedy_prefix_law(cfg in ball_config(1..=5, 1..=14), seed in any::<u64>()) {
        let lam = {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            CoefficientVector::new((0..cfg.len()).map(|_| rand::Rng::gen_range(&mut rng, -1.0..=1.0)).collect()).unwrap()
        };
        let order: Vec<usize> = (0..cfg.len()).collect();
        let t = greedy_in_order(&cfg, &lam, &order, None).unwrap();
        for (m, q) in t.prefix_sq.iter().enumerate() {
            prop_assert!(*q <= (m + 1) as f64 + 1e-9, "step {}: {}", m + 1, q);
        }
    }

    #[test]
    fn elimination_contract(cfg in ball_config(1..=5, 1..=20), seed in any::<u64>(), extra in 0usize..3) {
        let n = cfg.len();
        let d = cfg.dim();
        let k = d + extra;
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let lam: Vec<f64> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, -1.0..=1.0)).collect();
        let res = eliminate(&cfg, &CoefficientVector::new(lam.clone()).unwrap(), k).unwrap();
        let before = weighted_sum(&cfg, &lam);
        let after = weighted_sum(&cfg, res.coefficients.values());
        let diff: Vec<f64> = before.iter().zip(&after).map(|(a, b)| a - b).collect();
        prop_assert!(norm(&diff) <= 1e-10 * n as f64);
        let fractional = res.coefficients.values().iter().filter(|x| x.abs() < 1.0).count();
        prop_assert!(fractional <= k);
        prop_assert!(res.coefficients.values().iter().all(|x| (-1.0..=1.0).contains(x)));
        for (i, &l) in lam.iter().enumerate() {
            if l.abs() == 1.0 {
                prop_assert_eq!(res.coefficients.get(i), l);
            }
        }
    }

    #[test]
    fn balancers_are_sound(cfg in unit_config(1..=4, 1..=12), seed in any::<u64>(), zero in any::<bool>()) {
        let n = cfg.len();
        let lam: Vec<f64> = if zero {
            vec![0.0; n]
        } else {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            (0..n).map(|_| rand::Rng::gen_range(&mut rng, -1.0..=1.0)).collect()
        };
        let best = brute_min(cfg.vectors(), Some(&lam));
        let l = CoefficientVector::new(lam).unwrap();
        let mut reports = vec![greedy_signs(&cfg, &l).unwrap(), approximate_point(&cfg, &l).unwrap()];
        if zero && n % 2 != cfg.dim() % 2 {
            reports.push(parity_balance(&cfg).unwrap());
            if let Ok(r) = cluster_and_pair(&cfg, 1e-3) {
                reports.push(r);
            }
        }
        for r in reports {
            prop_assert!(r.achieved_norm >= best - 1e-12, "{} below the minimum", r.algorithm);
            prop_assert!(r.meets_guarantee(), "{}: {} > {}", r.algorithm, r.achieved_norm, r.guarantee);
        }
    }

    #[test]
    fn large_coefficient_improves_beck(cfg in unit_config(1..=5, 1..=5), seed in any::<u64>(), delta in 0.05f64..0.95) {
        let d = cfg.dim();
        let cfg = cfg.select(&(0..cfg.len().min(d)).collect::<Vec<_>>()).unwrap();
        let n = cfg.len();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let mut lam: Vec<f64> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, -delta..=delta)).collect();
        let big = rand::Rng::gen_range(&mut rng, 0..n);
        let mag = rand::Rng::gen_range(&mut rng, delta..=1.0);
        lam[big] = if rand::Rng::gen::<bool>(&mut rng) { mag } else { -mag };
        let r = approximate_point(&cfg, &CoefficientVector::new(lam).unwrap()).unwrap();
        prop_assert!(r.achieved_norm.powi(2) <= n as f64 - delta + 1e-9);
    }

    #[test]
    fn projection_split_meets_guarantee(seed in any::<u64>(), extra in 0usize..4) {
        // Pair in the first two coordinates, the rest almost orthogonal to it.
        let d = 4;
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let t: f64 = rand::Rng::gen_range(&mut rng, 0.65..1.35);
        let mut vs = vec![vec![1.0, 0.0, 0.0, 0.0], vec![t.cos(), t.sin(), 0.0, 0.0]];
        for _ in 0..extra {
            let mut v = gaussian_unit(d, &mut rng);
            v[0] *= 1e-4;
            v[1] *= 1e-4;
            vs.push(unit(v));
        }
        let cfg = VectorConfig::unit(vs).unwrap();
        let lam: Vec<f64> = (0..cfg.len()).map(|_| rand::Rng::gen_range(&mut rng, -1.0..=1.0)).collect();
        let best = brute_min(cfg.vectors(), Some(&lam));
        let r = projection_split(&cfg, 0, 1, &CoefficientVector::new(lam).unwrap(), 1e-3).unwrap();
        prop_assert!(r.achieved_norm >= best - 1e-12);
        prop_assert!(r.meets_guarantee());
    }
}

fn weighted_sum(cfg: &VectorConfig, lam: &[f64]) -> Vec<f64> {
    let mut s = vec![0.0; cfg.dim()];
    for (v, l) in cfg.vectors().iter().zip(lam) {
        for (a, b) in s.iter_mut().zip(v) {
            *a += l * b;
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn search_is_verified_monotone_and_bounded(d in 1usize..4, n in 1usize..7, seed in any::<u64>()) {
        let spec = SearchSpec::new(d, n, 4, 300, seed);
        let r = maximize_min_norm(&spec).unwrap();
        let (exact, _) = min_signed_norm(&r.best_config, &dbl()).unwrap();
        prop_assert!((r.best_value - exact).abs() <= 1e-12);
        prop_assert!(r.best_value <= (d as f64).sqrt() + 1e-9);
        for h in &r.history {
            prop_assert!(h.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}

#[test]
fn search_ignores_worker_count() {
    let spec = SearchSpec::new(3, 5, 8, 400, 99);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| maximize_min_norm(&spec).unwrap());
    let b = many.install(|| maximize_min_norm(&spec).unwrap());
    assert_eq!(a, b);
}

#[test]
fn enumeration_ignores_worker_count() {
    let cfg = seeded_unit_config(3, 16, 5);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| enumerate(&cfg, 1.5, &dbl()).unwrap());
    let b = many.install(|| enumerate(&cfg, 1.5, &dbl()).unwrap());
    assert_eq!(a, b);
}

#[test]
fn dichotomy_at_experiment_epsilon_is_vacuous() {
    // zeta >= 1/2 leaves no inner product strictly between zeta and 1 - zeta.
    let zeta = signsum::balancing::zeta_for(1e-4, 3);
    assert!(zeta > 0.5, "{zeta}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oblique_tuples_are_not_falsified(seed in any::<u64>(), structured in any::<bool>(), c in 0.051f64..0.949, tilt in 0.0f64..1.6) {
        // Four unit vectors in R^3 with a pair whose |inner| lies in (0.05, 0.95).
        let cfg = if structured {
            let s = (1.0 - c * c).sqrt();
            VectorConfig::unit(vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![c, s * tilt.cos(), s * tilt.sin()],
            ])
            .unwrap()
        } else {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            let u = gaussian_unit(3, &mut rng);
            let w = loop {
                let w = gaussian_unit(3, &mut rng);
                let ip: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
                if ip.abs() > 0.05 && ip.abs() < 0.95 {
                    break w;
                }
            };
            VectorConfig::unit(vec![u, w, gaussian_unit(3, &mut rng), gaussian_unit(3, &mut rng)]).unwrap()
        };
        let out = signsum::balancing::approximation_falsifier(&cfg, 3.0 - 1e-4, 24, seed).unwrap();
        prop_assert!(out.witness.is_none(), "g = {}", out.best_value);
    }
}
