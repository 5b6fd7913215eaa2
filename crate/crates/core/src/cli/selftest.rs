use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::balancing::approximate_point;
use crate::config::{dot, CoefficientVector};
use crate::constructions::{
    construct_exponential, construct_orthonormal_multiplicity, random_ball_config, tight_canonical, DEFAULT_RATIO,
};
use crate::enumerate::{enumerate, min_signed_norm};
use crate::geometry::{
    chord_length, nearest_orthonormal, orthonormality_residual, project_onto_plane, ChordQuery, PlaneBasis,
};
use crate::precision::PrecisionPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelftestTarget {
    All,
    Geometry,
    Enumerate,
    Constructions,
    Balancing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

pub fn run_selftest(target: SelftestTarget, seed: u64) -> Vec<Check> {
    use SelftestTarget::*;
    let mut out = Vec::new();
    if matches!(target, All | Geometry) {
        out.extend(geometry(seed));
    }
    if matches!(target, All | Enumerate) {
        out.extend(enumeration());
    }
    if matches!(target, All | Constructions) {
        out.extend(constructions());
    }
    if matches!(target, All | Balancing) {
        out.extend(balancing(seed));
    }
    out
}

fn geometry(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();

    // Line through (0, h) with direction (cos t, sin t) against the circle x^2 + y^2 = r^2.
    let r = 1.0;
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        for j in 0..100 {
            let a = 0.01 + 0.98 * i as f64 / 99.0;
            let t = -1.5 + 3.0 * j as f64 / 99.0;
            let h = (r * r - a * a).sqrt();
            let b = 2.0 * h * t.sin();
            let c = h * h - r * r;
            let oracle = (b * b - 4.0 * c).sqrt();
            let q = ChordQuery::new(r, a, t).expect("valid grid point");
            worst = worst.max((chord_length(&q) - oracle).abs());
        }
    }
    checks.push(check("chord_vs_intersection", worst <= 1e-12, format!("max deviation {worst:e}")));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut bound_ok, mut worst_res) = (true, 0.0f64);
    for _ in 0..200 {
        let d = rng.gen_range(2..=6);
        let scale = rng.gen_range(0.0..0.01);
        let xs: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let mut v: Vec<f64> = (0..d).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
                v[i] = 1.0;
                let n = dot(&v, &v).sqrt();
                v.into_iter().map(|x| x / n).collect()
            })
            .collect();
        let delta = (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .map(|(i, j)| dot(&xs[i], &xs[j]).abs())
            .fold(0.0, f64::max);
        match nearest_orthonormal(&xs, delta) {
            Ok(nb) => {
                bound_ok &= nb.max_distance <= nb.bound + 1e-12;
                worst_res = worst_res.max(orthonormality_residual(&nb.basis));
            }
            Err(_) => bound_ok = false,
        }
    }
    checks.push(check(
        "nearest_orthonormal_bound",
        bound_ok && worst_res <= 1e-10,
        format!("residual {worst_res:e}"),
    ));

    let mut worst_py: f64 = 0.0;
    for _ in 0..200 {
        let d = rng.gen_range(3..=6);
        let u: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let w: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (nu, nw) = (dot(&u, &u).sqrt(), dot(&w, &w).sqrt());
        let u: Vec<f64> = u.iter().map(|x| x / nu).collect();
        let w: Vec<f64> = w.iter().map(|x| x / nw).collect();
        let Ok(plane) = PlaneBasis::new(u, w) else { continue };
        if let Ok((z, p)) = project_onto_plane(&y, &plane) {
            worst_py = worst_py.max((dot(&y, &y) - dot(&z, &z) - dot(&p, &p)).abs());
        }
    }
    checks.push(check("projection_pythagoras", worst_py <= 1e-10, format!("max deviation {worst_py:e}")));
    checks
}

fn enumeration() -> Vec<Check> {
    let policy = PrecisionPolicy::double();
    let mut checks = Vec::new();
    for n in [3usize, 5, 7, 9] {
        let result = construct_exponential(n, DEFAULT_RATIO, &policy).and_then(|c| enumerate(&c, 1.0, &policy));
        let expected = 1u64 << n.div_ceil(2);
        let (ok, detail) = match result {
            Ok(rep) => (rep.hits == expected, format!("{} hits, expected {expected}", rep.hits)),
            Err(e) => (false, e.to_string()),
        };
        checks.push(check(&format!("exponential_hits_n{n}"), ok, detail));
    }
    for m in [vec![1usize, 1], vec![3, 1], vec![1, 1, 1], vec![3, 1, 1, 1]] {
        let d = m.len();
        let result = construct_orthonormal_multiplicity(d, &m).and_then(|c| min_signed_norm(&c, &policy));
        let (ok, detail) = match result {
            Ok((min, _)) => ((min - (d as f64).sqrt()).abs() <= 1e-12, format!("min {min}")),
            Err(e) => (false, e.to_string()),
        };
        checks.push(check(&format!("odd_multiplicity_{m:?}"), ok, detail));
    }
    checks
}

fn constructions() -> Vec<Check> {
    let tight = min_signed_norm(&tight_canonical(), &PrecisionPolicy::double());
    let (ok, detail) = match tight {
        Ok((min, _)) => ((min - 2f64.sqrt()).abs() <= 1e-12, format!("min {min}")),
        Err(e) => (false, e.to_string()),
    };
    vec![check("tight_family_min", ok, detail)]
}

fn balancing(seed: u64) -> Vec<Check> {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut failures = 0;
    for k in 0..100u64 {
        let d = 2 + (k % 4) as usize;
        let n = d + 1 + (k % 7) as usize;
        let Ok(cfg) = random_ball_config(d, n, seed.wrapping_add(k)) else {
            failures += 1;
            continue;
        };
        match approximate_point(&cfg, &CoefficientVector::zeros(n)) {
            Ok(r) => worst = worst.max(r.achieved_norm.powi(2) - d as f64),
            Err(_) => failures += 1,
        }
    }
    vec![check(
        "approximate_point_within_sqrt_d",
        failures == 0 && worst <= 1e-9,
        format!("worst excess {worst:e}, {failures} failures"),
    )]
}
