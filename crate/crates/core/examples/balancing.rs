//! Every balancer on one configuration, against the exhaustive optimum.

use signsum::balancing::{approximate_point, cluster_and_pair, greedy_signs, parity_balance};
use signsum::config::{CoefficientVector, VectorConfig};
use signsum::constructions::random_unit_config;
use signsum::enumerate::min_signed_norm;
use signsum::precision::PrecisionPolicy;

fn main() -> signsum::error::Result<()> {
    let cfg = random_unit_config(3, 8, 11)?;
    let zeros = CoefficientVector::zeros(cfg.len());
    let (best, _) = min_signed_norm(&cfg, &PrecisionPolicy::double())?;
    println!("random d=3 n=8: exhaustive minimum {best:.6}");
    for r in [greedy_signs(&cfg, &zeros)?, approximate_point(&cfg, &zeros)?] {
        println!("  {:<18} {:.6} <= {:.6}  {}", r.algorithm, r.achieved_norm, r.guarantee, r.signs);
    }
    // n = 8 and d = 3 differ in parity.
    let r = parity_balance(&cfg)?;
    println!(
        "  {} [{}] {:.6} <= {:.6}",
        r.algorithm,
        r.case_taken.map(|c| c.to_string()).unwrap_or_default(),
        r.achieved_norm,
        r.guarantee
    );

    // Near-parallel groups pair off.
    let e = |i: usize| {
        let mut v = vec![0.0; 3];
        v[i] = 1.0;
        v
    };
    let clustered = VectorConfig::unit(vec![e(0), e(0), e(1), e(2)])?;
    let r = cluster_and_pair(&clustered, 1e-3)?;
    println!("clustered d=3 n=4: {:.6} <= {:.6}  {}", r.achieved_norm, r.guarantee, r.signs);

    let lam = CoefficientVector::new(vec![0.3, -0.8, 0.1, 0.0, 0.5, -0.2, 0.9, 0.0])?;
    let r = approximate_point(&cfg, &lam)?;
    println!("rounding a cube point: error {:.6} <= {:.6}", r.achieved_norm, r.guarantee);
    Ok(())
}
