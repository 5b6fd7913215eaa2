//! Worst approximation error of a planar pair as the angle between its
//! vectors shrinks from orthogonal.

use signsum::balancing::approximation_falsifier;
use signsum::config::VectorConfig;

fn main() -> signsum::error::Result<()> {
    for step in 0..=9 {
        let delta = step as f64 / 10.0;
        let cfg = VectorConfig::unit(vec![vec![1.0, 0.0], vec![delta, (1.0 - delta * delta).sqrt()]])?;
        let out = approximation_falsifier(&cfg, 2.0, 100, 1)?;
        println!(
            "<u,w> = {delta:.1}: worst squared error {:.6}, bound 2 - delta^2 = {:.6}",
            out.best_value,
            2.0 - delta * delta
        );
    }
    Ok(())
}
