//! Hill climbing recovers the tight value sqrt(2) for four vectors in R^3.

use signsum::search::{maximize_min_norm, SearchSpec};

fn main() -> signsum::error::Result<()> {
    let spec = SearchSpec::new(3, 4, 200, 5000, 7);
    let r = maximize_min_norm(&spec)?;
    println!("best min signed norm: {:.9}", r.best_value);
    println!("gap to sqrt(2): {:.3e}", (r.best_value - 2f64.sqrt()).abs());
    println!("restart: {}", r.best_restart);
    for v in r.best_config.vectors() {
        println!("  {:?}", v);
    }
    Ok(())
}
