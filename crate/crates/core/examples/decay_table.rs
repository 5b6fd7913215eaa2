//! Hit probability against n for the three families, as printed by `signsum decay`.

use signsum::cli::{decay_table, Family};
use signsum::precision::PrecisionPolicy;

fn main() -> signsum::error::Result<()> {
    let policy = PrecisionPolicy::double();
    let tables = [
        (Family::Exponential, vec![3, 5, 7, 9], 2),
        (Family::Ortho, vec![2, 4, 6], 2),
        (Family::Random, vec![1, 3, 5, 7, 9, 11], 2),
    ];
    for (family, ns, d) in tables {
        for row in decay_table(family, &ns, None, d, 25, 3, &policy)? {
            println!(
                "{:<12} n={:2} hits {:6} probability {:.6} ({})",
                row.family, row.n, row.hits, row.probability, row.probability_exact
            );
        }
    }
    Ok(())
}
