//! Hit counts of the exponential construction at radius 1, in double
//! precision up to n = 9 and with 256-bit floats beyond.

use signsum::constructions::{construct_exponential, DEFAULT_RATIO};
use signsum::enumerate::enumerate;
use signsum::precision::PrecisionPolicy;

fn main() -> signsum::error::Result<()> {
    let ext = PrecisionPolicy::extended(256)?;
    for n in [3, 5, 7, 9, 11, 13, 15] {
        let policy = if n <= 9 { PrecisionPolicy::double() } else { ext };
        let cfg = construct_exponential(n, DEFAULT_RATIO, &policy)?;
        let rep = enumerate(&cfg, 1.0, &policy)?;
        println!(
            "n={n:2} [{}] hits {:4} of {:6}  probability {:>6}  nearest miss {}",
            rep.precision,
            rep.hits,
            rep.total,
            rep.probability().to_string(),
            rep.miss_gap_decimal.as_deref().unwrap_or("-")
        );
    }
    // Double precision refuses once the gap drops below its rounding floor.
    match construct_exponential(13, DEFAULT_RATIO, &PrecisionPolicy::double()) {
        Err(e) => println!("double at n=13: {e}"),
        Ok(_) => println!("double at n=13 unexpectedly accepted"),
    }
    Ok(())
}
