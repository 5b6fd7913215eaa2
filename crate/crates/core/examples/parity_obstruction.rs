//! Odd multiplicities of an orthonormal basis keep every signed sum at
//! distance at least sqrt(d); adding one vector breaks the parity.

use signsum::balancing::parity_balance;
use signsum::constructions::construct_orthonormal_multiplicity;
use signsum::enumerate::min_signed_norm;
use signsum::precision::PrecisionPolicy;

fn main() -> signsum::error::Result<()> {
    let policy = PrecisionPolicy::double();
    for ms in [vec![1, 1], vec![3, 1], vec![1, 1, 1], vec![3, 3, 1], vec![1, 1, 1, 1]] {
        let d = ms.len();
        let cfg = construct_orthonormal_multiplicity(d, &ms)?;
        let (min, argmin) = min_signed_norm(&cfg, &policy)?;
        println!("d={d} multiplicities {ms:?}: min {min:.12} = sqrt({d}), e.g. {argmin}");

        let mut more = ms.clone();
        more[0] += 1;
        let cfg = construct_orthonormal_multiplicity(d, &more)?;
        let r = parity_balance(&cfg)?;
        println!(
            "   {more:?}: parity balance reaches {:.6} via {} (guarantee {:.6})",
            r.achieved_norm,
            r.case_taken.map(|c| c.to_string()).unwrap_or_default(),
            r.guarantee
        );
    }
    Ok(())
}
