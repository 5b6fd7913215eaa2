//! Chord lengths, the nearest orthonormal basis and plane projections.

use signsum::geometry::{
    chord_length, nearest_orthonormal, orthonormality_residual, project_onto_plane, ChordQuery, PlaneBasis,
};

fn main() -> signsum::error::Result<()> {
    for theta in [0.0, 0.1, 0.5, 1.0, 1.5] {
        let c = chord_length(&ChordQuery::new(2.0, 1.0, theta)?);
        println!("r=2 a=1 theta={theta:.1}: chord {c:.6} (never below 2a = 2)");
    }

    let xs = vec![vec![1.0, 0.01, -0.02], vec![0.015, 1.0, 0.0], vec![-0.01, 0.02, 1.0]];
    let xs: Vec<Vec<f64>> = xs
        .into_iter()
        .map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / n).collect()
        })
        .collect();
    let nb = nearest_orthonormal(&xs, 0.05)?;
    println!(
        "nearest basis: max distance {:.4e}, bound {:.4e}, residual {:.1e}",
        nb.max_distance,
        nb.bound,
        orthonormality_residual(&nb.basis)
    );

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plane = PlaneBasis::new(vec![1.0, 0.0, 0.0], vec![s, s, 0.0])?;
    let (z, perp) = project_onto_plane(&[0.1, 0.2, 0.97], &plane)?;
    println!("projection: in plane {z:?}, orthogonal part {perp:?}");
    Ok(())
}
