use num_complex::Complex64;
use rayon::prelude::*;

use crate::sampling::{seeded, simplex_lattice, unit_vector};
use crate::Result;

use super::operator::ElementaryOperator;

const CHUNK: usize = 4096;

/// Smallest eigenvalue of `Φ(|x⟩⟨x|)` over `probes` Haar-random unit vectors.
/// A negative value refutes positivity; a nonnegative one proves nothing.
/// The result depends only on `seed`, not on the thread count.
pub fn sampled_min_eigenvalue(phi: &ElementaryOperator, probes: usize, seed: u64) -> Result<f64> {
    let chunks = probes.div_ceil(CHUNK);
    let mins: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seeded(seed ^ (c as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let count = CHUNK.min(probes - c * CHUNK);
            let mut m = f64::INFINITY;
            for _ in 0..count {
                m = m.min(phi.probe_min_eigenvalue(&unit_vector(&mut rng, phi.dim_in()))?);
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    Ok(mins.into_iter().fold(f64::INFINITY, f64::min))
}

/// Same bound over normalized nonnegative real vectors `(√k₁, …, √k_d)` with
/// `Σkᵢ = resolution`.
pub fn grid_min_eigenvalue(phi: &ElementaryOperator, resolution: usize) -> Result<f64> {
    let points = simplex_lattice(phi.dim_in(), resolution.max(1));
    let mins: Vec<f64> = points
        .par_iter()
        .map(|k| {
            let norm = (resolution.max(1) as f64).sqrt();
            let x: Vec<Complex64> = k.iter().map(|&ki| Complex64::new((ki as f64).sqrt() / norm, 0.0)).collect();
            phi.probe_min_eigenvalue(&x)
        })
        .collect::<Result<_>>()?;
    Ok(mins.into_iter().fold(f64::INFINITY, f64::min))
}
