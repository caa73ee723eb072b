//! Seeded random sampling of vectors, unitaries, states and simplex points.
//!
//! Every randomised check in the workspace draws from a [`ChaCha8Rng`] built by
//! [`seeded`], so runs are reproducible from a single `u64`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{orthonormalize, ComplexMatrix};

pub const DEFAULT_SEED: u64 = 0x5eed_2009;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector in `C^d`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| gaussian_complex(rng)).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Haar-random unitary (Gram–Schmidt on a Ginibre matrix).
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    loop {
        let cols: Vec<Vec<Complex64>> = (0..d).map(|_| (0..d).map(|_| gaussian_complex(rng)).collect()).collect();
        let basis = orthonormalize(&cols);
        if basis.len() == d {
            return ComplexMatrix::from_fn(d, d, |i, j| basis[j][i]);
        }
    }
}

/// Random Hermitian matrix with Gaussian entries.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| gaussian_complex(rng));
    g.hermitian_part()
}

/// Random full-rank density matrix `G G† / tr(G G†)`.
pub fn density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| gaussian_complex(rng));
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    w.scale_real(1.0 / tr).hermitian_part()
}

/// Uniform point on the probability simplex with `n` vertices.
pub fn simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let s: f64 = e.iter().sum();
        if s > 0.0 && s.is_finite() {
            return e.into_iter().map(|x| x / s).collect();
        }
    }
}

/// All `(k₁, …, k_n)` with `kᵢ ≥ 0` and `Σkᵢ = grid`, in ascending
/// lexicographic order. The matching simplex point is `kᵢ / grid`.
pub fn simplex_lattice(n: usize, grid: usize) -> Vec<Vec<usize>> {
    fn fill(prefix: &mut Vec<usize>, n: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            fill(prefix, n, left - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        fill(&mut Vec::with_capacity(n), n, grid, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::unitarity_defect;

    #[test]
    fn samples_satisfy_their_invariants() {
        let mut rng = seeded(7);
        for d in 1..6 {
            let v = unit_vector(&mut rng, d);
            assert!((v.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(unitarity_defect(&unitary(&mut rng, d)) < 1e-12);
            let rho = density(&mut rng, d);
            assert!((rho.trace().re - 1.0).abs() < 1e-12);
            let q = simplex(&mut rng, d);
            assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12 && q.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn lattice_counts_and_order() {
        assert_eq!(simplex_lattice(3, 10).len(), 66);
        assert_eq!(simplex_lattice(5, 20).len(), 10626);
        let l = simplex_lattice(3, 2);
        assert_eq!(l.first().unwrap(), &vec![0, 0, 2]);
        assert_eq!(l.last().unwrap(), &vec![2, 0, 0]);
        assert!(l.windows(2).all(|w| w[0] < w[1]));
        assert!(l.iter().all(|p| p.iter().sum::<usize>() == 2));
    }

    #[test]
    fn seeding_is_reproducible() {
        let a = unit_vector(&mut seeded(3), 4);
        let b = unit_vector(&mut seeded(3), 4);
        assert_eq!(a, b);
    }
}
