use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

/// `‖U†U − I‖_F`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let gram = &u.adjoint() * u;
    (&gram - &ComplexMatrix::identity(u.rows())).frobenius_norm()
}

pub fn ensure_unitary(u: &ComplexMatrix, slack: f64) -> Result<()> {
    u.ensure_square()?;
    let defect = unitarity_defect(u);
    if defect > slack {
        return Err(Error::NotUnitary { defect });
    }
    Ok(())
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormalises `vectors` in order (modified Gram–Schmidt, two passes),
/// dropping any that are numerically dependent on their predecessors.
pub fn orthonormalize(vectors: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        let n0 = norm(&w);
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let n = norm(&w);
        if n > 1e-10 * n0.max(1e-300) && n > 1e-14 {
            basis.push(w.into_iter().map(|z| z / n).collect());
        }
    }
    basis
}

/// Unitary `dim × dim` whose leading columns are `columns` (assumed
/// orthonormal), completed with standard basis vectors.
pub fn unitary_completion(columns: &[Vec<Complex64>], dim: usize) -> Result<ComplexMatrix> {
    if columns.iter().any(|c| c.len() != dim) {
        return Err(Error::DimensionMismatch(format!("completion columns must have length {dim}")));
    }
    let mut candidates: Vec<Vec<Complex64>> = columns.to_vec();
    for i in 0..dim {
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        e[i] = Complex64::new(1.0, 0.0);
        candidates.push(e);
    }
    let basis = orthonormalize(&candidates);
    if basis.len() < dim {
        return Err(Error::BadParams("could not complete to an orthonormal basis".into()));
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| basis[j][i]))
}
