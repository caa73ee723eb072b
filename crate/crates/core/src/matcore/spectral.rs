use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

/// Slack used by positivity and equality checks.
///
/// `psd_slack` is relative to `max(1, λ_max)`; `equality_slack` is relative to
/// `max(1, ‖m‖_F)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub psd_slack: f64,
    pub equality_slack: f64,
}

impl Tolerance {
    pub const DEFAULT_PSD_SLACK: f64 = 1e-9;
    pub const DEFAULT_EQUALITY_SLACK: f64 = 1e-10;

    pub fn new(psd_slack: f64, equality_slack: f64) -> Result<Self> {
        if !(psd_slack >= 0.0 && equality_slack >= 0.0) || !psd_slack.is_finite() || !equality_slack.is_finite() {
            return Err(Error::BadParams(format!(
                "tolerances must be finite and nonnegative (psd {psd_slack}, equality {equality_slack})"
            )));
        }
        Ok(Self { psd_slack, equality_slack })
    }

    /// Same equality slack, different PSD slack.
    pub fn with_psd_slack(self, psd_slack: f64) -> Result<Self> {
        Self::new(psd_slack, self.equality_slack)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { psd_slack: Self::DEFAULT_PSD_SLACK, equality_slack: Self::DEFAULT_EQUALITY_SLACK }
    }
}

/// Eigen-decomposition `M = V Λ V†` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let lambda: Vec<Complex64> = self.eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)).collect();
        let vl = v.try_mul(&ComplexMatrix::from_diag(&lambda)).expect("square spectrum");
        vl.try_mul(&v.adjoint()).expect("square spectrum")
    }
}

/// Outcome of [`is_psd`]; the minimum eigenvalue is always reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub psd: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

fn hermitized(m: &ComplexMatrix, tol: &Tolerance) -> Result<DMatrix<Complex64>> {
    m.ensure_square()?;
    let defect = m.hermitian_defect();
    if defect > tol.equality_slack {
        return Err(Error::NotHermitian { defect });
    }
    Ok(m.hermitian_part().to_nalgebra())
}

/// Full eigen-decomposition of a Hermitian matrix (symmetrised first).
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianSpectrum> {
    eig_hermitian_with(m, &Tolerance::default())
}

pub fn eig_hermitian_with(m: &ComplexMatrix, tol: &Tolerance) -> Result<HermitianSpectrum> {
    let h = hermitized(m, tol)?;
    let n = h.nrows();
    if n == 0 {
        return Ok(HermitianSpectrum { eigenvalues: vec![], eigenvectors: ComplexMatrix::zeros(0, 0) });
    }
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianSpectrum { eigenvalues, eigenvectors })
}

/// Ascending eigenvalues only (cheaper than [`eig_hermitian`]).
pub fn eigenvalues_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    eigenvalues_hermitian_with(m, &Tolerance::default())
}

pub fn eigenvalues_hermitian_with(m: &ComplexMatrix, tol: &Tolerance) -> Result<Vec<f64>> {
    let h = hermitized(m, tol)?;
    if h.nrows() == 0 {
        return Ok(vec![]);
    }
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// `λ_min ≥ −psd_slack·max(1, λ_max)`.
pub fn is_psd(m: &ComplexMatrix, tol: &Tolerance) -> Result<PsdCheck> {
    let ev = eigenvalues_hermitian_with(m, tol)?;
    let min_eigenvalue = ev.first().copied().unwrap_or(0.0);
    let max_eigenvalue = ev.last().copied().unwrap_or(0.0);
    Ok(PsdCheck {
        psd: min_eigenvalue >= -tol.psd_slack * max_eigenvalue.max(1.0),
        min_eigenvalue,
        max_eigenvalue,
    })
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return vec![];
    }
    let mut sv: Vec<f64> = m.to_nalgebra().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// `‖m‖₁`, the sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// Numerical rank: singular values above `rel_tol·max(1, σ_max)`.
pub fn rank(m: &ComplexMatrix, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let cutoff = rel_tol * sv.first().copied().unwrap_or(0.0).max(1.0);
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.ensure_square()?;
    let mut a = m.data().to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
            .expect("nonempty pivot range");
        let p = a[pivot * n + col];
        if p.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..n {
            let factor = a[row * n + col] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = a[col * n + j];
                a[row * n + j] -= factor * v;
            }
        }
    }
    Ok(det)
}

/// Real-valued determinant of a real row-major `n × n` matrix.
///
/// Used by the certificate scans, which evaluate millions of small real
/// determinants.
pub fn det_real(n: usize, entries: &[f64]) -> f64 {
    assert_eq!(entries.len(), n * n, "det_real expects n*n entries");
    let mut a = entries.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[pivot * n + col].abs() {
                pivot = r;
            }
        }
        let p = a[pivot * n + col];
        if p == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..n {
            let factor = a[row * n + col] / p;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                a[row * n + j] -= factor * a[col * n + j];
            }
        }
    }
    det
}

/// Minimum-norm least-squares solution of `a·x = b` via the pseudo-inverse.
///
/// Returns `(x, ‖a·x − b‖₂)`.
pub fn least_squares_min_norm(a: &ComplexMatrix, b: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} entries, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    if a.cols() == 0 {
        let residual = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        return Ok((vec![], residual));
    }
    let svd = a.to_nalgebra().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = 1e-12 * smax.max(1.0);
    let rhs = DVector::from_column_slice(b);
    let x = svd.solve(&rhs, eps).map_err(|e| Error::BadParams(e.to_string()))?;
    let x: Vec<Complex64> = x.iter().copied().collect();
    let ax = a.mat_vec(&x);
    let residual = ax.iter().zip(b).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
    Ok((x, residual))
}
