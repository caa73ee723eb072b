//! Bipartite states on `H ⊗ K`: validation, partial transpose, realignment,
//! `(Φ ⊗ I)ρ`, Schmidt decomposition and convex mixing.
//!
//! Flat index of `|i⟩ ⊗ |j⟩` is `i·dB + j`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::matcore::{is_psd, unitary_completion, ComplexMatrix, Tolerance};
use crate::posmaps::ElementaryOperator;
use crate::{Error, Result};

/// Allowed deviation of a density matrix trace from 1.
pub const TRACE_SLACK: f64 = 1e-10;
/// Allowed deviation of a pure-state norm from 1.
pub const NORM_SLACK: f64 = 1e-10;
/// Allowed deviation of convex weights from summing to 1.
pub const WEIGHT_SLACK: f64 = 1e-12;
/// Schmidt coefficients at or below this are dropped.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteDims {
    /// First factor.
    pub a: usize,
    /// Second factor.
    pub b: usize,
}

impl BipartiteDims {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::BadDims(format!("factor dimensions must be positive, got ({a}, {b})")));
        }
        Ok(Self { a, b })
    }

    pub fn square(d: usize) -> Result<Self> {
        Self::new(d, d)
    }

    pub fn total(&self) -> usize {
        self.a * self.b
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.b + j
    }
}

/// A density matrix with its factor dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: BipartiteDims,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validated construction: Hermitian, unit trace and PSD under `tol`.
    pub fn new(dims: BipartiteDims, mat: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let rho = Self::raw(dims, mat)?;
        rho.validate(tol)?;
        Ok(rho)
    }

    /// Shape-checked only, for inspecting matrices that are not states.
    pub fn raw(dims: BipartiteDims, mat: ComplexMatrix) -> Result<Self> {
        let n = mat.ensure_square()?;
        if n != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "{n}x{n} matrix does not match dims ({}, {})",
                dims.a, dims.b
            )));
        }
        Ok(Self { dims, mat })
    }

    pub fn validate(&self, tol: &Tolerance) -> Result<()> {
        let defect = self.mat.hermitian_defect();
        if defect > tol.equality_slack {
            return Err(Error::NotHermitian { defect });
        }
        let tr = self.mat.trace();
        if (tr.re - 1.0).abs() > TRACE_SLACK || tr.im.abs() > TRACE_SLACK {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let check = is_psd(&self.mat, tol)?;
        if !check.psd {
            return Err(Error::InvalidState(format!("not PSD: minimum eigenvalue {:e}", check.min_eigenvalue)));
        }
        Ok(())
    }

    pub fn maximally_mixed(dims: BipartiteDims) -> Self {
        let n = dims.total();
        Self { dims, mat: ComplexMatrix::identity(n).scale_real(1.0 / n as f64) }
    }

    pub fn product(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let dims = BipartiteDims::new(rho_a.ensure_square()?, rho_b.ensure_square()?)?;
        Self::new(dims, rho_a.kron(rho_b), tol)
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// Zero-pads each factor into larger dimensions.
    pub fn embedded(&self, dims: BipartiteDims) -> Result<Self> {
        if dims.a < self.dims.a || dims.b < self.dims.b {
            return Err(Error::BadDims(format!(
                "cannot embed ({}, {}) into ({}, {})",
                self.dims.a, self.dims.b, dims.a, dims.b
            )));
        }
        let map = |f: usize| dims.index(f / self.dims.b, f % self.dims.b);
        let n = self.dims.total();
        let mut mat = ComplexMatrix::zeros(dims.total(), dims.total());
        for r in 0..n {
            for c in 0..n {
                mat[(map(r), map(c))] = self.mat[(r, c)];
            }
        }
        Ok(Self { dims, mat })
    }

    /// `(U ⊗ V) ρ (U ⊗ V)†`.
    pub fn local_unitary(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<Self> {
        if u.shape() != (self.dims.a, self.dims.a) || v.shape() != (self.dims.b, self.dims.b) {
            return Err(Error::DimensionMismatch("local unitaries must match the factor dims".into()));
        }
        let w = u.kron(v);
        Ok(Self { dims: self.dims, mat: &(&w * &self.mat) * &w.adjoint() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: BipartiteDims,
    vec: Vec<Complex64>,
}

impl PureState {
    pub fn new(dims: BipartiteDims, vec: Vec<Complex64>) -> Result<Self> {
        Self::check_len(dims, &vec)?;
        let norm = vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_SLACK {
            return Err(Error::InvalidState(format!("vector norm is {norm}, expected 1")));
        }
        Ok(Self { dims, vec })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(dims: BipartiteDims, vec: Vec<Complex64>) -> Result<Self> {
        Self::check_len(dims, &vec)?;
        let norm = vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Ok(Self { dims, vec: vec.into_iter().map(|z| z / norm).collect() })
    }

    pub fn product(u: &[Complex64], v: &[Complex64]) -> Result<Self> {
        let dims = BipartiteDims::new(u.len(), v.len())?;
        let vec = u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect();
        Self::normalized(dims, vec)
    }

    fn check_len(dims: BipartiteDims, vec: &[Complex64]) -> Result<()> {
        if vec.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for dims ({}, {})",
                vec.len(),
                dims.a,
                dims.b
            )));
        }
        Ok(())
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn vector(&self) -> &[Complex64] {
        &self.vec
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix { dims: self.dims, mat: ComplexMatrix::outer(&self.vec, &self.vec) }
    }
}

/// `ψ = Σ δ_k |u_k⟩ ⊗ |v_k⟩` with orthonormal `u_k`, `v_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    /// Descending and strictly positive.
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<Vec<Complex64>>,
    pub right_basis: Vec<Vec<Complex64>>,
    pub rank: usize,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let (da, db) = (self.left_basis.first().map_or(0, Vec::len), self.right_basis.first().map_or(0, Vec::len));
        let mut out = vec![Complex64::new(0.0, 0.0); da * db];
        for ((d, u), v) in self.coefficients.iter().zip(&self.left_basis).zip(&self.right_basis) {
            for i in 0..da {
                for j in 0..db {
                    out[i * db + j] += u[i] * v[j] * d;
                }
            }
        }
        out
    }

    /// Unitary on the first factor whose first `rank` columns are the left
    /// Schmidt vectors.
    pub fn left_unitary(&self, da: usize) -> Result<ComplexMatrix> {
        unitary_completion(&self.left_basis, da)
    }
}

pub fn schmidt(psi: &PureState) -> SchmidtDecomposition {
    let BipartiteDims { a, b } = psi.dims;
    let m = DMatrix::from_fn(a, b, |i, j| psi.vec[i * b + j]);
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let mut out =
        SchmidtDecomposition { coefficients: vec![], left_basis: vec![], right_basis: vec![], rank: 0 };
    for k in order {
        let s = svd.singular_values[k];
        if s <= SCHMIDT_CUTOFF {
            continue;
        }
        out.coefficients.push(s);
        out.left_basis.push((0..a).map(|i| u[(i, k)]).collect());
        // M = U Σ V†, so the right vector is row k of V† read as-is.
        out.right_basis.push((0..b).map(|j| v_t[(k, j)]).collect());
    }
    out.rank = out.coefficients.len();
    out
}

/// Partial transpose on the first factor of any `dA·dB` square matrix.
pub fn partial_transpose_first_matrix(mat: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    check_dims(mat, dims)?;
    let BipartiteDims { a, b } = dims;
    let mut out = ComplexMatrix::zeros(a * b, a * b);
    for i in 0..a {
        for j in 0..a {
            for k in 0..b {
                for l in 0..b {
                    out[(j * b + k, i * b + l)] = mat[(i * b + k, j * b + l)];
                }
            }
        }
    }
    Ok(out)
}

pub fn partial_transpose_first(rho: &DensityMatrix) -> ComplexMatrix {
    partial_transpose_first_matrix(&rho.mat, rho.dims).expect("density matrix shape matches its dims")
}

/// Realignment of any `dA·dB` square matrix into a `dA² × dB²` matrix, with
/// rows indexed by the first-factor pair and columns by the second.
pub fn realign_matrix(mat: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    check_dims(mat, dims)?;
    let BipartiteDims { a, b } = dims;
    let mut out = ComplexMatrix::zeros(a * a, b * b);
    for i in 0..a {
        for j in 0..a {
            for k in 0..b {
                for l in 0..b {
                    out[(i * a + j, k * b + l)] = mat[(i * b + k, j * b + l)];
                }
            }
        }
    }
    Ok(out)
}

pub fn realign(rho: &DensityMatrix) -> ComplexMatrix {
    realign_matrix(&rho.mat, rho.dims).expect("density matrix shape matches its dims")
}

fn check_dims(mat: &ComplexMatrix, dims: BipartiteDims) -> Result<()> {
    if mat.shape() != (dims.total(), dims.total()) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix does not match dims ({}, {})",
            mat.rows(),
            mat.cols(),
            dims.a,
            dims.b
        )));
    }
    Ok(())
}

/// `(Φ ⊗ I)ρ` as `Σ_t (L_t ⊗ I) ρ (R_t ⊗ I)`. The result lives on
/// `dim_out(Φ) · dB`.
pub fn apply_map_first(phi: &ElementaryOperator, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    apply_map_first_matrix(phi, &rho.mat, rho.dims)
}

pub fn apply_map_first_matrix(
    phi: &ElementaryOperator,
    mat: &ComplexMatrix,
    dims: BipartiteDims,
) -> Result<ComplexMatrix> {
    check_dims(mat, dims)?;
    if phi.dim_in() != dims.a {
        return Err(Error::DimensionMismatch(format!(
            "map input dim {} does not match first factor dim {}",
            phi.dim_in(),
            dims.a
        )));
    }
    let (da, db, dk) = (dims.a, dims.b, phi.dim_out());
    let zero = Complex64::new(0.0, 0.0);
    let mut out = ComplexMatrix::zeros(dk * db, dk * db);
    let mut left_applied = ComplexMatrix::zeros(dk * db, da * db);
    for term in phi.terms() {
        left_applied.data_mut().fill(zero);
        // (L ⊗ I) ρ
        for p in 0..dk {
            for i in 0..da {
                let l = term.left[(p, i)];
                if l == zero {
                    continue;
                }
                for bb in 0..db {
                    for col in 0..da * db {
                        let v = mat[(i * db + bb, col)];
                        left_applied[(p * db + bb, col)] += l * v;
                    }
                }
            }
        }
        // · (R ⊗ I)
        for j in 0..da {
            for c in 0..dk {
                let r = term.right[(j, c)];
                if r == zero {
                    continue;
                }
                for row in 0..dk * db {
                    for d in 0..db {
                        let v = left_applied[(row, j * db + d)];
                        out[(row, c * db + d)] += v * r;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `Σ wᵢρᵢ` for nonnegative weights summing to 1.
pub fn convex_mix(states: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
    let first = states.first().ok_or(Error::WeightSum { sum: 0.0 })?;
    let dims = first.1.dims;
    let sum: f64 = states.iter().map(|(w, _)| w).sum();
    if states.iter().any(|(w, _)| w.is_nan() || *w < 0.0) || (sum - 1.0).abs() > WEIGHT_SLACK {
        return Err(Error::WeightSum { sum });
    }
    let mut mat = ComplexMatrix::zeros(dims.total(), dims.total());
    for (w, rho) in states {
        if rho.dims != dims {
            return Err(Error::DimensionMismatch(format!(
                "cannot mix dims ({}, {}) with ({}, {})",
                dims.a, dims.b, rho.dims.a, rho.dims.b
            )));
        }
        if *w > 0.0 {
            mat += &rho.mat.scale_real(*w);
        }
    }
    Ok(DensityMatrix { dims, mat })
}

/// `|v⟩⟨v| / ⟨v|v⟩` as a state on `dims`.
pub fn projector(dims: BipartiteDims, v: &[Complex64]) -> Result<DensityMatrix> {
    Ok(PureState::normalized(dims, v.to_vec())?.density())
}
