//! Executable positivity certificates for the cyclic map families.
//!
//! `f(r)` is the determinant deciding positivity of the cyclic map on a
//! nonnegative real probe `r`; `h(x)` is its dehomogenised form, related by
//! `f(r) = (Πrᵢ)² · h(x)` with `xᵢ = r²ᵢ₊₁ / r²ᵢ`. `h` is multilinear and
//! symmetric, `h(x) = −M₀ + Σₖ Mₖ·eₖ(x)` with `eₖ` the elementary symmetric
//! sums.

use rayon::prelude::*;

use crate::matcore::{det_real, ComplexMatrix};
use crate::sampling::{seeded, simplex, simplex_lattice, DEFAULT_SEED};
use crate::{Error, Result};

/// Random interior points added to every grid search.
pub const GRID_RANDOM_POINTS: usize = 10_000;

/// Diagonal `t`, off-diagonal `−1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BMatrixSpec {
    pub t: Vec<f64>,
}

impl BMatrixSpec {
    pub fn new(t: Vec<f64>) -> Result<Self> {
        if t.len() < 2 {
            return Err(Error::BadParams(format!("need at least 2 diagonal entries, got {}", t.len())));
        }
        Ok(Self { t })
    }

    pub fn uniform(n: usize, t: f64) -> Result<Self> {
        Self::new(vec![t; n])
    }
}

pub fn b_matrix(spec: &BMatrixSpec) -> ComplexMatrix {
    let n = spec.t.len();
    let entries: Vec<f64> =
        (0..n * n).map(|p| if p / n == p % n { spec.t[p / n] } else { -1.0 }).collect();
    ComplexMatrix::from_real(n, n, &entries).expect("finite entries")
}

/// Determinant of the matrix with diagonal `(n−2)rᵢ² + r²ᵢ₊₁` (indices mod
/// `n`) and off-diagonal `−rᵢrⱼ`.
pub fn f_eval(r: &[f64]) -> f64 {
    let n = r.len();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = if i == j {
                (n as f64 - 2.0) * r[i] * r[i] + r[(i + 1) % n] * r[(i + 1) % n]
            } else {
                -r[i] * r[j]
            };
        }
    }
    det_real(n, &m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HPoint {
    pub x: Vec<f64>,
}

impl HPoint {
    /// Strictly positive coordinates.
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if x.is_empty() || x.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::BadParams("h-point coordinates must be positive and finite".into()));
        }
        Ok(Self { x })
    }

    /// Positive coordinates with product 1 within `1e-9`.
    pub fn constrained(x: Vec<f64>) -> Result<Self> {
        let p = Self::new(x)?;
        let prod: f64 = p.x.iter().product();
        if (prod - 1.0).abs() > 1e-9 {
            return Err(Error::BadParams(format!("coordinates multiply to {prod}, expected 1")));
        }
        Ok(p)
    }
}

/// Determinant of the matrix with diagonal `(n−2) + xᵢ` and off-diagonal
/// `−1`. Accepts zero coordinates.
pub fn h_eval(x: &[f64]) -> f64 {
    let n = x.len();
    let m: Vec<f64> =
        (0..n * n).map(|p| if p / n == p % n { n as f64 - 2.0 + x[p / n] } else { -1.0 }).collect();
    det_real(n, &m)
}

pub fn h_eval_point(p: &HPoint) -> f64 {
    h_eval(&p.x)
}

/// `Π dᵢ − Σⱼ Π_{i≠j} dᵢ` with `dᵢ = n−1+xᵢ`.
pub fn h_closed_form(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let d: Vec<f64> = x.iter().map(|xi| n - 1.0 + xi).collect();
    let all: f64 = d.iter().product();
    let leave_one_out: f64 =
        (0..d.len()).map(|j| d.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, v)| v).product::<f64>()).sum();
    all - leave_one_out
}

/// Multilinear coefficients of `h` for a given `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MCoefficients {
    pub n: usize,
    /// `−h(0, …, 0)`.
    pub m0: f64,
    /// `M₁ … M_n`; `mk[k − 1]` multiplies `eₖ`.
    pub mk: Vec<f64>,
}

impl MCoefficients {
    pub fn get(&self, k: usize) -> f64 {
        if k == 0 {
            self.m0
        } else {
            self.mk[k - 1]
        }
    }

    /// `Σₖ C(n,k)·Mₖ`, which equals `M₀` because `h(1, …, 1) = 0`.
    pub fn weighted_sum(&self) -> f64 {
        self.mk.iter().enumerate().map(|(i, m)| binomial(self.n, i + 1) as f64 * m).sum()
    }

    /// `Σₖ Mₖ` without multiplicities.
    pub fn unweighted_sum(&self) -> f64 {
        self.mk.iter().sum()
    }
}

/// `(k−1)(n−1)^{n−1−k}` for `1 ≤ k ≤ n`.
pub fn m_closed_form(n: usize, k: usize) -> f64 {
    (k as f64 - 1.0) * (n as f64 - 1.0).powi(n as i32 - 1 - k as i32)
}

/// `h` on `n − k` levels at the constant point `(k, …, k)`.
pub fn m_by_determinant(n: usize, k: usize) -> f64 {
    h_eval(&vec![k as f64; n - k])
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Extracts `M₀ … M_n` by inclusion–exclusion over 0/1 points. Every
/// evaluation is an integer determinant; each coefficient is rounded and the
/// rounding error must stay below 0.5.
pub fn m_coefficients(n: usize) -> Result<MCoefficients> {
    if !(3..=20).contains(&n) {
        return Err(Error::BadParams(format!("coefficient extraction needs 3 <= n <= 20, got {n}")));
    }
    let indicator = |size: usize| -> f64 {
        let x: Vec<f64> = (0..n).map(|i| if i < size { 1.0 } else { 0.0 }).collect();
        h_eval(&x)
    };
    // By symmetry h on a 0/1 point depends only on the number of ones, and the
    // coefficient of x₁…x_k is Σ_{j≤k} (−1)^{k−j} C(k,j) h(1_j).
    let values: Vec<f64> = (0..=n).map(indicator).collect();
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let raw: f64 = (0..=k)
            .map(|j| {
                let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
                sign * binomial(k, j) as f64 * values[j]
            })
            .sum();
        let rounded = raw.round();
        if (raw - rounded).abs() >= 0.5 {
            return Err(Error::Unsupported(format!("coefficient {k} is not an integer: {raw}")));
        }
        coeffs.push(rounded);
    }
    Ok(MCoefficients { n, m0: -coeffs[0], mk: coeffs[1..].to_vec() })
}

/// `e₀ … e_n` of `x`.
pub fn elementary_symmetric(x: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; x.len() + 1];
    e[0] = 1.0;
    for (m, &v) in x.iter().enumerate() {
        for k in (1..=m + 1).rev() {
            e[k] += v * e[k - 1];
        }
    }
    e
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridMin {
    pub value: f64,
    pub argmin: Vec<f64>,
    pub points: usize,
}

/// Minimum of [`f_eval`] over `{r ≥ 0 : Σrᵢ² = 1}`, searched on the lattice
/// `r²ᵢ = kᵢ / resolution` plus [`GRID_RANDOM_POINTS`] seeded interior points.
/// Ties go to the earliest point, lattice first.
pub fn grid_min_f(n: usize, resolution: usize) -> Result<GridMin> {
    if !(3..=6).contains(&n) || resolution == 0 || resolution > 60 {
        return Err(Error::BadParams(format!("grid search needs 3 <= n <= 6 and 1 <= resolution <= 60, got ({n}, {resolution})")));
    }
    let mut points: Vec<Vec<f64>> = simplex_lattice(n, resolution)
        .into_iter()
        .map(|k| k.into_iter().map(|ki| (ki as f64 / resolution as f64).sqrt()).collect())
        .collect();
    let mut rng = seeded(DEFAULT_SEED);
    points.extend((0..GRID_RANDOM_POINTS).map(|_| simplex(&mut rng, n).into_iter().map(f64::sqrt).collect()));
    let values: Vec<f64> = points.par_iter().map(|r| f_eval(r)).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    Ok(GridMin { value: values[best], argmin: points[best].clone(), points: points.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::eigenvalues_hermitian;

    #[test]
    fn b_matrix_spectrum() {
        let eig = |t: Vec<f64>| eigenvalues_hermitian(&b_matrix(&BMatrixSpec::new(t).unwrap())).unwrap();
        assert!(eig(vec![2.0; 3])[0].abs() < 1e-12);
        assert!((eig(vec![1.0; 3])[0] + 1.0).abs() < 1e-12);
        assert!(eig(vec![5.0; 2])[0] > 0.0);
        assert!(BMatrixSpec::new(vec![1.0]).is_err());
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_eval(&[1.0, 0.0, 0.0, 0.0]), 0.0);
        assert!(f_eval(&[0.5; 4]).abs() <= 1e-12);
        for n in 3..=6 {
            assert!(f_eval(&vec![1.0 / (n as f64).sqrt(); n]).abs() <= 1e-12);
        }
    }

    #[test]
    fn h_examples() {
        for n in 2..=8 {
            assert!(h_eval(&vec![1.0; n]).abs() < 1e-9);
            assert!((h_eval(&vec![0.0; n]) + (n as f64 - 1.0).powi(n as i32 - 1)).abs() < 1e-9);
        }
        assert!((h_eval(&[0.0; 3]) + 4.0).abs() < 1e-12);
        assert!((h_closed_form(&[0.0; 3]) + 4.0).abs() < 1e-12);
        assert!(HPoint::new(vec![1.0, 0.0]).is_err());
        assert!(HPoint::constrained(vec![2.0, 0.5, 1.0]).is_ok());
        assert!(HPoint::constrained(vec![2.0, 2.0]).is_err());
    }

    #[test]
    fn m_coefficients_n4() {
        let m = m_coefficients(4).unwrap();
        assert_eq!(m.m0, 27.0);
        assert_eq!(m.mk, vec![0.0, 3.0, 2.0, 1.0]);
        assert_eq!(m.weighted_sum(), 27.0);
        assert_eq!(m_by_determinant(5, 2).round(), 16.0);
        assert_eq!(m_coefficients(5).unwrap().get(2), 16.0);
    }

    #[test]
    fn elementary_symmetric_sums() {
        assert_eq!(elementary_symmetric(&[1.0, 2.0, 3.0]), vec![1.0, 6.0, 11.0, 6.0]);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 4), 0);
    }

    #[test]
    fn grid_search_finds_zero() {
        let g = grid_min_f(4, 12).unwrap();
        assert!(g.value >= -1e-10 && g.value <= 1e-6);
        assert_eq!(g, grid_min_f(4, 12).unwrap());
        assert!(grid_min_f(7, 10).is_err());
        assert!(grid_min_f(3, 61).is_err());
    }
}
