//! Parameterised state families `ρ = Σₘ qₘ ρₘ` on `n × n` levels and their
//! closed-form PPT and realignment predicates.
//!
//! Every family is built from shifted components. For a shift `s`, the
//! entangled component is `|ωₛ⟩⟨ωₛ|` with `|ωₛ⟩ = n^{-1/2} Σᵢ |i⟩|i+s⟩`, and
//! the diagonal component is `n⁻¹ Σᵢ |i, i+s⟩⟨i, i+s|` (indices mod `n`).
//! Component `m` (zero-based) always uses shift `m`. The leading one or two
//! components are entangled, the rest diagonal:
//!
//! | family | n | entangled components |
//! |--------|---|----------------------|
//! | `Ex33` | 3 | 1 |
//! | `Ex34` | 3 | 2 |
//! | `Ex42` | 4 | 1 |
//! | `Ex43` | 4 | 2 |
//! | `Ex54` | n | 1 |
//! | `Ex55` | n | 2 |

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::bipartite::{convex_mix, BipartiteDims, DensityMatrix};
use crate::matcore::ComplexMatrix;
use crate::{Error, Result};

/// Allowed deviation of `Σqᵢ` from 1.
pub const Q_SUM_SLACK: f64 = 1e-12;
/// Closed-form inequalities count as satisfied within this margin.
pub const BOUNDARY_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyId {
    Ex33,
    Ex34,
    Ex42,
    Ex43,
    Ex54 { n: usize },
    Ex55 { n: usize },
}

impl FamilyId {
    pub fn n(&self) -> usize {
        match self {
            FamilyId::Ex33 | FamilyId::Ex34 => 3,
            FamilyId::Ex42 | FamilyId::Ex43 => 4,
            FamilyId::Ex54 { n } | FamilyId::Ex55 { n } => *n,
        }
    }

    /// How many leading components are maximally entangled.
    pub fn entangled_components(&self) -> usize {
        match self {
            FamilyId::Ex33 | FamilyId::Ex42 | FamilyId::Ex54 { .. } => 1,
            FamilyId::Ex34 | FamilyId::Ex43 | FamilyId::Ex55 { .. } => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n() < 3 {
            return Err(Error::BadParams(format!("{self} needs n >= 3")));
        }
        Ok(())
    }

    /// Parses `ex33`, `ex34`, `ex42`, `ex43`, `ex54` or `ex55`; the last two
    /// need `n`.
    pub fn parse(name: &str, n: Option<usize>) -> Result<Self> {
        let fid = match (name.to_ascii_lowercase().as_str(), n) {
            ("ex33", None | Some(3)) => FamilyId::Ex33,
            ("ex34", None | Some(3)) => FamilyId::Ex34,
            ("ex42", None | Some(4)) => FamilyId::Ex42,
            ("ex43", None | Some(4)) => FamilyId::Ex43,
            ("ex54", Some(n)) => FamilyId::Ex54 { n },
            ("ex55", Some(n)) => FamilyId::Ex55 { n },
            ("ex54" | "ex55", None) => return Err(Error::BadParams(format!("family {name} needs n"))),
            (other, Some(n)) if ["ex33", "ex34", "ex42", "ex43"].contains(&other) => {
                return Err(Error::BadParams(format!("family {other} has fixed size, got n={n}")))
            }
            (other, _) => return Err(Error::BadParams(format!("unknown family {other:?}"))),
        };
        fid.validate()?;
        Ok(fid)
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::Ex33 => write!(f, "ex33"),
            FamilyId::Ex34 => write!(f, "ex34"),
            FamilyId::Ex42 => write!(f, "ex42"),
            FamilyId::Ex43 => write!(f, "ex43"),
            FamilyId::Ex54 { n } => write!(f, "ex54-{n}"),
            FamilyId::Ex55 { n } => write!(f, "ex55-{n}"),
        }
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    /// Accepts the [`Display`](fmt::Display) form.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('-') {
            Some((name, n)) => {
                let n = n.parse().map_err(|_| Error::BadParams(format!("bad family size in {s:?}")))?;
                Self::parse(name, Some(n))
            }
            None => Self::parse(s, None),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyParams {
    pub q: Vec<f64>,
    /// Weight of `noise` in the final mixture.
    pub mix_t: f64,
    pub noise: Option<DensityMatrix>,
}

impl FamilyParams {
    pub fn new(q: Vec<f64>) -> Self {
        Self { q, mix_t: 0.0, noise: None }
    }

    pub fn mixed(q: Vec<f64>, mix_t: f64, noise: DensityMatrix) -> Self {
        Self { q, mix_t, noise: Some(noise) }
    }

    fn validate_q(&self, fid: FamilyId) -> Result<()> {
        if self.q.len() != fid.n() {
            return Err(Error::BadParams(format!("{fid} needs {} weights, got {}", fid.n(), self.q.len())));
        }
        if self.q.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::BadParams(format!("weights must be nonnegative, got {:?}", self.q)));
        }
        let sum: f64 = self.q.iter().sum();
        if (sum - 1.0).abs() > Q_SUM_SLACK {
            return Err(Error::BadParams(format!("weights sum to {sum}, expected 1")));
        }
        Ok(())
    }
}

/// Unmixed family state on exactly `n × n` levels.
fn core_state(fid: FamilyId, q: &[f64]) -> ComplexMatrix {
    let n = fid.n();
    let idx = |i: usize, j: usize| i * n + j;
    let mut mat = ComplexMatrix::zeros(n * n, n * n);
    for (shift, &weight) in q.iter().enumerate() {
        if weight == 0.0 {
            continue;
        }
        let w = Complex64::new(weight / n as f64, 0.0);
        if shift < fid.entangled_components() {
            for i in 0..n {
                for j in 0..n {
                    mat[(idx(i, (i + shift) % n), idx(j, (j + shift) % n))] += w;
                }
            }
        } else {
            for i in 0..n {
                let p = idx(i, (i + shift) % n);
                mat[(p, p)] += w;
            }
        }
    }
    mat
}

pub fn build_family(fid: FamilyId, params: &FamilyParams, dims: BipartiteDims) -> Result<DensityMatrix> {
    fid.validate()?;
    params.validate_q(fid)?;
    let n = fid.n();
    if dims.a < n || dims.b < n {
        return Err(Error::BadDims(format!("{fid} needs dims >= ({n}, {n}), got ({}, {})", dims.a, dims.b)));
    }
    let core = DensityMatrix::raw(BipartiteDims::square(n)?, core_state(fid, &params.q))?;
    let rho = if dims == core.dims() { core } else { core.embedded(dims)? };
    if !(0.0..=1.0).contains(&params.mix_t) {
        return Err(Error::BadParams(format!("mixing weight must lie in [0, 1], got {}", params.mix_t)));
    }
    match (&params.noise, params.mix_t) {
        (_, 0.0) => Ok(rho),
        (Some(noise), t) => convex_mix(&[(1.0 - t, &rho), (t, noise)]),
        (None, _) => Err(Error::BadParams("a positive mixing weight needs a noise state".into())),
    }
}

/// Family state at its natural `n × n` dims.
pub fn build_family_at_support(fid: FamilyId, q: &[f64]) -> Result<DensityMatrix> {
    let n = fid.n();
    build_family(fid, &FamilyParams::new(q.to_vec()), BipartiteDims::square(n)?)
}

/// Uniform mixture of `|i⟩|i⟩` for `n ≤ i < min(dA, dB)`. Every map
/// supported on the first `n` levels sends it to zero.
pub fn noise_outside_support(n: usize, dims: BipartiteDims) -> Result<DensityMatrix> {
    let top = dims.a.min(dims.b);
    if top <= n {
        return Err(Error::BadParams(format!(
            "noise outside {n} levels needs both dims > {n}, got ({}, {})",
            dims.a, dims.b
        )));
    }
    let w = 1.0 / (top - n) as f64;
    let mut mat = ComplexMatrix::zeros(dims.total(), dims.total());
    for i in n..top {
        let p = dims.index(i, i);
        mat[(p, p)] = w.into();
    }
    DensityMatrix::raw(dims, mat)
}

/// The closed-form PPT condition of the unmixed family state as a list of
/// `(lhs, rhs)` pairs, each read `lhs ≥ rhs`.
pub fn ppt_inequalities(fid: FamilyId, params: &FamilyParams) -> Result<Vec<(f64, f64)>> {
    fid.validate()?;
    params.validate_q(fid)?;
    let q = &params.q;
    Ok(match fid {
        FamilyId::Ex33 => vec![(q[1] * q[2], q[0] * q[0])],
        FamilyId::Ex34 => vec![(q[0] * q[1] * q[2], q[0].powi(3) + q[1].powi(3))],
        FamilyId::Ex42 => vec![(q[1] * q[3], q[0] * q[0]), (q[2], q[0])],
        FamilyId::Ex43 => {
            let (q1, q2, q3, q4) = (q[0], q[1], q[2], q[3]);
            let first = q2 * q2 * (q1 * q3 - q2 * q2);
            let second = q1 * q1 * (q2 * q4 - q1 * q1);
            vec![
                (q1 * (q1 * q3 * q3 - q2 * q2 * q3 - q1.powi(3)), first),
                (first, 0.0),
                (q2 * (q2 * q4 * q4 - q1 * q1 * q4 - q2.powi(3)), second),
                (second, 0.0),
            ]
        }
        // One-based pairs (i, n + 2 − i) for i = 2..n.
        FamilyId::Ex54 { n } => (2..=n).map(|i| (q[i - 1] * q[n + 1 - i], q[0] * q[0])).collect(),
        FamilyId::Ex55 { .. } => {
            return Err(Error::Unsupported("no closed-form PPT predicate for ex55; use the numeric check".into()))
        }
    })
}

/// Closed-form PPT predicate of the unmixed family state. Ties within
/// [`BOUNDARY_TIE`] count as satisfied.
pub fn ppt_closed_form(fid: FamilyId, params: &FamilyParams) -> Result<bool> {
    Ok(ppt_inequalities(fid, params)?.iter().all(|&(lhs, rhs)| lhs >= rhs - BOUNDARY_TIE))
}

/// Closed-form realignment trace norm as printed for the two four-level
/// families. Known to disagree with the singular values in general; callers
/// compare it against the numeric value rather than trusting it.
pub fn realign_norm_formula(fid: FamilyId, params: &FamilyParams) -> Result<f64> {
    if !matches!(fid, FamilyId::Ex42 | FamilyId::Ex43) {
        return Err(Error::Unsupported(format!("no realignment norm formula for {fid}")));
    }
    params.validate_q(fid)?;
    let q = &params.q;
    let (q1, q2, q3, q4) = (q[0], q[1], q[2], q[3]);
    let squares: f64 = q.iter().map(|x| x * x).sum();
    let ring = q1 * q2 + q2 * q3 + q3 * q4 + q1 * q4;
    let circulant = 0.75 * (squares - ring).max(0.0).sqrt() + 0.25 * (squares + 3.0 * ring).sqrt();
    Ok(match fid {
        FamilyId::Ex42 => circulant + 3.0 * q1,
        _ => {
            circulant
                + 2.25 * (q1 * q1 + q2 * q2 - q1 * q2).sqrt()
                + 0.75 * (q1 * q1 + q2 * q2 + 3.0 * q1 * q2).sqrt()
        }
    })
}
