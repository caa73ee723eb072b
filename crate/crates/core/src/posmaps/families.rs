use std::fmt;

use crate::matcore::ComplexMatrix;
use crate::{Error, Result};

use super::operator::{ElementaryOperator, KrausDifferenceForm};

/// Built-in map families. Indices are zero-based throughout.
#[derive(Debug, Clone, PartialEq)]
pub enum MapFamily {
    /// Identity on the embedding (support 1 for bookkeeping only).
    Identity,
    /// Swaps the two diagonal entries of a 2×2 block and negates the
    /// off-diagonal ones.
    Phi0,
    Psi0,
    /// Cyclic map on three levels with shift 1.
    Phi33,
    /// Cyclic map on three levels with shift 2.
    Phi33Prime,
    /// Cyclic map on four levels with shift 1, 2 or 3.
    Phi4 { variant: usize },
    /// Cyclic map on `n ≥ 3` levels with shift `k ∈ 1..n`.
    PhiNK { n: usize, k: usize },
    /// `X ↦ Σ tᵢ EᵢᵢXEᵢᵢ − PXP` with `P = ΣEᵢᵢ`.
    DeltaT { t: Vec<f64> },
    /// Cyclic construction driven by an arbitrary permutation of `0..n`.
    PsiPi { pi: Vec<usize> },
}

impl MapFamily {
    /// Number of levels the map acts on before embedding.
    pub fn support(&self) -> usize {
        match self {
            MapFamily::Identity => 1,
            MapFamily::Phi0 | MapFamily::Psi0 => 2,
            MapFamily::Phi33 | MapFamily::Phi33Prime => 3,
            MapFamily::Phi4 { .. } => 4,
            MapFamily::PhiNK { n, .. } => *n,
            MapFamily::DeltaT { t } => t.len(),
            MapFamily::PsiPi { pi } => pi.len(),
        }
    }

    /// The `(n, k)` of a cyclic family, if this is one.
    pub fn cyclic(&self) -> Option<(usize, usize)> {
        match self {
            MapFamily::Phi33 => Some((3, 1)),
            MapFamily::Phi33Prime => Some((3, 2)),
            MapFamily::Phi4 { variant } => Some((4, *variant)),
            MapFamily::PhiNK { n, k } => Some((*n, *k)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MapFamily::Phi4 { variant } if !(1..=3).contains(variant) => {
                Err(Error::BadParams(format!("Phi4 variant must be 1, 2 or 3, got {variant}")))
            }
            MapFamily::PhiNK { n, k } if *n < 3 || *k == 0 || k >= n => {
                Err(Error::BadParams(format!("PhiNK needs n >= 3 and 1 <= k < n, got n={n}, k={k}")))
            }
            MapFamily::DeltaT { t } if t.is_empty() || t.iter().any(|x| !x.is_finite() || *x <= 0.0) => {
                Err(Error::BadParams("DeltaT needs a nonempty vector of positive finite entries".into()))
            }
            MapFamily::PsiPi { pi } => {
                let mut seen = vec![false; pi.len()];
                for &p in pi {
                    if p >= pi.len() || std::mem::replace(&mut seen[p], true) {
                        return Err(Error::BadParams(format!("{pi:?} is not a permutation of 0..{}", pi.len())));
                    }
                }
                if pi.len() < 2 {
                    return Err(Error::BadParams("PsiPi needs at least two levels".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Whether positivity of the built map is known. Every family is except
    /// `DeltaT` with some entry below the number of levels.
    pub fn is_certified_positive(&self) -> bool {
        match self {
            MapFamily::DeltaT { t } => t.iter().all(|&x| x >= t.len() as f64),
            _ => true,
        }
    }

    /// Factor by which witness values are conventionally reported.
    pub fn natural_scale(&self) -> f64 {
        match self.cyclic() {
            Some((n, _)) => n as f64,
            None => match self {
                MapFamily::PsiPi { pi } => pi.len() as f64,
                _ => 1.0,
            },
        }
    }
}

impl fmt::Display for MapFamily {
    /// Stable label used in CSV headers and reports.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: Vec<String>| xs.join("-");
        match self {
            MapFamily::Identity => write!(f, "identity"),
            MapFamily::Phi0 => write!(f, "phi0"),
            MapFamily::Psi0 => write!(f, "psi0"),
            MapFamily::Phi33 => write!(f, "phi33"),
            MapFamily::Phi33Prime => write!(f, "phi33p"),
            MapFamily::Phi4 { variant } => write!(f, "phi4-{variant}"),
            MapFamily::PhiNK { n, k } => write!(f, "phi-{n}-{k}"),
            MapFamily::DeltaT { t } => write!(f, "delta-{}", join(t.iter().map(|x| x.to_string()).collect())),
            MapFamily::PsiPi { pi } => write!(f, "psipi-{}", join(pi.iter().map(|x| x.to_string()).collect())),
        }
    }
}

/// A family together with the ambient input and output dimensions it is
/// zero-padded into.
#[derive(Debug, Clone, PartialEq)]
pub struct MapDescriptor {
    pub family: MapFamily,
    pub embed_in: usize,
    pub embed_out: usize,
}

impl MapDescriptor {
    /// Descriptor at the family's own support.
    pub fn new(family: MapFamily) -> Result<Self> {
        family.validate()?;
        let n = family.support();
        Ok(Self { family, embed_in: n, embed_out: n })
    }

    pub fn embedded(family: MapFamily, embed_in: usize, embed_out: usize) -> Result<Self> {
        let d = Self { family, embed_in, embed_out };
        d.validate()?;
        Ok(d)
    }

    pub fn phi_nk(n: usize, k: usize) -> Result<Self> {
        Self::new(MapFamily::PhiNK { n, k })
    }

    /// Same family at new ambient dimensions.
    pub fn with_embedding(&self, embed_in: usize, embed_out: usize) -> Result<Self> {
        Self::embedded(self.family.clone(), embed_in, embed_out)
    }

    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        let n = self.family.support();
        if self.embed_in < n || self.embed_out < n {
            return Err(Error::BadParams(format!(
                "{} needs embedding dims >= {n}, got ({}, {})",
                self.family, self.embed_in, self.embed_out
            )));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        self.family.to_string()
    }
}

/// Builds the Kraus-difference form of a descriptor, zero-padded into its
/// embedding.
pub fn build_map(desc: &MapDescriptor) -> Result<ElementaryOperator> {
    desc.validate()?;
    let (din, dout) = (desc.embed_in, desc.embed_out);
    // E_ji = |j'><i|.
    let e = |j: usize, i: usize| ComplexMatrix::unit(dout, din, j, i);
    let diag_sum = |n: usize| {
        let mut p = ComplexMatrix::zeros(dout, din);
        for i in 0..n {
            p[(i, i)] = 1.0.into();
        }
        p
    };
    let form = match &desc.family {
        MapFamily::Identity => KrausDifferenceForm { plus: vec![diag_sum(din.min(dout))], minus: vec![] },
        MapFamily::Phi0 => KrausDifferenceForm { plus: vec![e(0, 0), e(1, 1), e(0, 1), e(1, 0)], minus: vec![diag_sum(2)] },
        MapFamily::Psi0 => {
            let mut c = e(0, 0).scale_real(2.0);
            c[(1, 1)] = 1.0.into();
            KrausDifferenceForm { plus: vec![c, e(0, 1), e(1, 0)], minus: vec![diag_sum(2)] }
        }
        MapFamily::DeltaT { t } => KrausDifferenceForm {
            plus: t.iter().enumerate().map(|(i, ti)| e(i, i).scale_real(ti.sqrt())).collect(),
            minus: vec![diag_sum(t.len())],
        },
        MapFamily::PsiPi { pi } => permutation_form(pi, &e, diag_sum(pi.len())),
        other => {
            let (n, k) = other.cyclic().expect("remaining families are cyclic");
            let pi: Vec<usize> = (0..n).map(|i| (i + k) % n).collect();
            permutation_form(&pi, &e, diag_sum(n))
        }
    };
    ElementaryOperator::from_kraus_difference(form)
}

/// Plus operators `√(n−1)·Eᵢᵢ` followed by `E_{i,π(i)}`; minus `ΣEᵢᵢ`.
fn permutation_form(
    pi: &[usize],
    e: &dyn Fn(usize, usize) -> ComplexMatrix,
    projector: ComplexMatrix,
) -> KrausDifferenceForm {
    let n = pi.len();
    let w = ((n - 1) as f64).sqrt();
    let mut plus: Vec<ComplexMatrix> = (0..n).map(|i| e(i, i).scale_real(w)).collect();
    plus.extend((0..n).map(|i| e(i, pi[i])));
    KrausDifferenceForm { plus, minus: vec![projector] }
}
