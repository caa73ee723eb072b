//! Separability criteria: partial transpose, realignment and positive maps,
//! the pure-state test, classification and parameter sweeps.
//!
//! Every criterion is one-sided for mixed states. Absence of detection is
//! reported as [`Classification::Undetected`], never as separable.

use std::fmt;

use rayon::prelude::*;

use crate::bipartite::{
    apply_map_first, partial_transpose_first, realign, schmidt, BipartiteDims, DensityMatrix, PureState,
    SchmidtDecomposition,
};
use crate::matcore::{eigenvalues_hermitian, trace_norm, ComplexMatrix, Tolerance};
use crate::posmaps::{build_map, MapDescriptor, MapFamily};
use crate::sampling::simplex_lattice;
use crate::states::{build_family, FamilyId, FamilyParams};
use crate::{Error, Result};

/// Largest lattice resolution accepted by [`sweep`].
pub const MAX_GRID: usize = 200;
/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "ENTMAP_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub enum Criterion {
    Ppt,
    Ccnr,
    PosMap(MapDescriptor),
    /// Two-level swap map conjugated into the Schmidt basis of a pure state.
    SchmidtWitness,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Ppt => write!(f, "ppt"),
            Criterion::Ccnr => write!(f, "ccnr"),
            Criterion::PosMap(desc) => write!(f, "{}", desc.label()),
            Criterion::SchmidtWitness => write!(f, "schmidt-witness"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub criterion: Criterion,
    pub detected: bool,
    /// `λ_min` for spectral criteria, `‖ρ^R‖₁ − 1` for realignment.
    pub witness_value: f64,
    /// `witness_value` times the map's conventional scale (its support for the
    /// cyclic families); equal to `witness_value` otherwise.
    pub normalized_witness: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    NptEntangled,
    /// PPT, and some positive map detects it.
    PptEntangledDetected,
    /// PPT, missed by every map, caught by realignment.
    PptEntangledCcnr,
    Undetected,
    PureSeparable,
    PureEntangled,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::NptEntangled => "NPT_Entangled",
            Classification::PptEntangledDetected => "PPT_Entangled_Detected",
            Classification::PptEntangledCcnr => "PPT_Entangled_CCNR",
            Classification::Undetected => "Undetected",
            Classification::PureSeparable => "PureSeparable",
            Classification::PureEntangled => "PureEntangled",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionReport {
    pub results: Vec<CriterionResult>,
    pub classification: Classification,
    /// Present for pure-state tests only.
    pub schmidt: Option<SchmidtDecomposition>,
}

impl DetectionReport {
    pub fn result(&self, criterion: &Criterion) -> Option<&CriterionResult> {
        self.results.iter().find(|r| &r.criterion == criterion)
    }
}

fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues_hermitian(m)?.first().copied().unwrap_or(0.0))
}

pub fn check_ppt(rho: &DensityMatrix, tol: &Tolerance) -> Result<CriterionResult> {
    let lambda = min_eigenvalue(&partial_transpose_first(rho))?;
    Ok(CriterionResult {
        criterion: Criterion::Ppt,
        detected: lambda < -tol.psd_slack,
        witness_value: lambda,
        normalized_witness: lambda,
    })
}

pub fn check_ccnr(rho: &DensityMatrix, tol: &Tolerance) -> Result<CriterionResult> {
    let excess = trace_norm(&realign(rho)) - 1.0;
    Ok(CriterionResult {
        criterion: Criterion::Ccnr,
        detected: excess > tol.psd_slack,
        witness_value: excess,
        normalized_witness: excess,
    })
}

/// Applies a built-in map, refitted so its input matches the first factor.
/// Maps without a positivity certificate are refused.
pub fn check_posmap(rho: &DensityMatrix, desc: &MapDescriptor, tol: &Tolerance) -> Result<CriterionResult> {
    if !desc.family.is_certified_positive() {
        return Err(Error::UncertifiedMap(format!("{} has no positivity certificate", desc.label())));
    }
    let BipartiteDims { a, .. } = rho.dims();
    let support = desc.family.support();
    if a < support {
        return Err(Error::DimensionMismatch(format!(
            "{} acts on {support} levels but the first factor has {a}",
            desc.label()
        )));
    }
    let fitted = desc.with_embedding(a, support.max(1))?;
    let phi = build_map(&fitted)?;
    let lambda = min_eigenvalue(&apply_map_first(&phi, rho)?)?;
    Ok(CriterionResult {
        criterion: Criterion::PosMap(desc.clone()),
        detected: lambda < -tol.psd_slack,
        witness_value: lambda,
        normalized_witness: lambda * desc.family.natural_scale(),
    })
}

/// Pure states are separable exactly when their Schmidt rank is 1. For
/// higher rank the two-level swap map, rotated so that its support holds the
/// two leading Schmidt vectors, gives `λ_min = −δ₁δ₂`.
pub fn pure_state_test(psi: &PureState, tol: &Tolerance) -> Result<DetectionReport> {
    let decomposition = schmidt(psi);
    let significant = decomposition.coefficients.iter().filter(|&&d| d > 1e-10).count();
    if significant < 2 {
        return Ok(DetectionReport {
            results: vec![],
            classification: Classification::PureSeparable,
            schmidt: Some(decomposition),
        });
    }
    let da = psi.dims().a;
    let swap = build_map(&MapDescriptor::embedded(MapFamily::Phi0, da, da)?)?;
    let u = decomposition.left_unitary(da)?;
    let witness = swap.conjugate(&u, &ComplexMatrix::identity(da))?;
    let lambda = min_eigenvalue(&apply_map_first(&witness, &psi.density())?)?;
    Ok(DetectionReport {
        results: vec![CriterionResult {
            criterion: Criterion::SchmidtWitness,
            detected: lambda < -tol.psd_slack,
            witness_value: lambda,
            normalized_witness: lambda,
        }],
        classification: Classification::PureEntangled,
        schmidt: Some(decomposition),
    })
}

pub fn classify(rho: &DensityMatrix, maps: &[MapDescriptor], tol: &Tolerance) -> Result<DetectionReport> {
    let mut results = vec![check_ppt(rho, tol)?, check_ccnr(rho, tol)?];
    for desc in maps {
        results.push(check_posmap(rho, desc, tol)?);
    }
    let npt = results[0].detected;
    let ccnr = results[1].detected;
    let by_map = results[2..].iter().any(|r| r.detected);
    let classification = match (npt, by_map, ccnr) {
        (true, _, _) => Classification::NptEntangled,
        (false, true, _) => Classification::PptEntangledDetected,
        (false, false, true) => Classification::PptEntangledCcnr,
        _ => Classification::Undetected,
    };
    Ok(DetectionReport { results, classification, schmidt: None })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub q: Vec<f64>,
    pub report: DetectionReport,
}

/// Thread cap from [`THREADS_ENV`], if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&t| t > 0)
}

/// Classifies the family at every lattice point `q = k / grid` in ascending
/// lexicographic order of `k`. Rows come back in that order whatever the
/// thread count.
pub fn sweep(
    fid: FamilyId,
    grid: usize,
    maps: &[MapDescriptor],
    tol: &Tolerance,
    threads: Option<usize>,
) -> Result<Vec<SweepRow>> {
    fid.validate()?;
    if grid == 0 || grid > MAX_GRID {
        return Err(Error::BadParams(format!("grid must lie in 1..={MAX_GRID}, got {grid}")));
    }
    let n = fid.n();
    let dims = BipartiteDims::square(n)?;
    let points: Vec<Vec<f64>> = simplex_lattice(n, grid)
        .into_iter()
        .map(|k| k.into_iter().map(|ki| ki as f64 / grid as f64).collect())
        .collect();
    let run = || {
        points
            .par_iter()
            .map(|q| {
                let rho = build_family(fid, &FamilyParams::new(q.clone()), dims)?;
                Ok(SweepRow { q: q.clone(), report: classify(&rho, maps, tol)? })
            })
            .collect::<Result<Vec<_>>>()
    };
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::BadParams(format!("cannot start {t} worker threads: {e}")))?
            .install(run),
        None => run(),
    }
}
