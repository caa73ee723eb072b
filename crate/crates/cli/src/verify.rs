//! Claim ledger replayed by `entmap verify`.
//!
//! Every claim ends with a status. Claims whose published value is known to
//! be off end as [`Status::DiscrepancyExpected`] with both numbers printed;
//! only [`Status::Fail`] makes the run fail.

use std::fmt;
use std::str::FromStr;

use entmap_core::bipartite::{partial_transpose_first, realign, BipartiteDims, PureState};
use entmap_core::certify::{
    b_matrix, binomial, grid_min_f, h_closed_form, h_eval, m_by_determinant, m_closed_form, m_coefficients,
    BMatrixSpec,
};
use entmap_core::criteria::{check_ccnr, check_posmap, check_ppt, classify, pure_state_test, sweep, Classification};
use entmap_core::matcore::{eigenvalues_hermitian, trace_norm, ComplexMatrix, Tolerance};
use entmap_core::posmaps::{build_map, sampled_min_eigenvalue, MapDescriptor, MapFamily};
use entmap_core::sampling::{seeded, simplex, unit_vector, DEFAULT_SEED};
use entmap_core::states::{
    build_family_at_support, ppt_closed_form, ppt_inequalities, realign_norm_formula, FamilyId, FamilyParams,
};
use entmap_core::Complex64;

use crate::error::CliError;
use crate::report::sci;

/// Rank-one probes per map in the positivity claims.
pub const PROBES: usize = 100_000;
/// Points within this distance of a closed-form boundary are not compared.
pub const BOUNDARY_BAND: f64 = 1e-7;
const PSD_FLOOR: f64 = -1e-10;
const NCP_CEILING: f64 = -1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scope {
    All,
    Section2,
    Section3,
    Section4,
    Section5,
}

impl Scope {
    fn covers(self, section: Scope) -> bool {
        self == Scope::All || self == section
    }
}

impl FromStr for Scope {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "all" => Scope::All,
            "section-2" => Scope::Section2,
            "section-3" => Scope::Section3,
            "section-4" => Scope::Section4,
            "section-5" => Scope::Section5,
            _ => return Err(CliError::Usage(format!("unknown scope {s:?}; use all or section-2..section-5"))),
        })
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::All => "all",
            Scope::Section2 => "section-2",
            Scope::Section3 => "section-3",
            Scope::Section4 => "section-4",
            Scope::Section5 => "section-5",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The published value disagrees with the oracle in a known way.
    DiscrepancyExpected,
    Unverifiable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::DiscrepancyExpected => "DISCREPANCY-EXPECTED",
            Status::Unverifiable => "UNVERIFIABLE",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimRecord {
    pub claim_id: String,
    pub scope: Scope,
    pub status: Status,
    pub detail: String,
}

struct Outcome {
    status: Status,
    detail: String,
}

fn pass_if(ok: bool, detail: String) -> entmap_core::Result<Outcome> {
    Ok(Outcome { status: if ok { Status::Pass } else { Status::Fail }, detail })
}

/// `Pass` when the published value matches the oracle, `DiscrepancyExpected`
/// when the known mismatch shows up, `Fail` when even the oracle side fails.
fn discrepancy(oracle_ok: bool, published_matches: bool, detail: String) -> entmap_core::Result<Outcome> {
    let status = match (oracle_ok, published_matches) {
        (false, _) => Status::Fail,
        (true, true) => Status::Pass,
        (true, false) => Status::DiscrepancyExpected,
    };
    Ok(Outcome { status, detail })
}

type Check = fn(&Ctx) -> entmap_core::Result<Outcome>;

struct Ctx {
    seed: u64,
    tol: Tolerance,
}

impl Ctx {
    /// Seed of an independent stream per claim.
    fn stream(&self, salt: u64) -> u64 {
        self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15)
    }
}

const CLAIMS: &[(&str, Scope, Check)] = &[
    ("b-matrix-threshold", Scope::Section2, b_matrix_threshold),
    ("delta-map-threshold", Scope::Section2, delta_map_threshold),
    ("phi0-positive-not-cp", Scope::Section3, phi0_positive_not_cp),
    ("pure-state-schmidt-witness", Scope::Section3, pure_state_witness),
    ("phi33-positive-not-cp", Scope::Section3, phi33_positive),
    ("ex33-witness-block", Scope::Section3, ex33_witness_block),
    ("ex33-ppt-closed-form", Scope::Section3, |c| ppt_agreement(c, FamilyId::Ex33, 33)),
    ("ex33-ppt-entangled-point", Scope::Section3, ex33_ppt_entangled),
    ("ex34-detection-region", Scope::Section3, ex34_detection_region),
    ("ex34-ppt-closed-form", Scope::Section3, |c| ppt_agreement(c, FamilyId::Ex34, 34)),
    ("ex34-ppt-entangled-point", Scope::Section3, ex34_ppt_entangled),
    ("phi4-positive-not-cp", Scope::Section4, |c| cyclic_positive(c, &[4])),
    ("ex42-ppt-point", Scope::Section4, ex42_ppt_point),
    ("ex42-ccnr-circulant", Scope::Section4, ex42_ccnr_circulant),
    ("ex42-norm-0.9411", Scope::Section4, ex42_norm_printed),
    ("ex42-witness", Scope::Section4, ex42_witness),
    ("ex42-ppt-closed-form", Scope::Section4, |c| ppt_agreement(c, FamilyId::Ex42, 42)),
    ("ex43-pt-blocks", Scope::Section4, ex43_pt_blocks),
    ("ex43-ppt-closed-form", Scope::Section4, |c| ppt_agreement(c, FamilyId::Ex43, 43)),
    ("ex43-map-blocks", Scope::Section4, ex43_map_blocks),
    ("ex43-ppt-entangled-family", Scope::Section4, ex43_family),
    ("ex43-ppt-family-range", Scope::Section4, ex43_family_range),
    ("ex43-norm-formula", Scope::Section4, ex43_norm_formula),
    ("cyclic-positive-not-cp", Scope::Section5, |c| cyclic_positive(c, &[3, 4, 5, 6])),
    ("h-closed-form", Scope::Section5, h_identity),
    ("m-coefficients", Scope::Section5, m_coefficient_claim),
    ("m-weighted-sum", Scope::Section5, m_weighted),
    ("m-unweighted-sum", Scope::Section5, m_unweighted),
    ("ex54-reduces-to-three-level", Scope::Section5, ex54_reduction),
    ("ex54-detection", Scope::Section5, ex54_detection),
    ("ex54-ppt-closed-form", Scope::Section5, ex54_ppt),
    ("ex55-detection-shift-1", Scope::Section5, ex55_shift_one),
    ("ex55-detection-higher-shift", Scope::Section5, ex55_higher_shift),
    ("ex54-indecomposability-sweeps", Scope::Section5, indecomposability),
];

/// Runs every claim in `scope` with randomized checks seeded from `seed`.
pub fn run(scope: Scope, seed: Option<u64>) -> Vec<ClaimRecord> {
    let ctx = Ctx { seed: seed.unwrap_or(DEFAULT_SEED), tol: Tolerance::default() };
    CLAIMS
        .iter()
        .filter(|(_, section, _)| scope.covers(*section))
        .map(|(id, section, check)| {
            let outcome = check(&ctx).unwrap_or_else(|e| Outcome { status: Status::Fail, detail: format!("error: {e}") });
            ClaimRecord { claim_id: id.to_string(), scope: *section, status: outcome.status, detail: outcome.detail }
        })
        .collect()
}

pub fn claim_ids(scope: Scope) -> Vec<&'static str> {
    CLAIMS.iter().filter(|(_, s, _)| scope.covers(*s)).map(|(id, _, _)| *id).collect()
}

pub fn render(records: &[ClaimRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&format!("{:<21} {:<10} {:<30} {}\n", r.status.to_string(), r.scope.to_string(), r.claim_id, r.detail));
    }
    let count = |s: Status| records.iter().filter(|r| r.status == s).count();
    out.push_str(&format!(
        "{} claims: {} pass, {} discrepancy-expected, {} unverifiable, {} fail\n",
        records.len(),
        count(Status::Pass),
        count(Status::DiscrepancyExpected),
        count(Status::Unverifiable),
        count(Status::Fail)
    ));
    out
}

pub fn any_failed(records: &[ClaimRecord]) -> bool {
    records.iter().any(|r| r.status == Status::Fail)
}

fn min_eig(m: &ComplexMatrix) -> entmap_core::Result<f64> {
    Ok(eigenvalues_hermitian(m)?[0])
}

fn phi(n: usize, k: usize) -> MapDescriptor {
    MapDescriptor::phi_nk(n, k).expect("valid cyclic map")
}

fn normalize(q: &[f64]) -> Vec<f64> {
    let s: f64 = q.iter().sum();
    q.iter().map(|x| x / s).collect()
}

/// Normalized witness of a cyclic map on the family state.
fn cyclic_witness(fid: FamilyId, q: &[f64], k: usize, tol: &Tolerance) -> entmap_core::Result<f64> {
    let rho = build_family_at_support(fid, q)?;
    Ok(check_posmap(&rho, &phi(fid.n(), k), tol)?.normalized_witness)
}

fn b_matrix_threshold(_: &Ctx) -> entmap_core::Result<Outcome> {
    let mut worst = 0.0f64;
    let mut flips = true;
    for n in 2..=8 {
        let threshold = n as f64 - 1.0;
        for t in [0.0, 0.5, threshold - 1e-6, threshold, threshold + 1e-6, threshold + 2.5] {
            let lambda = min_eig(&b_matrix(&BMatrixSpec::uniform(n, t)?))?;
            worst = worst.max((lambda - (t - threshold)).abs());
        }
        let below = min_eig(&b_matrix(&BMatrixSpec::uniform(n, threshold - 1e-6)?))?;
        let above = min_eig(&b_matrix(&BMatrixSpec::uniform(n, threshold + 1e-6)?))?;
        flips &= below < 0.0 && above >= 0.0;
    }
    pass_if(worst <= 1e-9 && flips, format!("max |lambda_min - (t - n + 1)| = {}, flips at t = n - 1 for n = 2..8: {flips}", sci(worst)))
}

fn delta_map_threshold(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let mut choi_worst = f64::INFINITY;
    let mut probe_worst = f64::NEG_INFINITY;
    for n in 2..=6 {
        let at = build_map(&MapDescriptor::new(MapFamily::DeltaT { t: vec![n as f64; n] })?)?;
        choi_worst = choi_worst.min(at.is_completely_positive(&ctx.tol)?.choi_min_eigenvalue);
        let below = build_map(&MapDescriptor::new(MapFamily::DeltaT { t: vec![n as f64 - 0.1; n] })?)?;
        let ones = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
        probe_worst = probe_worst.max(below.probe_min_eigenvalue(&ones)?);
    }
    pass_if(
        choi_worst >= -1e-9 && probe_worst < -1e-3,
        format!("min Choi lambda at t = n: {}; max all-ones probe lambda at t = n - 0.1: {}", sci(choi_worst), sci(probe_worst)),
    )
}

fn phi0_positive_not_cp(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let map = build_map(&MapDescriptor::new(MapFamily::Phi0)?)?;
    let probe = sampled_min_eigenvalue(&map, PROBES, ctx.seed)?;
    let choi = map.is_completely_positive(&ctx.tol)?.choi_min_eigenvalue;
    pass_if(probe >= PSD_FLOOR && choi <= NCP_CEILING, format!("probe min {}, Choi min {}", sci(probe), sci(choi)))
}

fn pure_state_witness(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let mut rng = seeded(ctx.stream(31));
    let (mut mismatches, mut worst) = (0, 0.0f64);
    for trial in 0..1000 {
        let (da, db) = (trial % 6 + 1, (trial / 6) % 6 + 1);
        let psi = if trial % 3 == 0 {
            PureState::product(&unit_vector(&mut rng, da), &unit_vector(&mut rng, db))?
        } else {
            PureState::new(BipartiteDims::new(da, db)?, unit_vector(&mut rng, da * db))?
        };
        let report = pure_state_test(&psi, &ctx.tol)?;
        let s = report.schmidt.as_ref().expect("pure-state reports carry the decomposition");
        let separable = report.classification == Classification::PureSeparable;
        if separable != (s.rank == 1) {
            mismatches += 1;
        }
        if let Some(w) = report.results.first() {
            worst = worst.max((w.witness_value + s.coefficients[0] * s.coefficients[1]).abs());
            if !w.detected {
                mismatches += 1;
            }
        }
    }
    pass_if(
        mismatches == 0 && worst <= 1e-9,
        format!("1000 states: {mismatches} verdict mismatches, max |witness + d1 d2| = {}", sci(worst)),
    )
}

fn cyclic_positive_at(ctx: &Ctx, n: usize) -> entmap_core::Result<(f64, f64, f64)> {
    let (mut probe, mut choi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 1..n {
        let map = build_map(&phi(n, k))?;
        probe = probe.min(sampled_min_eigenvalue(&map, PROBES, ctx.seed ^ (n * 16 + k) as u64)?);
        choi = choi.max(map.is_completely_positive(&ctx.tol)?.choi_min_eigenvalue);
    }
    let resolution = match n {
        3 | 4 => 40,
        5 => 20,
        _ => 12,
    };
    Ok((probe, grid_min_f(n, resolution)?.value, choi))
}

fn cyclic_positive(ctx: &Ctx, sizes: &[usize]) -> entmap_core::Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for &n in sizes {
        let (probe, grid, choi) = cyclic_positive_at(ctx, n)?;
        ok &= probe >= PSD_FLOOR && (PSD_FLOOR..=1e-6).contains(&grid) && choi <= NCP_CEILING;
        parts.push(format!("n={n}: probe min {}, grid min f {}, max Choi min {}", sci(probe), sci(grid), sci(choi)));
    }
    pass_if(ok, parts.join("; "))
}

fn phi33_positive(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for family in [MapFamily::Phi33, MapFamily::Phi33Prime] {
        let map = build_map(&MapDescriptor::new(family.clone())?)?;
        let probe = sampled_min_eigenvalue(&map, PROBES, ctx.seed)?;
        let choi = map.is_completely_positive(&ctx.tol)?.choi_min_eigenvalue;
        ok &= probe >= PSD_FLOOR && choi <= NCP_CEILING;
        parts.push(format!("{family}: probe min {}, Choi min {}", sci(probe), sci(choi)));
    }
    pass_if(ok, parts.join("; "))
}

fn ex33_witness_block(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let mut rng = seeded(ctx.stream(331));
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let q = simplex(&mut rng, 3);
        let lambda = cyclic_witness(FamilyId::Ex33, &q, 1, &ctx.tol)?;
        let block = (q[2] - q[0]).min(q[0] + q[1]).min(q[1] + q[2]);
        worst = worst.max((lambda - block).abs());
    }
    pass_if(worst <= 1e-10, format!("1000 points: max |3 lambda_min - min(q3 - q1, q1 + q2, q2 + q3)| = {}", sci(worst)))
}

fn near_boundary(fid: FamilyId, q: &[f64]) -> entmap_core::Result<bool> {
    Ok(ppt_inequalities(fid, &FamilyParams::new(q.to_vec()))?.iter().any(|(l, r)| (l - r).abs() < BOUNDARY_BAND))
}

fn ppt_agreement(ctx: &Ctx, fid: FamilyId, salt: u64) -> entmap_core::Result<Outcome> {
    let mut rng = seeded(ctx.stream(salt));
    let (mut compared, mut mismatches) = (0, 0);
    for _ in 0..10_000 {
        let q = simplex(&mut rng, fid.n());
        if near_boundary(fid, &q)? {
            continue;
        }
        let numeric = !check_ppt(&build_family_at_support(fid, &q)?, &ctx.tol)?.detected;
        if numeric != ppt_closed_form(fid, &FamilyParams::new(q))? {
            mismatches += 1;
        }
        compared += 1;
    }
    pass_if(mismatches == 0, format!("{compared} points off the boundary band, {mismatches} mismatches"))
}

fn ex33_ppt_entangled(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let rows = sweep(FamilyId::Ex33, 30, &[phi(3, 1)], &ctx.tol, None)?;
    let hit = rows.iter().find(|r| {
        let q = &r.q;
        q[2] < q[0] && q[0] < 1.0 / 3.0 && q[1] * q[2] >= q[0] * q[0]
            && r.report.classification == Classification::PptEntangledDetected
    });
    match hit {
        Some(r) => pass_if(true, format!("q = {:?} is PPT and detected", r.q)),
        None => pass_if(false, "no PPT detected point with q3 < q1 < 1/3 on the grid-30 lattice".into()),
    }
}

fn ex34_detection_region(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let mut rng = seeded(ctx.stream(341));
    let mut worst = 0.0f64;
    let mut mismatches = 0;
    for _ in 0..1000 {
        let q = simplex(&mut rng, 3);
        let lambda = cyclic_witness(FamilyId::Ex34, &q, 1, &ctx.tol)?;
        let law = (q[2] - q[0]).min(q[0] - q[1]).min(q[1] + q[2]);
        worst = worst.max((lambda - law).abs());
        let region = (q[2] - q[0]).min(q[0] - q[1]);
        if region.abs() > BOUNDARY_BAND && (region < 0.0) != (lambda < 0.0) {
            mismatches += 1;
        }
    }
    pass_if(
        worst <= 1e-10 && mismatches == 0,
        format!("1000 points: max |3 lambda_min - block law| = {}, {mismatches} sign mismatches", sci(worst)),
    )
}

fn ex34_ppt_entangled(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let q = normalize(&[1.0, 2.0, 9.0]);
    let report = classify(&build_family_at_support(FamilyId::Ex34, &q)?, &[phi(3, 1)], &ctx.tol)?;
    pass_if(
        report.classification == Classification::PptEntangledDetected,
        format!("q = (1, 2, 9)/12: {}", report.classification),
    )
}

fn ex42_point() -> Vec<f64> {
    vec![1.0 / 7.0, 0.5, 2.0 / 7.0, 1.0 / 14.0]
}

/// `‖A‖₁ + 3q₁` with `A` the 4×4 circulant block of the realigned state.
fn ex42_circulant_norm(q: &[f64]) -> f64 {
    let (q1, q2, q3, q4) = (q[0], q[1], q[2], q[3]);
    0.25 * (1.0 + (q1 - q2 + q3 - q4).abs() + 2.0 * ((q1 - q3).powi(2) + (q2 - q4).powi(2)).sqrt()) + 3.0 * q1
}

fn ex42_ppt_point(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let r = check_ppt(&build_family_at_support(FamilyId::Ex42, &ex42_point())?, &ctx.tol)?;
    pass_if(!r.detected, format!("lambda_min(PT) = {}", sci(r.witness_value)))
}

fn ex42_ccnr_circulant(_: &Ctx) -> entmap_core::Result<Outcome> {
    let q = ex42_point();
    let numeric = trace_norm(&realign(&build_family_at_support(FamilyId::Ex42, &q)?));
    let oracle = ex42_circulant_norm(&q);
    pass_if(
        (numeric - oracle).abs() <= 1e-10 && numeric < 1.0,
        format!("singular values {}, circulant eigenvalues {}", sci(numeric), sci(oracle)),
    )
}

fn ex42_norm_printed(_: &Ctx) -> entmap_core::Result<Outcome> {
    let q = ex42_point();
    let numeric = trace_norm(&realign(&build_family_at_support(FamilyId::Ex42, &q)?));
    let formula = realign_norm_formula(FamilyId::Ex42, &FamilyParams::new(q))?;
    let printed = 0.9411;
    discrepancy(
        (numeric - printed).abs() <= 2e-3 && numeric < 1.0,
        (formula - numeric).abs() <= 1e-6,
        format!("printed {printed}, formula {formula:.6}, SVD oracle {numeric:.6}"),
    )
}

fn ex42_witness(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let w = cyclic_witness(FamilyId::Ex42, &ex42_point(), 1, &ctx.tol)?;
    let expected = -1.0 / 14.0;
    pass_if((w - expected).abs() <= 1e-10, format!("4 lambda_min = {}, q4 - q1 = {}", sci(w), sci(expected)))
}

fn quarter(rows: [[f64; 4]; 4]) -> ComplexMatrix {
    let flat: Vec<f64> = rows.iter().flatten().map(|x| x / 4.0).collect();
    ComplexMatrix::from_real(4, 4, &flat).expect("finite entries")
}

fn ex43_pt_block_min(q: &[f64]) -> entmap_core::Result<f64> {
    let (q1, q2, q3, q4) = (q[0], q[1], q[2], q[3]);
    let blocks = [
        quarter([[q1, q2, 0.0, 0.0], [q2, q3, 0.0, q1], [0.0, 0.0, q1, q2], [0.0, q1, q2, q3]]),
        quarter([[q4, q1, q2, 0.0], [q1, q2, 0.0, 0.0], [q2, 0.0, q4, q1], [0.0, 0.0, q1, q2]]),
        quarter([[q3, 0.0, q1, q2], [0.0, q1, q2, 0.0], [q1, q2, q3, 0.0], [q2, 0.0, 0.0, q1]]),
        quarter([[q2, 0.0, 0.0, q1], [0.0, q4, q1, q2], [0.0, q1, q2, 0.0], [q1, q2, 0.0, q4]]),
    ];
    blocks.iter().map(min_eig).try_fold(f64::INFINITY, |acc, x| Ok(acc.min(x?)))
}

fn ex43_pt_blocks(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let mut rng = seeded(ctx.stream(431));
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let q = simplex(&mut rng, 4);
        let numeric = min_eig(&partial_transpose_first(&build_family_at_support(FamilyId::Ex43, &q)?))?;
        worst = worst.max((numeric - ex43_pt_block_min(&q)?).abs());
    }
    pass_if(worst <= 1e-10, format!("1000 points: max |lambda_min(PT) - block minimum| = {}", sci(worst)))
}

fn ex43_map_blocks(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let mut rng = seeded(ctx.stream(432));
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let q = simplex(&mut rng, 4);
        let lambda = cyclic_witness(FamilyId::Ex43, &q, 1, &ctx.tol)?;
        let law = (q[3] - q[0]).min(q[0] - q[1]).min(q[1] + 2.0 * q[2]).min(q[2] + 2.0 * q[3]);
        worst = worst.max((lambda - law).abs());
    }
    pass_if(worst <= 1e-10, format!("1000 points: max |4 lambda_min - min(q4 - q1, q1 - q2, q2 + 2q3, q3 + 2q4)| = {}", sci(worst)))
}

fn ex43_family_point(q1: f64) -> Vec<f64> {
    let rest = (1.0 - 3.0 * q1) / 2.0;
    vec![q1, 2.0 * q1, rest, rest]
}

fn ex43_family(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let mut failures = Vec::new();
    let mut max_norm = 0.0f64;
    for i in 1..=20 {
        let q1 = i as f64 / 300.0;
        let rho = build_family_at_support(FamilyId::Ex43, &ex43_family_point(q1))?;
        let ppt = check_ppt(&rho, &ctx.tol)?;
        let ccnr = check_ccnr(&rho, &ctx.tol)?;
        let map = check_posmap(&rho, &phi(4, 1), &ctx.tol)?;
        max_norm = max_norm.max(ccnr.witness_value + 1.0);
        if ppt.detected || ccnr.detected || !map.detected {
            failures.push(format!("{q1:.4}"));
        }
    }
    pass_if(
        failures.is_empty(),
        format!("q1 = k/300 for k = 1..20: max realigned norm {}, failing q1: {:?}", sci(max_norm), failures),
    )
}

fn ex43_family_range(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    // q3 = q4 >= 4q1 allows q1 up to 1/11.
    let mut npt = Vec::new();
    for i in 0..=20 {
        let q1 = 1.0 / 15.0 + i as f64 * (1.0 / 11.0 - 1.0 / 15.0) / 20.0;
        let r = check_ppt(&build_family_at_support(FamilyId::Ex43, &ex43_family_point(q1))?, &ctx.tol)?;
        if r.detected {
            npt.push(q1);
        }
    }
    let detail = match (npt.first(), npt.last()) {
        (Some(lo), Some(hi)) => format!("PPT fails for q1 in [{lo:.5}, {hi:.5}] although q3 = q4 >= 4q1 there"),
        _ => "PPT holds on all of q1 <= 1/11".into(),
    };
    discrepancy(true, npt.is_empty(), detail)
}

fn ex43_norm_formula(_: &Ctx) -> entmap_core::Result<Outcome> {
    let q = ex43_family_point(1.0 / 15.0);
    let numeric = trace_norm(&realign(&build_family_at_support(FamilyId::Ex43, &q)?));
    let formula = realign_norm_formula(FamilyId::Ex43, &FamilyParams::new(q))?;
    discrepancy(
        numeric < 1.0 && formula < 1.0,
        (numeric - formula).abs() <= 1e-6,
        format!("q1 = 1/15: formula {formula:.6}, SVD oracle {numeric:.6}"),
    )
}

fn h_identity(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let mut rng = seeded(ctx.stream(51));
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let n = 2 + trial % 7;
        let x: Vec<f64> = simplex(&mut rng, n).iter().map(|p| p * 3.0 * n as f64).collect();
        let det = h_eval(&x);
        let closed = h_closed_form(&x);
        worst = worst.max((det - closed).abs() / closed.abs().max(1.0));
    }
    pass_if(worst <= 1e-9, format!("1000 points, n = 2..8: max relative gap {}", sci(worst)))
}

fn m_coefficient_claim(_: &Ctx) -> entmap_core::Result<Outcome> {
    let mut bad = Vec::new();
    for n in 3..=8 {
        let m = m_coefficients(n)?;
        for k in 1..=n - 2 {
            let by_det = m_by_determinant(n, k).round();
            if m.get(k) != by_det || m.get(k) != m_closed_form(n, k) {
                bad.push(format!("n={n} k={k}: {} vs {by_det} vs {}", m.get(k), m_closed_form(n, k)));
            }
        }
    }
    pass_if(bad.is_empty(), if bad.is_empty() { "n = 3..8 exact".into() } else { bad.join("; ") })
}

fn m_weighted(_: &Ctx) -> entmap_core::Result<Outcome> {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 3..=8 {
        let m = m_coefficients(n)?;
        let direct: f64 = (1..=n).map(|k| binomial(n, k) as f64 * m.get(k)).sum();
        ok &= direct == m.m0 && m.weighted_sum() == m.m0;
        parts.push(format!("n={n}: {direct}/{}", m.m0));
    }
    pass_if(ok, format!("sum C(n,k) M_k vs M0: {}", parts.join(", ")))
}

fn m_unweighted(_: &Ctx) -> entmap_core::Result<Outcome> {
    let mut parts = Vec::new();
    let mut all_equal = true;
    for n in 3..=8 {
        let m = m_coefficients(n)?;
        all_equal &= m.unweighted_sum() == m.m0;
        parts.push(format!("n={n}: {}/{}", m.unweighted_sum(), m.m0));
    }
    discrepancy(true, all_equal, format!("sum M_k vs M0: {}", parts.join(", ")))
}

fn ex54_reduction(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let mut rng = seeded(ctx.stream(54));
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let q = simplex(&mut rng, 3);
        for (a, b) in [(FamilyId::Ex54 { n: 3 }, FamilyId::Ex33), (FamilyId::Ex55 { n: 3 }, FamilyId::Ex34)] {
            let x = build_family_at_support(a, &q)?;
            let y = build_family_at_support(b, &q)?;
            worst = worst.max((x.matrix() - y.matrix()).max_abs());
        }
    }
    pass_if(worst == 0.0, format!("max entrywise gap {}", sci(worst)))
}

fn ex54_detection(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let mut rng = seeded(ctx.stream(541));
    let (mut compared, mut mismatches) = (0, 0);
    for n in 3..=5 {
        for _ in 0..300 {
            let q = simplex(&mut rng, n);
            for k in 1..n {
                let law = q[n - k] - q[0];
                if law.abs() <= BOUNDARY_BAND {
                    continue;
                }
                let w = cyclic_witness(FamilyId::Ex54 { n }, &q, k, &ctx.tol)?;
                if (w < -ctx.tol.psd_slack) != (law < 0.0) {
                    mismatches += 1;
                }
                compared += 1;
            }
        }
    }
    pass_if(mismatches == 0, format!("{compared} (q, k) pairs, n = 3..5: {mismatches} verdicts differ from sign(q_(n+1-k) - q1)"))
}

fn ex54_ppt(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 3..=5 {
        let o = ppt_agreement(ctx, FamilyId::Ex54 { n }, 540 + n as u64)?;
        ok &= o.status == Status::Pass;
        parts.push(format!("n={n}: {}", o.detail));
    }
    pass_if(ok, parts.join("; "))
}

/// Verdict mismatches of `law` against numeric detection by `Φ^{(k)}` on the
/// two-component family, over random points off the law's boundary.
fn ex55_mismatches(ctx: &Ctx, salt: u64, ks: fn(usize) -> Vec<usize>, law: fn(&[f64], usize, usize) -> f64) -> entmap_core::Result<(usize, usize)> {
    let mut rng = seeded(ctx.stream(salt));
    let (mut compared, mut mismatches) = (0, 0);
    for n in 3..=5 {
        for _ in 0..300 {
            let q = simplex(&mut rng, n);
            for k in ks(n) {
                let l = law(&q, n, k);
                if l.abs() <= BOUNDARY_BAND {
                    continue;
                }
                let w = cyclic_witness(FamilyId::Ex55 { n }, &q, k, &ctx.tol)?;
                if (w < -ctx.tol.psd_slack) != (l < 0.0) {
                    mismatches += 1;
                }
                compared += 1;
            }
        }
    }
    Ok((compared, mismatches))
}

fn ex55_shift_one(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let (compared, mismatches) =
        ex55_mismatches(ctx, 551, |_| vec![1], |q, n, _| (q[n - 1] - q[0]).min(q[0] - q[1]))?;
    pass_if(mismatches == 0, format!("{compared} points: {mismatches} verdicts differ from q_n < q1 or q1 < q2"))
}

fn ex55_higher_shift(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let higher = |n: usize| (2..n).collect();
    // Zero-based: the second block compares q_(n+2-k) with q2.
    let (c1, derived) = ex55_mismatches(ctx, 552, higher, |q, n, k| (q[n - k] - q[0]).min(q[n + 1 - k] - q[1]))?;
    let (c2, printed) = ex55_mismatches(ctx, 552, higher, |q, n, k| (q[n - k] - q[0]).min(q[0] - q[1]))?;
    discrepancy(
        derived == 0,
        printed == 0,
        format!(
            "k >= 2: q_(n+1-k) < q1 or q1 < q2 mismatches {printed}/{c2}; q_(n+1-k) < q1 or q_(n+2-k) < q2 mismatches {derived}/{c1}"
        ),
    )
}

fn indecomposability(ctx: &Ctx) -> entmap_core::Result<Outcome> {
    let mut found = Vec::new();
    let mut missing = Vec::new();
    for (n, grid) in [(3, 30), (4, 20), (5, 20)] {
        for k in 1..n {
            if n % 2 == 0 && 2 * k == n {
                continue;
            }
            let rows = sweep(FamilyId::Ex54 { n }, grid, &[phi(n, k)], &ctx.tol, None)?;
            match rows.iter().find(|r| r.report.classification == Classification::PptEntangledDetected) {
                Some(_) => found.push(format!("({n},{k})")),
                None => missing.push(format!("({n},{k})")),
            }
        }
    }
    pass_if(missing.is_empty(), format!("PPT and detected rows for {}; none for {:?}", found.join(" "), missing))
}
