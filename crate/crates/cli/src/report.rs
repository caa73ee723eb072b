//! Rendering of detection reports, sweep tables and map summaries.

use std::fmt::Write;

use entmap_core::criteria::{DetectionReport, SweepRow};
use entmap_core::matcore::{ComplexMatrix, Tolerance};
use entmap_core::posmaps::{build_map, ncp_quick_check, MapDescriptor, NcpVerdict};
use serde::Serialize;

use crate::error::CliResult;

/// Twelve significant digits; negative zero prints as zero.
pub fn sci(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub fn render_detection(report: &DetectionReport) -> String {
    let mut out = String::new();
    writeln!(out, "{:<16} {:<9} {:>19} {:>19}", "criterion", "verdict", "witness", "normalized").unwrap();
    for r in &report.results {
        let verdict = if r.detected { "detect" } else { "pass" };
        writeln!(
            out,
            "{:<16} {:<9} {:>19} {:>19}",
            r.criterion.to_string(),
            verdict,
            sci(r.witness_value),
            sci(r.normalized_witness)
        )
        .unwrap();
    }
    if let Some(s) = &report.schmidt {
        let coeffs: Vec<String> = s.coefficients.iter().map(|c| sci(*c)).collect();
        writeln!(out, "schmidt rank {}: {}", s.rank, coeffs.join(" ")).unwrap();
    }
    writeln!(out, "classification: {}", report.classification).unwrap();
    out
}

/// Columns `q1..qn, ppt, ppt_min_eig, ccnr, ccnr_witness`, then a verdict and a
/// normalized witness column per map, then `classification`. Verdicts are
/// `pass` or `detect` for maps and `pass` or `fail` for the two criteria.
pub fn render_sweep_csv(n: usize, maps: &[MapDescriptor], rows: &[SweepRow]) -> String {
    let mut header: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
    header.extend(["ppt", "ppt_min_eig", "ccnr", "ccnr_witness"].map(String::from));
    for m in maps {
        header.push(m.label());
        header.push(format!("{}_witness", m.label()));
    }
    header.push("classification".into());
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let mut cells: Vec<String> = row.q.iter().map(|x| sci(*x)).collect();
        for (i, r) in row.report.results.iter().enumerate() {
            let verdict = match (i < 2, r.detected) {
                (true, false) | (false, false) => "pass",
                (true, true) => "fail",
                (false, true) => "detect",
            };
            cells.push(verdict.into());
            cells.push(sci(r.normalized_witness));
        }
        cells.push(row.report.classification.to_string());
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

type JsonMatrix = Vec<Vec<[f64; 2]>>;

fn json_matrix(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct MapSummary {
    pub label: String,
    pub dim_in: usize,
    pub dim_out: usize,
    pub certified_positive: bool,
    pub plus: Vec<JsonMatrix>,
    pub minus: Vec<JsonMatrix>,
    pub choi_min_eigenvalue: f64,
    pub completely_positive: bool,
    /// `proved-ncp` or `inconclusive`.
    pub ncp_quick_check: String,
    /// Absent when some minus operator lies outside the span of the plus ones.
    pub ncp_min_norm: Option<f64>,
}

pub fn map_summary(desc: &MapDescriptor, tol: &Tolerance) -> CliResult<MapSummary> {
    let phi = build_map(desc)?;
    let form = phi.kraus_form().expect("built-in maps carry their Kraus-difference form").clone();
    let cp = phi.is_completely_positive(tol)?;
    let ncp = ncp_quick_check(&form)?;
    Ok(MapSummary {
        label: desc.label(),
        dim_in: phi.dim_in(),
        dim_out: phi.dim_out(),
        certified_positive: desc.family.is_certified_positive(),
        plus: form.plus.iter().map(json_matrix).collect(),
        minus: form.minus.iter().map(json_matrix).collect(),
        choi_min_eigenvalue: cp.choi_min_eigenvalue,
        completely_positive: cp.completely_positive,
        ncp_quick_check: match ncp.verdict {
            NcpVerdict::ProvedNcp => "proved-ncp",
            NcpVerdict::Inconclusive => "inconclusive",
        }
        .into(),
        ncp_min_norm: ncp.min_norm.is_finite().then_some(ncp.min_norm),
    })
}

pub fn render_map_text(s: &MapSummary) -> String {
    let mut out = String::new();
    writeln!(out, "map {} : M_{} -> M_{}", s.label, s.dim_in, s.dim_out).unwrap();
    writeln!(out, "certified positive: {}", s.certified_positive).unwrap();
    let entry = |[re, im]: [f64; 2]| if im == 0.0 { format!("{re}") } else { format!("{re}{im:+}i") };
    for (sign, list) in [("+", &s.plus), ("-", &s.minus)] {
        for (i, m) in list.iter().enumerate() {
            writeln!(out, "{sign} operator {i}:").unwrap();
            for row in m {
                let cells: Vec<String> = row.iter().map(|z| entry(*z)).collect();
                writeln!(out, "    [{}]", cells.join(", ")).unwrap();
            }
        }
    }
    writeln!(out, "choi min eigenvalue: {}", sci(s.choi_min_eigenvalue)).unwrap();
    writeln!(out, "completely positive: {}", s.completely_positive).unwrap();
    let norm = s.ncp_min_norm.map_or_else(|| "outside span".to_string(), sci);
    writeln!(out, "ncp quick check: {} (min norm {norm})", s.ncp_quick_check).unwrap();
    out
}
