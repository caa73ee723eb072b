use std::path::PathBuf;
use std::process::{Command, Output};

use entmap_cli::statefile::{LoadMode, StateFile};
use entmap_core::bipartite::{BipartiteDims, DensityMatrix};
use entmap_core::matcore::Tolerance;
use entmap_core::sampling::{density, seeded};
use proptest::prelude::*;

fn entmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entmap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn classification(o: &Output) -> String {
    stdout(o).lines().find_map(|l| l.strip_prefix("classification: ")).unwrap_or_default().to_string()
}

#[test]
fn detect_bundled_states() {
    for (file, want) in [
        ("omega2.state.json", "NPT_Entangled"),
        ("ex42_ppt_point.state.json", "PPT_Entangled_Detected"),
        ("maximally_mixed_3x3.state.json", "Undetected"),
    ] {
        let o = entmap(&["detect", "--state", &data(file)]);
        assert_eq!(o.status.code(), Some(0), "{file}");
        assert_eq!(classification(&o), want, "{file}");
    }
}

#[test]
fn detect_with_explicit_map() {
    let o = entmap(&["detect", "--state", &data("ex42_ppt_point.state.json"), "--map", "phi:4:1", "--tol", "1e-9"]);
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("phi-4-1") && l.contains("detect") && l.contains("-1.78571428571e-2") && l.contains("-7.14285714286e-2")), "{out}");
}

#[test]
fn input_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dims\": [2, 2], \"data\": []}").unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["detect".into(), "--state".into(), bad.to_string_lossy().into_owned()],
        vec!["detect".into(), "--state".into(), dir.path().join("missing.json").to_string_lossy().into_owned()],
        vec!["detect".into(), "--state".into(), data("omega2.state.json"), "--map".into(), "phi:3:1".into()],
        vec!["detect".into(), "--state".into(), data("omega2.state.json"), "--map".into(), "phi:9".into()],
        vec!["verify".into(), "--scope".into(), "section-9".into()],
        vec!["sweep".into(), "--family".into(), "ex54".into(), "--grid".into(), "4".into(), "--out".into(), "x".into()],
        vec!["map".into(), "show".into(), "--family".into(), "phi".into(), "--n".into(), "3".into()],
        vec!["frobnicate".into()],
    ];
    for args in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(entmap(&refs).status.code(), Some(2), "{args:?}");
    }
}

fn sweep_csv(args: &[&str]) -> String {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let mut full = vec!["sweep", "--out", out.to_str().unwrap()];
    full.extend_from_slice(args);
    let o = entmap(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(out).unwrap()
}

#[test]
fn sweep_row_count_and_header() {
    let csv = sweep_csv(&["--family", "ex33", "--grid", "10"]);
    assert!(csv.ends_with('\n'));
    assert_eq!(csv.lines().count(), 1 + 66);
    let csv = sweep_csv(&["--family", "ex54", "--n", "4", "--grid", "8"]);
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("q1,q2,q3,q4,ppt,ppt_min_eig,ccnr,ccnr_witness,phi-4-1,"), "{header}");
    assert!(header.ends_with(",classification"));
    assert!(!header.contains("q5"));
}

#[test]
fn sweep_finds_ppt_rows_missed_by_realignment() {
    let csv = sweep_csv(&["--family", "ex42", "--grid", "40"]);
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let (ppt, ccnr, phi) = (col("ppt"), col("ccnr"), col("phi-4-1"));
    let hit = lines.map(|l| l.split(',').collect::<Vec<_>>()).any(|r| r[ppt] == "pass" && r[ccnr] == "pass" && r[phi] == "detect");
    assert!(hit);
}

#[test]
fn verify_scopes() {
    let o = entmap(&["verify", "--scope", "section-2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let claims: Vec<&str> = out.lines().filter(|l| l.contains("section-2")).collect();
    assert!(!claims.is_empty() && claims.iter().all(|l| l.starts_with("PASS")), "{out}");

    let o = entmap(&["verify", "--scope", "section-4", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.contains("ex42-norm-0.9411")).unwrap();
    assert!(line.starts_with("DISCREPANCY-EXPECTED"), "{line}");
    assert!(line.contains("0.941071") && line.contains("0.94016"), "{line}");
}

#[test]
fn map_show_json() {
    let o = entmap(&["map", "show", "--family", "phi", "--n", "4", "--k", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["label"], "phi-4-1");
    assert_eq!(v["plus"].as_array().unwrap().len(), 8);
    assert!(v["choi_min_eigenvalue"].as_f64().unwrap() <= -1e-6);
    let o = entmap(&["map", "show", "--family", "delta", "--n", "3"]);
    assert!(stdout(&o).contains("completely positive: true"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn state_file_round_trip_is_exact(seed in any::<u64>(), da in 1usize..5, db in 1usize..5) {
        let tol = Tolerance::default();
        let mut rng = seeded(seed);
        let dims = BipartiteDims::new(da, db).unwrap();
        let rho = DensityMatrix::new(dims, density(&mut rng, da * db), &tol).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        StateFile::from_density(&rho).write(&path).unwrap();
        let back = StateFile::read(&path).unwrap().to_density(LoadMode::Validated, &tol).unwrap();
        prop_assert_eq!(back.dims(), dims);
        for (a, b) in rho.matrix().data().iter().zip(back.matrix().data()) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }
}
