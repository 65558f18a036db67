use std::process::{Command, Output};

use pdem::report::{levels_from_csv, SpectrumReport};

fn pdem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdem")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_lists_entries_and_exclusions() {
    let o = pdem(&["catalog"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["box", "coulomb", "rosen_morse_i", "scarf_ii", "generalized_poschl_teller"] {
        assert!(text.contains(name), "{name} missing");
    }
    assert!(text.contains("positive definiteness"));
}

#[test]
fn csv_and_json_carry_identical_doubles() {
    let args = ["spectrum", "--potential", "trig_poschl_teller", "--n-levels", "4", "--oracle"];
    let json = pdem(&[&args[..], &["--format", "json"]].concat());
    let csv = pdem(&[&args[..], &["--format", "csv"]].concat());
    assert!(json.status.success() && csv.status.success());
    let report = SpectrumReport::from_json(&stdout(&json)).unwrap();
    let rows = levels_from_csv(&stdout(&csv)).unwrap();
    assert_eq!(rows, report.levels);
    for (n, l) in report.levels.iter().enumerate() {
        assert_eq!(l.n, n);
        let rel = (l.e_closed - l.e_oracle.unwrap()).abs() / l.e_closed.abs().max(1e-12);
        assert_eq!(l.rel_err, Some(rel));
    }
}

#[test]
fn zero_levels_for_no_bound_state() {
    let o = pdem(&["spectrum", "--potential", "hyperbolic_poschl_teller"]);
    assert!(o.status.success());
    let r = SpectrumReport::from_json(&stdout(&o)).unwrap();
    assert!(r.levels.is_empty());
    assert_eq!(r.counting.to_string(), "zero");
}

#[test]
fn too_many_levels_is_a_usage_error() {
    let o = pdem(&["spectrum", "--potential", "coulomb", "--params", "alpha=0.1", "--n-levels", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_input_exits_2() {
    for args in [
        &["spectrum", "--potential", "nope"][..],
        &["spectrum", "--potential", "box", "--params", "alpha"],
        &["spectrum", "--potential", "box", "--params", "alpha=x"],
        &["spectrum", "--potential", "box", "--params", "omega=1"],
        &["spectrum", "--potential", "box", "--format", "xml"],
        &["spectrum", "--potential", "box", "--preset", "weird"],
        &["verify", "--potential", "scarf_ii"],
        &["wavefunction", "--potential", "morse", "--n", "3"],
        &["frobnicate"],
    ] {
        assert_eq!(pdem(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn wavefunction_file_is_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.csv");
    let o = pdem(&[
        "wavefunction", "--potential", "box", "--params", "alpha=0.5", "--n", "2", "--samples", "2001",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,psi,f,v_eff"));
    let rows: Vec<Vec<f64>> =
        lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 2001);
    let h = rows[1][0] - rows[0][0];
    let norm: f64 = rows.iter().map(|r| r[1] * r[1]).sum::<f64>() * h;
    assert!((norm - 1.0).abs() < 1e-6, "{norm}");
    let x = rows[1000][0];
    assert!(x.abs() < 1e-12);
    assert!((rows[1000][2] - 1.0).abs() < 1e-12);
}

#[test]
fn sweep_tracks_coulomb_counting() {
    let o = pdem(&["sweep", "--potential", "coulomb", "--from", "0.1", "--to", "0.4", "--steps", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,counting,e_0,e_1,e_2");
    assert!(lines[1].contains("finite(3)"));
    assert!(lines[4].contains("finite(1)"));
    assert_eq!(lines.len(), 5);
}

#[test]
fn verify_all_reports_every_entry() {
    let o = pdem(&["verify", "--potential", "all"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 10);
    let all_pass = reports.iter().all(|r| r["pass"] == true);
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 1 }));
}

#[test]
fn verify_single_entry_passes() {
    for name in ["box", "morse", "rosen_morse_i"] {
        let o = pdem(&["verify", "--potential", name, "--preset", "zk"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
}
