use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use superint::output::{json_bytes, Table};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_superint"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn config(name: &str) -> String {
    configs().join(name).to_str().unwrap().to_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let k = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[k]).collect()
}

#[test]
fn monopole_verify_exit_codes() {
    let ok = run(&["verify", "--system", "monopole"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    let report = json(&ok);
    assert_eq!(report["passed"], true);
    assert_eq!(report["integrals"].as_object().unwrap().len(), 7);

    let bad = run(&["verify", "--system", "monopole", "--potential", "coulomb-only"]);
    assert_eq!(code(&bad), 2);
    let report = json(&bad);
    assert_eq!(report["passed"], false);
    // the missing g²/(2r²) term shows up in the first-order equations of R1..R3
    let r1 = &report["integrals"]["R1"]["max_residual_by_equation"];
    assert!(r1["first_order.x"].as_f64().unwrap() > 1e-2);
    assert!(report["integrals"]["X1"]["max_residual"].as_f64().unwrap() < 1e-6);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("verification failed"));
}

#[test]
fn every_named_system_verifies() {
    for sys in ["constant_b", "helical", "monopole"] {
        let o = run(&["verify", "--system", sys]);
        assert_eq!(code(&o), 0, "{sys}");
    }
    let o = run(&["verify", "--system", "monopole", "--hbar", "0.5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["mode"], "quantum");
}

#[test]
fn tolerance_flag_overrides() {
    let o = run(&["verify", "--system", "constant_b", "--tolerance", "1e-300"]);
    // constant-field residuals are exact zeros except bracket rounding
    let report = json(&o);
    let worst = report["bracket_matrix"]["max_abs"][0]
        .as_array()
        .unwrap()
        .iter()
        .fold(0.0f64, |m, v| m.max(v.as_f64().unwrap()));
    assert_eq!(code(&o), if worst > 1e-300 { 2 } else { 0 });
    let o = run(&["fields-check", "--system", "monopole", "--tolerance", "1e-15"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn spec_file_catches_wrong_integral() {
    let dir = tempfile::tempdir().unwrap();
    let good = run(&[
        "verify",
        "--config",
        &config("constant_b.json"),
        "--spec",
        &config("constant_b_extra_integrals.json"),
    ]);
    assert_eq!(code(&good), 0);
    assert!(json(&good)["integrals"]["X1^2"]["order"] == 2);

    let spec = write(&dir, "spec.json", r#"{"integrals": [{"name": "p3", "s": "e3"}]}"#);
    let bad = run(&["verify", "--system", "constant_b", "--spec", &spec]);
    assert_eq!(code(&bad), 2);
    let report = json(&bad);
    assert!(report["integrals"]["p3"]["max_residual"].as_f64().unwrap() > 1e-3);
    assert!(report["integrals"]["X3"]["max_residual"].as_f64().unwrap() < 1e-12);

    let broken = write(
        &dir,
        "broken.json",
        r#"{"integrals": [{"name": "q", "s": "from:nothing"}]}"#,
    );
    assert_eq!(
        code(&run(&["verify", "--system", "constant_b", "--spec", &broken])),
        1
    );
}

#[test]
fn identical_runs_are_byte_identical() {
    let cases: [&[&str]; 5] = [
        &["verify", "--system", "monopole", "--seed", "11"],
        &["algebra", "--system", "constant_b", "--seed", "11"],
        &["fields-check", "--system", "helical", "--seed", "11"],
        &["simulate", "--config", &config("monopole.json")],
        &["spectrum", "--config", &config("landau_spectrum.json")],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let other = run(&["verify", "--system", "monopole", "--seed", "12"]);
    assert_ne!(other.stdout, run(cases[0]).stdout);
}

#[test]
fn out_flag_writes_file_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&[
        "fields-check",
        "--system",
        "constant_b",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["points"], 100);
}

#[test]
fn unknown_keys_are_rejected_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"system": {"model": "helical"}, "t_ned": 5}"#, "t_ned"),
        (
            r#"{"system": {"model": "helical"}, "integrator": {"tol": 1}}"#,
            "integrator",
        ),
        (r#"{"system": {"model": "constant_b", "g": 1}}"#, "system"),
        (
            "{\"system\": {\"model\": \"helical\"},\n\"initial\": {\"x\": [0, 0], \"p\": [1, 1, 1]}}",
            "initial.x",
        ),
    ];
    for (text, field) in cases {
        let p = write(&dir, "c.json", text);
        let o = run(&["simulate", "--config", &p]);
        assert_eq!(code(&o), 1, "{text}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(field) && err.contains("line"), "{err}");
    }
    let p = write(
        &dir,
        "job.json",
        r#"{"system": "constant_b", "parameters": {"B": 1}}"#,
    );
    let o = run(&["spectrum", "--config", &p]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parameters"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["no-such-command"])), 1);
    assert_eq!(code(&run(&["simulate"])), 1);
    assert_eq!(code(&run(&["simulate", "--system", "torus"])), 1);
    assert_eq!(
        code(&run(&["simulate", "--format", "xml", "--system", "helical"])),
        1
    );
    assert_eq!(
        code(&run(&["trajectory", "--closed-form", "--system", "monopole"])),
        1
    );
    assert_eq!(code(&run(&["algebra", "--system", "helical"])), 1);
    assert_eq!(
        code(&run(&[
            "verify",
            "--system",
            "helical",
            "--potential",
            "coulomb-only"
        ])),
        1
    );
    assert_eq!(
        code(&run(&[
            "simulate",
            "--config",
            &config("monopole.json"),
            "--system",
            "helical"
        ])),
        1
    );
    assert_eq!(
        code(&run(&["simulate", "--config", "/definitely/not/here.json"])),
        1
    );
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn simulate_csv_layout() {
    let expect = [
        ("constant_b", "t,x,y,z,p1,p2,p3,H,X1,X2,X3,X4,X5"),
        ("helical", "t,x,y,z,p1,p2,p3,H,X1,X2,X3"),
        ("monopole", "t,x,y,z,p1,p2,p3,H,X1,X2,X3,X^2,R1,R2,R3"),
    ];
    for (sys, header) in expect {
        let o = run(&["simulate", "--system", sys]);
        assert_eq!(code(&o), 0, "{sys}");
        let text = String::from_utf8(o.stdout).unwrap();
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(header));
        for line in lines.take(20) {
            for field in line.split(',') {
                let mantissa = field.split('e').next().unwrap();
                assert_eq!(
                    mantissa.chars().filter(char::is_ascii_digit).count(),
                    17,
                    "{field}"
                );
                field.parse::<f64>().unwrap();
            }
        }
    }
}

#[test]
fn simulate_conserves_and_samples() {
    let o = run(&["simulate", "--config", &config("constant_b.json")]);
    let (h, rows) = csv_rows(std::str::from_utf8(&o.stdout).unwrap());
    for name in ["H", "X1", "X2", "X3", "X4", "X5"] {
        let c = column(&h, &rows, name);
        let drift = c.iter().fold(0.0f64, |m, v| m.max((v - c[0]).abs()));
        assert!(drift < 1e-7, "{name}: {drift}");
    }
    let t = column(&h, &rows, "t");
    assert_eq!(t[0], 0.0);
    assert!((t.last().unwrap() - 50.0).abs() < 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        "s.json",
        r#"{"system": {"model": "constant_b", "b": 1.3}, "t_end": 5, "samples": 6}"#,
    );
    let o = run(&["simulate", "--config", &p, "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[5][0].as_f64(), Some(5.0));
    assert_eq!(v["columns"][7], "H");
}

#[test]
fn boris_drift_is_reported_as_failure() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        "b.json",
        r#"{"system": {"model": "helical"}, "t_end": 10, "integrator": {"method": "boris", "max_step": 0.01}}"#,
    );
    let o = run(&["simulate", "--config", &p]);
    assert_eq!(code(&o), 2);
    // the artifact is still written
    assert!(o.stdout.starts_with(b"t,x,y,z"));
    let o = run(&["simulate", "--config", &p, "--tolerance", "1e-2"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn bounded_quasi_helical_orbit() {
    let o = run(&["simulate", "--config", &config("helical_bounded.json")]);
    assert_eq!(code(&o), 0);
    let (h, rows) = csv_rows(std::str::from_utf8(&o.stdout).unwrap());
    let t = column(&h, &rows, "t");
    let z = column(&h, &rows, "z");
    // libration: z stays inside one band of width 2βπ
    let zmax = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(zmax < 3.0 * std::f64::consts::PI, "{zmax}");
    // and the (y, z) projection keeps revisiting the same region
    let y = column(&h, &rows, "y");
    let split = t.partition_point(|&ti| ti < 50.0);
    let range = |v: &[f64]| {
        v.iter()
            .fold((f64::MAX, f64::MIN), |(a, b), x| (a.min(*x), b.max(*x)))
    };
    let (y0, y1) = range(&y[..split]);
    let (y2, y3) = range(&y[split..]);
    assert!(y2 >= y0 - 0.5 && y3 <= y1 + 0.5, "{y0} {y1} {y2} {y3}");

    let o = run(&["simulate", "--config", &config("helical_unbounded.json")]);
    let (h, rows) = csv_rows(std::str::from_utf8(&o.stdout).unwrap());
    let z = column(&h, &rows, "z");
    assert!(z.last().unwrap().abs() > 20.0 * 3.0 * std::f64::consts::PI);
}

#[test]
fn closed_form_column() {
    for (sys, tol) in [("constant_b", 1e-7), ("helical", 1e-5)] {
        let o = run(&["trajectory", "--closed-form", "--system", sys]);
        assert_eq!(code(&o), 0, "{sys}");
        let (h, rows) = csv_rows(std::str::from_utf8(&o.stdout).unwrap());
        assert_eq!(h.last().unwrap(), "closed_form_error");
        let e = column(&h, &rows, "closed_form_error");
        assert_eq!(e[0], 0.0);
        assert!(e.iter().all(|v| *v < tol), "{sys}");
    }
    let plain = run(&["trajectory", "--system", "helical"]);
    assert_eq!(plain.stdout, run(&["simulate", "--system", "helical"]).stdout);
}

#[test]
fn algebra_reports() {
    let o = run(&["algebra", "--system", "constant_b"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 21);
    assert!(v["casimirs"]["first"].as_f64().unwrap() < 1e-10);
    let o = run(&["algebra", "--system", "monopole"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["runge_lenz_checked"], true);
    let o = run(&["algebra", "--system", "monopole", "--potential", "coulomb-only"]);
    let v = json(&o);
    assert_eq!(v["runge_lenz_checked"], false);
    assert!(v["runge_lenz_drift"].as_f64().unwrap() > 1e-3);
}

#[test]
fn fields_check_all_systems() {
    for sys in ["constant_b", "helical", "monopole"] {
        let o = run(&["fields-check", "--system", sys]);
        assert_eq!(code(&o), 0, "{sys}");
        assert!(json(&o)["max_div_b"].as_f64().unwrap() < 1e-6);
    }
    let o = run(&["fields-check", "--system", "monopole", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("key,value\nmax_curl_residual,"));
}

#[test]
fn spectrum_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let ef = dir.path().join("ef.csv");
    let o = run(&[
        "spectrum",
        "--config",
        &config("landau_spectrum.json"),
        "--eigenfunctions",
        ef.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let reference: Vec<f64> = v["analytic_reference"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(reference, [0.5, 1.5, 2.5, 3.5, 4.5, 5.5]);
    assert!(v["max_rel_error"].as_f64().unwrap() < 1e-4);

    // eigenfunctions on disk are orthonormal under the trapezoid rule
    let (h, rows) = csv_rows(&fs::read_to_string(&ef).unwrap());
    assert_eq!(h, ["x", "psi0", "psi1", "psi2", "psi3", "psi4", "psi5"]);
    let x = column(&h, &rows, "x");
    let dx = x[1] - x[0];
    for i in 0..6 {
        for j in 0..6 {
            let a = column(&h, &rows, &format!("psi{i}"));
            let b = column(&h, &rows, &format!("psi{j}"));
            let dot: f64 = a.iter().zip(&b).map(|(p, q)| p * q).sum::<f64>() * dx;
            assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-8);
        }
    }

    let o = run(&["spectrum", "--config", &config("oscillator_spectrum.json")]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["analytic_reference"].is_array());

    let o = run(&["spectrum", "--config", &config("helical_spectrum.json")]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v.get("analytic_reference").is_none());
    assert_eq!(v["q"].as_f64(), Some(-4.0));
    assert_eq!(v["characteristic_values"]["even"].as_array().unwrap().len(), 4);

    assert_eq!(code(&run(&["spectrum"])), 1);
    let tiny = write(
        &dir,
        "tiny.json",
        r#"{"system": "constant_b", "grid": {"lo": -2, "hi": 2, "n": 200}, "n_levels": 2}"#,
    );
    assert_eq!(code(&run(&["spectrum", "--config", &tiny])), 1);
}

#[test]
fn reports_have_sorted_keys() {
    for args in [
        &["verify", "--system", "monopole"][..],
        &["algebra", "--system", "monopole"],
        &["spectrum", "--config", &config("helical_spectrum.json")],
    ] {
        let o = run(args);
        // parsing sorts keys; re-emitting must reproduce the text exactly
        assert_eq!(json_bytes(&json(&o)), o.stdout, "{args:?}");
    }
}

#[test]
fn empty_diagnostics_are_valid_files() {
    let t = Table::new(vec!["t".into(), "H".into()]);
    assert_eq!(t.to_csv().unwrap(), b"t,H\n");
    let v: Value = serde_json::from_slice(&json_bytes(&t.to_json())).unwrap();
    assert_eq!(v["rows"], Value::Array(vec![]));

    let dir = tempfile::tempdir().unwrap();
    let spec = write(&dir, "empty.json", r#"{"integrals": []}"#);
    let o = run(&["verify", "--system", "helical", "--spec", &spec]);
    assert_eq!(code(&o), 0);
}
