#![allow(clippy::excessive_precision)]

use std::io::Write;
use std::process::{Command, Output};

fn krein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krein"))
        .args(args)
        .output()
        .expect("run krein")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parses CSV output into `(label, cells)` rows, checking the header.
fn csv_rows(o: &Output, columns: &[&str]) -> Vec<(String, Vec<Option<f64>>)> {
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let mut expected = vec!["label".to_string()];
    expected.extend(columns.iter().map(|c| c.to_string()));
    assert_eq!(header, expected);
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            let cells = r
                .iter()
                .skip(1)
                .map(|c| (!c.is_empty()).then(|| c.parse().unwrap()))
                .collect();
            (r[0].to_string(), cells)
        })
        .collect()
}

fn row<'a>(rows: &'a [(String, Vec<Option<f64>>)], label: &str) -> &'a [Option<f64>] {
    &rows
        .iter()
        .find(|(l, _)| l == label)
        .unwrap_or_else(|| panic!("no row {label}"))
        .1
}

#[test]
fn static_difference_is_x_times_xi() {
    let out = krein(&["greens", "--which", "diff", "--grid-m", "3"]);
    assert!(out.status.success());
    let rows = csv_rows(&out, &["x", "xi", "re", "im"]);
    assert_eq!(rows.len(), 9);
    for (_, v) in rows {
        let (x, xi, re) = (v[0].unwrap(), v[1].unwrap(), v[2].unwrap());
        assert_eq!(re, x * xi);
    }
}

#[test]
fn dd_kernel_at_zero_is_negated_static() {
    let out = krein(&["greens", "--which", "dd", "--z", "0", "--grid-m", "3"]);
    let rows = csv_rows(&out, &["x", "xi", "re", "im"]);
    assert!((row(&rows, "1:1")[2].unwrap() + 0.25).abs() < 1e-15);
}

#[test]
fn dd_pole_exits_2() {
    let z = format!("{},0", std::f64::consts::PI.powi(2));
    let out = krein(&["greens", "--which", "dd", "--z", &z, "--grid-m", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let out = krein(&["--format", "json", "greens", "--which", "dd", "--z", &z]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"]["error"]["code"], 2);
}

#[test]
fn negative_and_complex_z_are_accepted() {
    let out = krein(&["greens", "--which", "dn", "--z", "-3,1.5", "--grid-m", "2"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = csv_rows(&out, &["x", "xi", "re", "im"]);
    assert!(row(&rows, "1:1")[3].unwrap() != 0.0);
}

#[test]
fn eigenvalue_methods_agree() {
    let analytic = csv_rows(&krein(&["eigs", "--count", "2"]), &["index", "z", "k"]);
    assert!((analytic[0].1[1].unwrap() - 2.4674011).abs() < 1e-7);
    assert!((analytic[1].1[1].unwrap() - 22.2066099).abs() < 1e-7);

    let roots = csv_rows(
        &krein(&["eigs", "--count", "1", "--method", "denominator"]),
        &["index", "z", "k"],
    );
    assert!((roots[0].1[1].unwrap() - analytic[0].1[1].unwrap()).abs() <= 1e-9 * 2.5);

    let discrete = krein(&[
        "eigs", "--count", "1", "--method", "discrete", "--n", "1000",
    ]);
    let discrete = csv_rows(&discrete, &["index", "z", "k"]);
    let z0 = analytic[0].1[1].unwrap();
    assert!((discrete[0].1[1].unwrap() - z0).abs() / z0 < 0.01);
}

#[test]
fn discrete_eigs_need_n() {
    assert_eq!(
        krein(&["eigs", "--method", "discrete"]).status.code(),
        Some(3)
    );
}

#[test]
fn resolvent_difference_sources() {
    let cols = ["x", "xi", "re", "im", "deviation"];
    let analytic = csv_rows(
        &krein(&["resolvent-diff", "--z", "1", "--grid-m", "3"]),
        &cols,
    );
    assert!((row(&analytic, "1:1")[2].unwrap() + 0.505552617405555859).abs() < 1e-12);

    let zero = csv_rows(
        &krein(&["resolvent-diff", "--z", "0", "--grid-m", "3"]),
        &cols,
    );
    for (_, v) in &zero {
        assert!((v[2].unwrap() + v[0].unwrap() * v[1].unwrap()).abs() < 1e-15);
    }

    let out = krein(&[
        "resolvent-diff",
        "--z",
        "1",
        "--source",
        "discrete",
        "--n",
        "200",
        "--grid-m",
        "3",
    ]);
    let discrete = csv_rows(&out, &cols);
    assert!(row(&discrete, "max_deviation_factor")[4].unwrap() <= 1e-8);
    assert!(row(&discrete, "max_deviation_factor_free")[4].unwrap() <= 1e-8);
}

#[test]
fn resolvent_difference_at_dn_eigenvalue_exits_2() {
    let z = format!("{}", (std::f64::consts::PI / 2.0).powi(2));
    assert_eq!(krein(&["resolvent-diff", "--z", &z]).status.code(), Some(2));
}

#[test]
fn perturb_random_and_crafted() {
    let cols = ["re", "im"];
    let regular = csv_rows(
        &krein(&["perturb", "--random", "--seed", "7", "--dim", "8"]),
        &cols,
    );
    assert_eq!(row(&regular, "regular")[0], Some(1.0));
    assert!(row(&regular, "inverse_residual")[0].unwrap() <= 1e-10);

    let singular = csv_rows(
        &krein(&["perturb", "--random", "--seed", "7", "--craft", "singular"]),
        &cols,
    );
    assert_eq!(row(&singular, "regular")[0], Some(0.0));
    assert!(row(&singular, "null_residual")[0].unwrap() <= 1e-9);
    assert_eq!(row(&singular, "certificate")[0], Some(1.0));
}

#[test]
fn perturb_from_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "1\n2\n1\n1").unwrap();
    let path = file.path().to_str().unwrap();
    let rows = csv_rows(&krein(&["perturb", "--matrix", path]), &["re", "im"]);
    assert_eq!(row(&rows, "denominator"), &[Some(0.5), Some(0.0)]);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "2\n1 2\n3").unwrap();
    let out = krein(&["perturb", "--matrix", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(
        krein(&["perturb", "--matrix", "/nonexistent/file"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn recover_reports_small_residuals() {
    let cols = ["x", "f", "l_density", "value"];
    let rows = csv_rows(&krein(&["recover", "--n", "200"]), &cols);
    let h = row(&rows, "h")[3].unwrap();
    assert!(row(&rows, "reconstruction_residual")[3].unwrap() <= 1e-10);
    assert!(row(&rows, "f_shape_deviation")[3].unwrap() <= 5.0 * h);

    let tiny = csv_rows(&krein(&["recover", "--n", "2"]), &cols);
    assert!(row(&tiny, "reconstruction_residual")[3].unwrap() <= 1e-12);
}

#[test]
fn bad_usage_exits_3() {
    assert_eq!(krein(&["greens"]).status.code(), Some(3));
    assert_eq!(
        krein(&["greens", "--which", "dd", "--z", "1,2,3"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        krein(&["greens", "--which", "dd", "--grid-m", "1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(krein(&["recover", "--n", "1"]).status.code(), Some(3));
    assert_eq!(krein(&["perturb"]).status.code(), Some(3));
    assert_eq!(krein(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_mirrors_csv() {
    let args = ["resolvent-diff", "--z", "2,1", "--grid-m", "4"];
    let csv_out = krein(&args);
    let rows = csv_rows(&csv_out, &["x", "xi", "re", "im", "deviation"]);
    let mut json_args = vec!["--format", "json"];
    json_args.extend(args);
    let v: serde_json::Value = serde_json::from_slice(&krein(&json_args).stdout).unwrap();
    assert_eq!(v["command"], "resolvent-diff");
    assert_eq!(v["status"], "ok");
    assert_eq!(v["parameters"]["z"], "2,1");
    let json_rows = v["rows"].as_array().unwrap();
    assert_eq!(json_rows.len(), rows.len());
    for (j, (label, cells)) in json_rows.iter().zip(&rows) {
        assert_eq!(j["label"], label.as_str());
        for (a, b) in j["values"].as_array().unwrap().iter().zip(cells) {
            match b {
                None => assert!(a.is_null()),
                // 17 significant digits round-trip exactly.
                Some(b) => assert_eq!(a.as_f64().unwrap(), *b),
            }
        }
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["perturb", "--random", "--seed", "11"][..],
        &["--format", "json", "greens", "--which", "dn", "--z", "4,-1"][..],
        &["eigs", "--count", "4", "--method", "denominator"][..],
    ] {
        assert_eq!(stdout(&krein(args)), stdout(&krein(args)));
    }
}

#[test]
fn verify_lists_named_checks() {
    let out = krein(&["--format", "json", "verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.len() >= 12);
    assert!(rows.iter().all(|r| r["values"][2] == 1.0));
}
