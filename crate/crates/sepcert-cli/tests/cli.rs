//! End-to-end CLI behavior: flags, formats, exit codes, output files.

use std::process::{Command, Output};

fn sepcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON report")
}

#[test]
fn threshold_accepts_fraction_strings_and_hits_the_exact_value() {
    let out = sepcert(&[
        "threshold",
        "--d",
        "3",
        "--N",
        "2",
        "--alpha",
        r#"[["2/3",0],["2/3",0],["1/3",0]]"#,
    ]);
    let report = json_of(&out);
    assert_eq!(report["command"], "threshold");
    let v_c = report["results"]["critical_v"].as_f64().unwrap();
    assert!((v_c - 0.2).abs() < 1e-15);
    assert_eq!(report["results"]["t_value"].as_f64().unwrap(), 2.25);
    // 17-significant-digit rendering of 0.2
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.contains("2.0000000000000001e-1"),
        "full-precision float missing:\n{text}"
    );
}

#[test]
fn threshold_accepts_decimal_alpha() {
    let out = sepcert(&[
        "threshold",
        "--N",
        "2",
        "--alpha",
        "[[0.70710678118654746,0],[0.70710678118654746,0]]",
    ]);
    let report = json_of(&out);
    assert_eq!(report["results"]["d"], 2);
    let v_c = report["results"]["critical_v"].as_f64().unwrap();
    assert!((v_c - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn certify_verdicts_match_the_threshold() {
    let out = sepcert(&[
        "certify", "--d", "2", "--N", "2", "--theta", "0.7854", "--v", "0.34",
    ]);
    let report = json_of(&out);
    assert_eq!(report["results"]["verdict"], "entangled-certified");
    let types: Vec<&str> = report["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["type"].as_str().unwrap())
        .collect();
    assert!(types.contains(&"negative-pt-eigenvalue"));

    let out = sepcert(&[
        "certify",
        "--d",
        "3",
        "--N",
        "2",
        "--alpha",
        r#"[["2/3",0],["2/3",0],["1/3",0]]"#,
        "--v",
        "0.19",
    ]);
    let report = json_of(&out);
    assert_eq!(report["results"]["verdict"], "separable-certified");
    let w = &report["witnesses"][0];
    assert_eq!(w["type"], "decomposition");
    assert!(w["reconstruction_error"].as_f64().unwrap() <= 1e-10);

    let out = sepcert(&[
        "certify",
        "--d",
        "3",
        "--N",
        "2",
        "--alpha",
        r#"[["2/3",0],["2/3",0],["1/3",0]]"#,
        "--v",
        "0.21",
    ]);
    let report = json_of(&out);
    assert_eq!(report["results"]["verdict"], "entangled-certified");
    let types: Vec<&str> = report["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["type"].as_str().unwrap())
        .collect();
    assert!(types.contains(&"cauchy-schwarz"));
}

#[test]
fn decompose_writes_a_reloadable_document() {
    let dir = std::env::temp_dir().join(format!("sepcert-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("decomposition.json");
    let out = sepcert(&[
        "decompose",
        "--d",
        "2",
        "--N",
        "2",
        "--alpha",
        r#"[["1/2",0],[0.8660254037844386,0]]"#,
        "--v",
        "0.2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["results"]["verification"]["pass"], true);
    // the embedded document reloads as a decomposition and carries d, N
    let doc = report["results"]["decomposition"].to_string();
    let dec = sepcert::sep::ProductDecomposition::<f64>::from_json_str(&doc).unwrap();
    assert_eq!(dec.d, 2);
    assert_eq!(dec.n_parties, 2);
    assert_eq!(
        dec.len(),
        report["results"]["terms"].as_u64().unwrap() as usize
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn ppt_reports_every_bipartition() {
    let out = sepcert(&[
        "ppt",
        "--d",
        "2",
        "--N",
        "3",
        "--alpha",
        "[[0.70710678118654746,0],[0.70710678118654746,0]]",
        "--v",
        "0.5",
    ]);
    let report = json_of(&out);
    let rows = report["results"]["bipartitions"].as_array().unwrap();
    assert_eq!(rows.len(), 3); // {2}, {3}, {2,3}
    assert_eq!(report["results"]["entangled_at_v"], true);
    let th = report["results"]["threshold_numeric"].as_f64().unwrap();
    assert!((th - 0.2).abs() < 1e-6);
}

#[test]
fn concurrence_reports_measures_and_closed_form() {
    let out = sepcert(&["concurrence", "--theta", "0.5", "--v", "0.6"]);
    let report = json_of(&out);
    let c = report["results"]["concurrence"].as_f64().unwrap();
    let e = report["results"]["entanglement_of_formation"]
        .as_f64()
        .unwrap();
    assert!(c > 0.0 && e > 0.0 && e < 1.0);
    let cf = &report["results"]["closed_form"];
    assert!((cf["value"].as_f64().unwrap() - c).abs() < 1e-8);
}

#[test]
fn family_scan_csv_schema() {
    let out = sepcert(&["family-scan", "--d", "3", "--N", "2", "--theta-steps", "8"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theta,critical_v,eig_plus,eig_minus,zeros");
    assert_eq!(lines.len(), 9);
    // first row is theta = 0: uniform coefficients, threshold 1/4
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
    assert!((first[1].parse::<f64>().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(first[4], "1");
}

#[test]
fn family_scan_json_matches_csv_values() {
    let csv = sepcert(&["family-scan", "--d", "2", "--N", "2", "--theta-steps", "4"]);
    let json = sepcert(&[
        "family-scan",
        "--d",
        "2",
        "--N",
        "2",
        "--theta-steps",
        "4",
        "--format",
        "json",
    ]);
    let report = json_of(&json);
    let rows = report["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let csv_text = String::from_utf8(csv.stdout).unwrap();
    let second_csv: Vec<&str> = csv_text.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(
        rows[1]["critical_v"].as_f64().unwrap(),
        second_csv[1].parse::<f64>().unwrap()
    );
}

#[test]
fn conjecture_scan_csv_has_dynamic_alpha_columns() {
    let out = sepcert(&[
        "conjecture-scan",
        "--d",
        "3",
        "--N",
        "2",
        "--samples",
        "4",
        "--seed",
        "42",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "sample_index,alpha_re_0,alpha_im_0,alpha_re_1,alpha_im_1,alpha_re_2,alpha_im_2,\
         t_value,restriction2_min_eig,formula_v,ppt_v,ppt_crossing_found,diff"
    );
}

#[test]
fn validation_errors_exit_one() {
    // malformed alpha
    let out = sepcert(&["threshold", "--d", "2", "--N", "2", "--alpha", "not json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));

    // both alpha and theta
    let out = sepcert(&[
        "threshold",
        "--d",
        "2",
        "--N",
        "2",
        "--alpha",
        "[[1,0],[0,0]]",
        "--theta",
        "0.3",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // unnormalized coefficients
    let out = sepcert(&[
        "threshold",
        "--d",
        "2",
        "--N",
        "2",
        "--alpha",
        "[[0.9,0],[0.9,0]]",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // product state
    let out = sepcert(&[
        "threshold",
        "--d",
        "2",
        "--N",
        "2",
        "--alpha",
        "[[1,0],[0,0]]",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // d disagrees with alpha length
    let out = sepcert(&[
        "threshold",
        "--d",
        "3",
        "--N",
        "2",
        "--alpha",
        "[[0.70710678118654746,0],[0.70710678118654746,0]]",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // v outside [0, 1]
    let out = sepcert(&[
        "certify", "--d", "2", "--N", "2", "--theta", "0.7", "--v", "1.5",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // v above the threshold for decompose
    let out = sepcert(&[
        "decompose",
        "--d",
        "2",
        "--N",
        "2",
        "--theta",
        "0.7854",
        "--v",
        "0.9",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("threshold"));

    // csv not available for scalar commands
    let out = sepcert(&[
        "threshold",
        "--d",
        "2",
        "--N",
        "2",
        "--theta",
        "0.7",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // usage error from the parser itself (missing --v)
    let out = sepcert(&["certify", "--d", "2", "--N", "2", "--theta", "0.7"]);
    assert_eq!(out.status.code(), Some(1));

    // unknown subcommand
    let out = sepcert(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));

    // concurrence needs exactly two coefficients
    let out = sepcert(&[
        "concurrence",
        "--alpha",
        r#"[["2/3",0],["2/3",0],["1/3",0]]"#,
        "--v",
        "0.2",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn restriction2_gate_and_override() {
    // this alpha yields a non-PSD seed (first draw of the pinned
    // generator at seed 42, printed to 17 digits)
    let alpha = r#"[[0.13320872684807822,0.20964237789505097],
                    [-0.2864754497153413,0.42618131752311433],
                    [0.5555483985743188,-0.6049568469140487]]"#;
    let out = sepcert(&[
        "decompose",
        "--d",
        "3",
        "--N",
        "2",
        "--alpha",
        alpha,
        "--v",
        "0.05",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("restriction"));

    let out = sepcert(&[
        "decompose",
        "--d",
        "3",
        "--N",
        "2",
        "--alpha",
        alpha,
        "--v",
        "0.05",
        "--override-restriction2",
    ]);
    let report = json_of(&out);
    // reconstruction still works; positivity honestly fails
    assert_eq!(report["results"]["verification"]["pass"], false);
    assert!(
        report["results"]["verification"]["reconstruction_error"]
            .as_f64()
            .unwrap()
            <= 1e-10
    );
    assert!(
        report["results"]["verification"]["min_factor_eig"]
            .as_f64()
            .unwrap()
            < -1e-10
    );
}

#[test]
fn help_and_version_exit_zero() {
    let out = sepcert(&["--help"]);
    assert!(out.status.success());
    let out = sepcert(&["--version"]);
    assert!(out.status.success());
}
