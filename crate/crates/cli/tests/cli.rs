use std::path::Path;

use sumrule_cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["sumrule".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn lines(s: &str) -> Vec<serde_json::Value> {
    s.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn verify_small_suite() {
    let (code, out, err) = call(&["verify", "--kmax", "2", "--dmax", "2"]);
    assert_eq!(code, 0, "{err}");
    let recs = lines(&out);
    assert!(recs.len() >= 10);
    assert!(recs.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn enum_d_lists_three_tuples() {
    let (code, out, _) = call(&["enum-d", "--k", "2", "--l", "2"]);
    assert_eq!(code, 0);
    let got = lines(&out);
    assert_eq!(got.len(), 3);
    let want: Vec<serde_json::Value> =
        ["[0,2,1,1]", "[0,1,0,1]", "[0,0,-1,1]"].iter().map(|s| serde_json::from_str(s).unwrap()).collect();
    for w in &want {
        assert!(got.contains(w), "missing {w}");
    }
}

#[test]
fn missing_config_is_bad_input() {
    let (code, out, err) = call(&["gem", "--config", "missing.json"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("missing.json"));
}

#[test]
fn bad_flags_are_bad_input() {
    assert_eq!(call(&["enum-d", "--k", "x", "--l", "2"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["verify", "--kmax", "0"]).0, 2);
    assert_eq!(call(&["dump-g2k", "--k", "3", "--d", "2"]).0, 2);
    assert_eq!(call(&["szego-check", "--alphas", "[[1.5, 0]]"]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let p = dir.join("study.json");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn gem_study_and_csv_export() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"family": {"family": "constant", "c": 0.5, "thetaOverPi": 0},
            "criticalPoints": [{"thetaOverPi": "0", "m": 1}],
            "schedule": [50, 100, 200, 400]}"#,
    );
    let csv = dir.path().join("out.csv");
    let (code, out, err) = call(&[
        "gem", "--config", cfg.to_str().unwrap(), "--out", csv.to_str().unwrap(), "--format", "csv", "--expect", "diverging",
    ]);
    assert_eq!(code, 0, "{err}");
    let recs = lines(&out);
    assert_eq!(recs.len(), 5);
    assert_eq!(recs[4]["verdict"], "diverging");
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("N,traceRoute,corollaryRoute,logTermSum,diffNorm,verdict\n50,"));
    let (code, _, _) = call(&["gem", "--config", cfg.to_str().unwrap(), "--expect", "bounded"]);
    assert_eq!(code, 1);
}

#[test]
fn gem_custom_family_resolves_relative_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("alpha.json"), "[[0.3, 0.1], [-0.2, 0.4], [0.1, 0]]").unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"family": {"family": "custom", "file": "alpha.json"},
            "criticalPoints": [{"thetaOverPi": "1/2", "m": 2}]}"#,
    );
    let (code, out, err) = call(&["gem", "--config", cfg.to_str().unwrap(), "--expect", "bounded"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(lines(&out).len(), 7);
}

#[test]
fn gem_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"family": {"family": "randomFinite", "support": 6, "rmax": 0.7},
            "criticalPoints": [{"thetaOverPi": "1/3", "m": 1}, {"thetaOverPi": "1", "m": 1}],
            "schedule": [50, 100], "seed": 7}"#,
    );
    let a = call(&["gem", "--config", cfg.to_str().unwrap()]);
    let b = call(&["gem", "--config", cfg.to_str().unwrap()]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn szego_check_passes() {
    let (code, out, err) = call(&["szego-check", "--alphas", "[[0.3, 0.1], [-0.5, 0.2], [0, 0.6]]"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(lines(&out)[0]["status"], "pass");
}

#[test]
fn dump_g2k_generic_and_specialized() {
    let (code, out, _) = call(&["dump-g2k", "--k", "1", "--d", "1"]);
    assert_eq!(code, 0);
    let v = &lines(&out)[0];
    assert!(v["terms"].as_u64().unwrap() > 0);
    assert!(v["numerator"].as_str().unwrap().contains("z1"));
    let (code, out, _) = call(&["dump-g2k", "--k", "1", "--d", "2", "--theta", "0"]);
    assert_eq!(code, 0);
    assert!(!lines(&out)[0]["numerator"].as_str().unwrap().contains('z'));
    // e^{i pi/3} is not a Gaussian rational
    assert_eq!(call(&["dump-g2k", "--k", "1", "--d", "1", "--theta", "1/3"]).0, 2);
}
