use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn opinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opinv")).args(args).current_dir(data_dir()).output().expect("spawn opinv")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

/// Compares stdout with `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, args: &[&str], expected_exit: i32) {
    let o = opinv(args);
    assert_eq!(code(&o), expected_exit, "{name}: stderr {}", String::from_utf8_lossy(&o.stderr));
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &o.stdout).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(String::from_utf8_lossy(&o.stdout), want, "{name} differs from its golden file");
}

#[test]
fn golden_transvect() {
    golden("transvect.json", &["transvect", "quad.json", "quad2.json"], 0);
    golden("transvect_r2.json", &["transvect", "-r", "2", "quad.json", "quad2.json"], 0);
    golden("poisson.json", &["transvect", "--kind", "poisson", "cubic_a.json", "quad.json"], 0);
}

#[test]
fn golden_invariants() {
    golden("invariants.json", &["invariants", "quartic.json"], 0);
    golden("invariants_config.json", &["--signature-config", "sigconfig.json", "invariants", "quartic.json"], 0);
}

#[test]
fn golden_signature() {
    golden("signature_same.json", &["signature", "cubic_a.json", "cubic_b.json"], 3);
    golden("signature_distinct.json", &["signature", "cubic_a.json", "cubic_c.json"], 2);
}

#[test]
fn golden_orbit_dim() {
    golden("orbit_dim.json", &["orbit-dim", "cubic_a.json"], 0);
    golden("orbit_dim.txt", &["--format", "table", "orbit-dim", "quad.json"], 0);
}

#[test]
fn golden_match() {
    golden("match.json", &["--seed", "7", "match", "cubic_a.json", "cubic_b.json"], 0);
    golden("match_mismatch.json", &["match", "cubic_a.json", "cubic_c.json"], 2);
}

#[test]
fn golden_wagner() {
    golden("wagner_symbolic.json", &["wagner", "field_sheared.json"], 0);
    golden("wagner_grid.json", &["--grid", "-1:1:3,-1:1:3", "wagner", "field_sheared.json"], 0);
    golden("wagner_degenerate.json", &["--grid", "-1:1:3,-1:1:3", "wagner", "field_degenerate.json"], 2);
}

#[test]
fn golden_split() {
    golden("split_flat.json", &["split", "operator.json"], 0);
    golden("split_connection.json", &["split", "operator.json", "--connection", "connection.json"], 0);
}

#[test]
fn golden_model() {
    golden("model.json", &["--grid", "0:1:3,0:1:2", "model", "operator.json", "--chart", "x1", "--chart", "x2"], 0);
    golden("model_compare_same.json", &["model-compare", "surface_a.json", "surface_a_fine.json"], 0);
    golden("model_compare_shifted.json", &["model-compare", "surface_a.json", "surface_shifted.json"], 2);
}

#[test]
fn matched_map_takes_p_to_q() {
    let r = report(&opinv(&["match", "cubic_a.json", "cubic_b.json"]));
    assert_eq!(r["status"], "matched");
    assert!(r["result"]["residual"].as_f64().unwrap() <= 1e-6);
    assert!(r["result"]["symplectic_defect"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn non_constant_type_reports_a_witness() {
    for args in [vec!["wagner", "field_degenerate.json"], vec!["--grid", "-1:1:3,-1:1:3", "wagner", "field_degenerate.json"]] {
        let o = opinv(&args);
        assert_eq!(code(&o), 2);
        let r = report(&o);
        assert_eq!(r["status"], "not_constant_type");
        assert_eq!(r["result"]["witness"]["point"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn inputs_are_hashed() {
    let r = report(&opinv(&["invariants", "quartic.json"]));
    let bytes = std::fs::read(data_dir().join("quartic.json")).unwrap();
    use sha2::Digest;
    assert_eq!(r["inputs"][0]["sha256"], hex::encode(sha2::Sha256::digest(&bytes)));
}

#[test]
fn errors_map_to_exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["invariants", "broken.json"], 65),
        (&["invariants", "missing.json"], 65),
        (&["--grid", "0:1", "invariants", "quad.json"], 64),
        (&["model", "operator.json", "--chart", "x1", "--chart", "x2"], 64),
        (&["--grid", "0:1:2,0:1:2", "model", "operator.json", "--chart", "x1", "--chart", "x3"], 64),
        (&["frobnicate"], 64),
        (&["--tol", "-1", "signature", "quad.json", "quad2.json"], 64),
    ];
    for (args, want) in cases {
        let o = opinv(args);
        assert_eq!(code(&o), *want, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_for_every_subcommand() {
    let o = opinv(&["--help"]);
    assert_eq!(code(&o), 0);
    let top = String::from_utf8_lossy(&o.stdout).to_string();
    for sub in ["transvect", "invariants", "signature", "orbit-dim", "match", "wagner", "split", "model", "model-compare"] {
        assert!(top.contains(sub), "{sub} missing from --help");
        let o = opinv(&[sub, "--help"]);
        assert_eq!(code(&o), 0, "{sub} --help");
        assert!(String::from_utf8_lossy(&o.stdout).contains("Usage: opinv"));
    }
}

#[test]
fn output_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("opinv-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("r.json");
    let o = opinv(&["--output", file.to_str().unwrap(), "orbit-dim", "quad.json"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(written["result"]["stabilizer_dim"], 1);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["--seed", "3", "match", "cubic_a.json", "cubic_b.json"];
    assert_eq!(opinv(&args).stdout, opinv(&args).stdout);
}
