use std::path::Path;
use std::process::{Command, Output};

use serde_json::{Map, Value};

fn run(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3mahler"))
        .args(args)
        .env("K3MAHLER_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str], cache: &Path) -> (String, Value) {
    let out = run(args, cache);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap();
    (text, v)
}

/// Keys and value types, with arrays reduced to their first element.
fn shape(v: &Value) -> Value {
    match v {
        Value::Null => "null".into(),
        Value::Bool(_) => "bool".into(),
        Value::Number(_) => "number".into(),
        Value::String(_) => "string".into(),
        Value::Array(a) => Value::Array(a.first().map(shape).into_iter().collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, v)| (k.clone(), shape(v))).collect::<Map<_, _>>()),
    }
}

fn golden(name: &str, v: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let want: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(shape(v), want, "schema of {name} changed");
}

#[test]
fn verify_schema_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (_, v) = json(&["verify", "--k", "6", "--json"], dir.path());
    golden("verify.json", &v);
    assert_eq!(v["value"]["pass"], true);
    let subs = v["value"]["sub_checks"].as_array().unwrap();
    assert!(subs.iter().all(|c| c["provenance"].is_string()));
}

#[test]
fn subcommand_schemas() {
    let dir = tempfile::tempdir().unwrap();
    for (args, file) in [
        (&["ap", "--k", "6", "--json"][..], "ap.json"),
        (&["lattice", "--k", "18", "--json"][..], "lattice.json"),
        (&["mahler", "--k", "6", "--json"][..], "mahler.json"),
        (&["lvalue", "--k", "6", "--json"][..], "mahler.json"),
        (&["coeffs", "--k", "6", "--json"][..], "coeffs.json"),
    ] {
        let (_, v) = json(args, dir.path());
        for key in ["input", "value", "error_bound", "provenance"] {
            assert!(v.get(key).is_some(), "{args:?} lacks {key}");
        }
        golden(file, &v);
    }
}

#[test]
fn ap_row_for_k6() {
    let dir = tempfile::tempdir().unwrap();
    let (_, v) = json(&["ap", "--k", "6", "--pmax", "31", "--json"], dir.path());
    let row: Vec<(u64, i64)> =
        v["value"].as_array().unwrap().iter().map(|r| (r["p"].as_u64().unwrap(), r["a_p"].as_i64().unwrap())).collect();
    assert_eq!(row, [(5, 2), (7, -10), (11, -10), (13, 0), (17, 0), (19, 0), (23, 0), (29, 50), (31, 38)]);
}

#[test]
fn lattice_k18() {
    let dir = tempfile::tempdir().unwrap();
    let (_, v) = json(&["lattice", "--k", "18", "--json"], dir.path());
    assert_eq!(v["value"]["det"], 120);
    assert_eq!(v["value"]["rank"], 1);
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["mahler", "--k", "6", "--method", "mc", "--tol", "1e-3", "--seed", "42", "--json"];
    let (a, v) = json(&args, dir.path());
    let (b, _) = json(&args, dir.path());
    assert_eq!(a, b);
    let (c, _) = json(&["mahler", "--k", "6", "--method", "mc", "--tol", "1e-3", "--seed", "42", "--workers", "1", "--json"], dir.path());
    assert_eq!(a, c);
    // within a few standard errors of the quadrature value
    let est = v["value"].as_f64().unwrap();
    let se = v["error_bound"].as_f64().unwrap();
    assert!((est - 1.673389302970).abs() < 5.0 * se);
    let (d, _) = json(&["mahler", "--k", "6", "--method", "mc", "--tol", "1e-3", "--seed", "43", "--json"], dir.path());
    assert_ne!(a, d);
}

#[test]
fn warm_cache_matches_cold() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let args = ["ap", "--k", "18", "--pmax", "61", "--json"];
    let (cold, _) = json(&args, &cache);
    let files = std::fs::read_dir(&cache).unwrap().count();
    assert!(files > 0);
    let (warm, _) = json(&args, &cache);
    assert_eq!(cold, warm);
    // a flag overrides the environment
    let other = dir.path().join("flag");
    let (flagged, _) = json(&["ap", "--k", "18", "--pmax", "61", "--json", "--cache-dir", other.to_str().unwrap()], &cache);
    assert_eq!(cold, flagged);
    assert!(other.is_dir());
}

#[test]
fn config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("k3.conf");
    std::fs::write(&cfg, "prec = 96\n").unwrap();
    let (_, v) = json(&["lattice", "--k", "6", "--json", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(v["input"]["prec"], 96);
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(run(&["lattice", "--config", cfg.to_str().unwrap()], dir.path()).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| run(args, dir.path()).status.code();
    assert_eq!(code(&["verify", "--k", "0"]), Some(0));
    assert_eq!(code(&["verify", "--k", "7"]), Some(2));
    assert_eq!(code(&["verify", "--no-such-flag"]), Some(2));
    assert_eq!(code(&["mahler", "--method", "simpson"]), Some(2));
    assert_eq!(code(&["mahler", "--tol", "0"]), Some(2));
    // a tolerance below the quadrature's reach fails the check
    assert_eq!(code(&["verify", "--k", "0", "--tol", "1e-30"]), Some(1));
    assert_eq!(code(&["height", "--k", "6"]), Some(1));
}

#[test]
fn verify_text_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--k", "18"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("PASS"));
    assert!(text.contains("section:height"));
    assert!(!text.contains("FAIL"));
}
