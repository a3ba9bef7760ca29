//! End-to-end runs of the `dirac-kit` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use dirac_core::dirac::Status;
use dirac_kit::cache::Cache;
use dirac_kit::config::{Command as Cmd, ExperimentConfig, Subalgebra, WeightBasis};
use dirac_kit::{exit_code, CliError};
use serde_json::{json, Value};

const GOLDEN: &str = include_str!("golden/a2_gl2_multiplets.report.json");

const MULTIPLETS: &str = r#"
command = "multiplets"
algebra = "A2"

[subalgebra]
kind = "levi"
simple = [1]

[lambda]
basis = "fundamental"
coords = [1, 1]
"#;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dirac-kit"));
    c.env_remove("DIRAC_KIT_CACHE");
    c
}

/// Runs `dirac-kit` and returns (exit code, stdout, stderr).
fn run(args: &[&str], cache: &Path) -> (i32, String, String) {
    let out = bin()
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn meta(report: &Path) -> Value {
    let p = report.with_extension("meta.json");
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn multiplets_report_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "m.toml", MULTIPLETS);
    let (code, stdout, _) = run(&["run", cfg.to_str().unwrap()], &dir.path().join("cache"));
    assert_eq!(code, 0);
    assert_eq!(stdout, GOLDEN);
    let report = fs::read_to_string(dir.path().join("m.report.json")).unwrap();
    assert_eq!(report, GOLDEN);
    let table = fs::read_to_string(dir.path().join("m.report.txt")).unwrap();
    assert!(table.contains("status  PASS"));
    assert!(table.contains("euler_number: 3"));
}

#[test]
fn second_run_is_identical_and_uses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cfg = write_config(dir.path(), "m.toml", MULTIPLETS);
    let report = dir.path().join("m.report.json");
    let (c1, _, _) = run(&["run", cfg.to_str().unwrap()], &cache);
    let first = fs::read(&report).unwrap();
    assert_eq!(meta(&report)["cache_hits"], "0");
    let (c2, _, err) = run(&["run", cfg.to_str().unwrap()], &cache);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(fs::read(&report).unwrap(), first);
    assert_ne!(meta(&report)["cache_hits"], "0");
    assert!(err.contains("cache hits 2"));
}

#[test]
fn corrupted_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cfg = write_config(dir.path(), "m.toml", MULTIPLETS);
    run(&["run", cfg.to_str().unwrap()], &cache);
    let first = fs::read(dir.path().join("m.report.json")).unwrap();
    for e in fs::read_dir(&cache).unwrap() {
        let p = e.unwrap().path();
        let mut text = fs::read_to_string(&p).unwrap();
        text = text.replacen("PASS", "FAIL", 1);
        fs::write(&p, text).unwrap();
    }
    let (code, _, err) = run(&["run", cfg.to_str().unwrap()], &cache);
    assert_eq!(code, 0);
    assert!(err.contains("warning: corrupt cache entry"));
    assert_eq!(fs::read(dir.path().join("m.report.json")).unwrap(), first);
}

#[test]
fn cache_envelope_checks_version_and_checksum() {
    let dir = tempfile::tempdir().unwrap();
    let v1 = Cache::new(dir.path(), "1");
    let payload = json!({"x": "1/2"});
    v1.store("k", &payload);
    assert_eq!(v1.load("k"), Some(payload.clone()));
    let v2 = Cache::new(dir.path(), "2");
    assert_eq!(v2.load("k"), None);
    assert_eq!((v2.hits(), v2.misses()), (0, 1));
    assert!(v2.take_warnings().is_empty());
    let mut computed = 0;
    let got = v2
        .get_or_insert::<()>("k", || {
            computed += 1;
            Ok(json!("fresh"))
        })
        .unwrap();
    assert_eq!((got, computed), (json!("fresh"), 1));
    assert_eq!(v1.load("k"), Some(payload));
}

#[test]
fn inconclusive_runs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.toml",
        r#"
command = "cocycle"
algebra = "A1"
depth = 0

[subalgebra]
kind = "zero"
"#,
    );
    let (code, stdout, _) = run(&["run", cfg.to_str().unwrap()], &dir.path().join("cache"));
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["status"], "INCONCLUSIVE");
    assert!(v["witness"]["error"]
        .as_str()
        .unwrap()
        .starts_with("DepthLeak"));

    let cfg = write_config(dir.path(), "m.toml", MULTIPLETS);
    let (code, _, _) = run(
        &["--max-dim", "10", "run", cfg.to_str().unwrap()],
        &dir.path().join("cache"),
    );
    assert_eq!(code, 2);
}

#[test]
fn config_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let bad_field = write_config(
        dir.path(),
        "a.toml",
        "command = \"multiplets\"\nalgebra = \"A2\"\ncolour = 1\n[subalgebra]\nkind = \"zero\"\n",
    );
    let (code, _, err) = run(&["run", bad_field.to_str().unwrap()], &cache);
    assert_eq!(code, 3);
    assert!(err.contains("ConfigError") && err.contains("colour") && err.contains("line 3"));

    let bad_type = write_config(
        dir.path(),
        "b.toml",
        "command = \"describe-pair\"\nalgebra = \"Q7\"\n[subalgebra]\nkind = \"zero\"\n",
    );
    let (code, _, err) = run(&["run", bad_type.to_str().unwrap()], &cache);
    assert_eq!(code, 3);
    assert!(err.contains("algebra"));

    // A domain error surfaces under its own name.
    let not_equal_rank = write_config(
        dir.path(),
        "c.toml",
        "command = \"multiplets\"\nalgebra = \"A2\"\n[subalgebra]\nkind = \"principal-sl2\"\n",
    );
    let (code, _, err) = run(&["run", not_equal_rank.to_str().unwrap()], &cache);
    assert_eq!(code, 3);
    assert!(err.contains("NotEqualRank"));

    let (code, _, _) = run(&["run", "/nonexistent/x.toml"], &cache);
    assert_eq!(code, 3);
    let (code, _, _) = run(&["frobnicate"], &cache);
    assert_eq!(code, 3);
}

#[test]
fn exit_codes_follow_status() {
    assert_eq!(exit_code(Status::Pass), 0);
    assert_eq!(exit_code(Status::Fail), 1);
    assert_eq!(exit_code(Status::Inconclusive), 2);
    assert_eq!(CliError::config("x", "y").exit_code(), 3);
}

#[test]
fn describe_pair_for_f4_over_b4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "f4.toml",
        r#"
command = "describe-pair"
algebra = "F4"

[subalgebra]
kind = "equal-rank"
roots = [[-2, -3, -4, -2], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
"#,
    );
    let (code, stdout, _) = run(&["run", cfg.to_str().unwrap()], &dir.path().join("cache"));
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["pair"]["euler_number"], "3");
    assert_eq!(v["pair"]["weyl_order"], "1152");
    assert_eq!(v["pair"]["dim_r"], "36");
}

#[test]
fn cocycle_at_minus_rho_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.toml",
        r#"
command = "cocycle"
algebra = "A1"
depth = 6

[subalgebra]
kind = "zero"

[lambda]
basis = "simple-root"
coords = ["-1/2"]
"#,
    );
    let (code, stdout, _) = run(
        &["--format", "json", "run", cfg.to_str().unwrap()],
        &dir.path().join("cache"),
    );
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["witness"]["elements"][0]["image"], json!([]));
    assert_eq!(v["witness"]["vanishing_case"], true);
}

fn is_rational(s: &str) -> bool {
    let s = s.strip_prefix('-').unwrap_or(s);
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    [n, d]
        .iter()
        .all(|x| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit()))
        && !d.starts_with('0')
}

fn no_json_numbers(v: &Value) -> bool {
    match v {
        Value::Number(_) => false,
        Value::Array(a) => a.iter().all(no_json_numbers),
        Value::Object(m) => m.values().all(no_json_numbers),
        _ => true,
    }
}

/// Checks the parts of `docs/report.schema.json` that carry meaning.
fn assert_matches_schema(report: &Value) {
    let schema: Value =
        serde_json::from_str(include_str!("../../../docs/report.schema.json")).unwrap();
    let required: Vec<&str> = schema["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|k| k.as_str().unwrap())
        .collect();
    let keys: Vec<&str> = report
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(keys, required);
    for field in ["check", "status"] {
        assert!(schema["properties"][field]["enum"]
            .as_array()
            .unwrap()
            .contains(&report[field]));
    }
    for field in ["lambda", "lambda_fundamental"] {
        assert!(report[field]
            .as_array()
            .unwrap()
            .iter()
            .all(|x| is_rational(x.as_str().unwrap())));
    }
    assert!(no_json_numbers(report));
}

#[test]
fn every_shipped_config_passes() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = tempfile::tempdir().unwrap();
    let mut n = 0;
    for e in fs::read_dir(root).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "toml") {
            let copy = dir.path().join(p.file_name().unwrap());
            fs::copy(&p, &copy).unwrap();
            let (code, stdout, err) =
                run(&["run", copy.to_str().unwrap()], &dir.path().join("cache"));
            assert_eq!(code, 0, "{}: {err}", p.display());
            assert_matches_schema(&serde_json::from_str(&stdout).unwrap());
            n += 1;
        }
    }
    assert!(n >= 5);
}

#[test]
fn describe_type_prints_root_data() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = run(&["describe", "G2"], dir.path());
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["weyl_order"], "12");
    assert_eq!(v["num_positive_roots"], "6");
    let (code, stdout, _) = run(&["--format", "table", "describe", "B3"], dir.path());
    assert_eq!(code, 0);
    assert!(stdout.contains("weyl_order: 48"));
}

#[test]
fn config_round_trips_and_rejects_unknown_fields() {
    let cfg = ExperimentConfig::parse(MULTIPLETS).unwrap();
    assert_eq!(cfg.command, Cmd::Multiplets);
    assert_eq!(cfg.subalgebra, Subalgebra::Levi { simple: vec![1] });
    assert_eq!(cfg.lambda.as_ref().unwrap().basis, WeightBasis::Fundamental);
    assert_eq!(ExperimentConfig::parse(&cfg.to_toml()).unwrap(), cfg);

    let explicit = r#"
command = "square-identity"
algebra = "A1"
depth = 3
samples = 4
output = "out/r.json"

[subalgebra]
kind = "explicit"
basis = [["1/2", 0, 0]]

[lambda]
basis = "simple-root"
coords = ["-3/7"]

[caps]
max_dim = 10
"#;
    let cfg = ExperimentConfig::parse(explicit).unwrap();
    assert_eq!(cfg.caps.group_order, 100_000);
    assert_eq!(ExperimentConfig::parse(&cfg.to_toml()).unwrap(), cfg);

    for bad in [
        "command = \"multiplets\"\nalgebra = \"A2\"\n[subalgebra]\nkind = \"levi\"\nsimple = [1]\nextra = 2\n",
        "command = \"multiplets\"\nalgebra = \"A2\"\n[subalgebra]\nkind = \"zero\"\n[lambda]\nbasis = \"weird\"\ncoords = []\n",
        "command = \"multiplets\"\nalgebra = \"A2\"\n[subalgebra]\nkind = \"zero\"\n[lambda]\nbasis = \"fundamental\"\ncoords = [\"1/0\"]\n",
        "command = \"dance\"\nalgebra = \"A2\"\n[subalgebra]\nkind = \"zero\"\n",
    ] {
        assert!(matches!(ExperimentConfig::parse(bad), Err(CliError::Config { .. })), "{bad}");
    }
}
