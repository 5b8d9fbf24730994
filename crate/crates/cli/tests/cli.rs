use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_galois-forge"));
    c.env_remove("GALOIS_FORGE_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
    })
}

fn fixture_config(name: &str) -> Value {
    let fx = galois_forge::fixtures::by_name(name).unwrap();
    serde_json::to_value(&fx.config).unwrap()
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_reference_curve_exits_zero() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "f1.json", &fixture_config("fixture1"));
    let o = run(&["check", s(&p)]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["schema"], "1");
    assert_eq!(v["passes"], true);
    assert_eq!(v["report"]["degree"], 14);
    let again = run(&["check", s(&p)]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn text_output_and_both_orientations() {
    let dir = TempDir::new().unwrap();
    let p1 = write(&dir, "f1.json", &fixture_config("fixture1"));
    let o = run(&["check", s(&p1), "--output", "text", "--orientation", "both"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("== swapped"));
    assert!(text.contains("degree 14, m_P1 8, m_P2 4"));
    // the second reference curve is tangent at its first point, so only one
    // orientation passes
    let p2 = write(&dir, "f2.json", &fixture_config("fixture2"));
    assert_eq!(code(&run(&["check", s(&p2)])), 0);
    let o = run(&["check", s(&p2), "--orientation", "both"]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    assert_eq!(v["report"]["passes"], true);
    assert_eq!(v["swapped"]["passes"], false);
}

#[test]
fn moved_point_fails_condition_c_at_that_point() {
    let dir = TempDir::new().unwrap();
    let mut cfg = fixture_config("fixture2");
    cfg["p2"] = json!("1");
    let p = write(&dir, "bad.json", &cfg);
    let o = run(&["check", s(&p)]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    assert_eq!(v["report"]["cond_c"]["holds"], false);
    let witnesses = v["report"]["cond_c"]["witnesses"].as_array().unwrap();
    assert!(witnesses.iter().any(|w| w["point"] == json!(["1", "1"]) && w["divisor"] == "Bs_P2"));
}

#[test]
fn equal_groups_fail_condition_b() {
    let dir = TempDir::new().unwrap();
    let mut cfg = fixture_config("fixture1");
    cfg["g1"] = cfg["g2"].clone();
    let p = write(&dir, "eq.json", &cfg);
    let o = run(&["check", s(&p)]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    assert_eq!(v["report"]["cond_b"]["holds"], false);
    assert!(v["report"]["cond_b"]["witness"].is_array());
}

#[test]
fn malformed_entry_exits_two_with_position() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    let text = serde_json::to_string_pretty(&fixture_config("fixture2")).unwrap().replacen("\"xi\"", "\"z^^2\"", 1);
    std::fs::write(&p, text).unwrap();
    let o = run(&["check", s(&p)]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line ") && err.contains("column "), "{err}");
    assert!(err.contains("z^^2"), "{err}");
}

#[test]
fn unreadable_or_unknown_input_exits_two() {
    assert_eq!(code(&run(&["check", "/nonexistent/config.json"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn cap_from_environment() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "f1.json", &fixture_config("fixture1"));
    let o = bin().args(["check", s(&p)]).env("GALOIS_FORGE_CAP", "4").output().unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("closure exceeded 4"));
}

#[test]
fn construct_writes_artifacts_only_on_success() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "f1.json", &fixture_config("fixture1"));
    let out = dir.path().join("out");
    let o = run(&["construct", s(&good), "--implicitize", "--out-dir", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["model.json", "verification.json", "orders.json", "implicit.json"] {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(out.join(f)).unwrap()).unwrap();
        assert_eq!(v["schema"], "1", "{f}");
    }
    let model: Value = serde_json::from_str(&std::fs::read_to_string(out.join("model.json")).unwrap()).unwrap();
    assert_eq!(model["degree"], 14);
    let implicit: Value = serde_json::from_str(&std::fs::read_to_string(out.join("implicit.json")).unwrap()).unwrap();
    assert_eq!((implicit["multiplicity_p1"].clone(), implicit["multiplicity_p2"].clone()), (json!(8), json!(4)));

    let mut cfg = fixture_config("fixture2");
    cfg["p2"] = json!("1");
    let bad = write(&dir, "bad.json", &cfg);
    let out = dir.path().join("none");
    let o = run(&["construct", s(&bad), "--out-dir", s(&out)]);
    assert_eq!(code(&o), 1);
    assert!(!out.exists());
}

fn space(dir: &TempDir, v: Value) -> PathBuf {
    write(dir, "space.json", &v)
}

#[test]
fn search_rediscovers_the_first_reference_curve() {
    let dir = TempDir::new().unwrap();
    let cfg = fixture_config("fixture1");
    let mut pool = cfg["g1"].as_array().unwrap().clone();
    pool.extend(cfg["g2"].as_array().unwrap().iter().cloned());
    let p = space(
        &dir,
        json!({"schema": "1", "field": cfg["field"], "roots": cfg["roots"], "generators": pool,
               "points": [cfg["p1"], cfg["p2"]]}),
    );
    let o = run(&["search", s(&p)]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    let entries = v["entries"].as_array().unwrap();
    let hit = entries.iter().find(|e| {
        let r = &e["report"];
        r["degree"] == 14 && r["m_p1"] == 8 && r["m_p2"] == 4 && r["g1"]["fingerprint"]["order"] == 6
    });
    let hit = hit.expect("reference configuration found");
    assert_eq!(hit["swapped_passes"], true);

    // every entry re-passes when written back as a config
    for (k, e) in entries.iter().enumerate() {
        let c = write(&dir, &format!("entry{k}.json"), &e["config"]);
        let o = run(&["check", s(&c)]);
        assert_eq!(code(&o), 0, "entry {k}");
        assert_eq!(stdout_json(&o)["report"], e["report"]);
    }
}

#[test]
fn search_edge_cases() {
    let dir = TempDir::new().unwrap();
    let p = space(&dir, json!({"schema": "1", "field": {"kind": "finite", "p": 11}, "generators": [], "points": []}));
    let o = run(&["search", s(&p)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["entries"], json!([]));

    // two cyclic groups of orders 2 and 5 over F_11, all points
    let p = space(
        &dir,
        json!({"schema": "1", "field": {"kind": "finite", "p": 11}, "max_generators": 1,
               "generators": [[["-1", "0"], ["0", "1"]], [["3", "0"], ["0", "1"]]], "points": "all"}),
    );
    let o = run(&["search", s(&p), "--max-results", "5"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert!(v["entries"].as_array().unwrap().len() <= 5);
    for (k, e) in v["entries"].as_array().unwrap().iter().enumerate() {
        assert_eq!(e["report"]["passes"], true);
        let c = write(&dir, &format!("e{k}.json"), &e["config"]);
        assert_eq!(code(&run(&["check", s(&c)])), 0);
    }

    let p = space(
        &dir,
        json!({"schema": "1", "field": {"kind": "finite", "p": 13}, "generators": {"cyclic_max_order": 13},
               "points": "all", "limits": {"budget": 100}}),
    );
    let o = run(&["search", s(&p)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("search space too large"));
}

#[test]
fn verify_paper_reports_every_comparison() {
    let o = run(&["verify-paper", "--output", "json"]);
    let v = stdout_json(&o);
    let runs = v["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 3);
    let all_ok = runs.iter().all(|r| r["comparisons"].as_array().unwrap().iter().all(|c| c["ok"] == true));
    assert_eq!(v["passes"], all_ok);
    assert_eq!(code(&o), if all_ok { 0 } else { 1 });
}
