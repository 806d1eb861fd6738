use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn checker(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_checker")).args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text.lines().count(), 1, "expected one JSON line, got {text:?}");
    serde_json::from_str(text.trim()).unwrap()
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn four_color_cheburek_stats() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", &json!({"n": 4, "perms": [[1], [1], [1], [1]]}));
    let out = checker(&["board", "stats", "--in", s(&g)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["outputs"]["faces"], 2);
    assert_eq!(r["outputs"]["vertices"], 4);
    assert_eq!(r["outputs"]["edges"], 4);
    assert_eq!(r["inputs"][s(&g)].as_str().unwrap().len(), 64);
}

#[test]
fn permutation_info_from_images_and_two_rows() {
    let r = report(&checker(&["perm", "info", "--images", "4,10,9,5,3,8,2,6,1,7"]));
    assert_eq!(r["outputs"]["cycles"], json!([[1, 4, 5, 3, 9], [2, 10, 7], [6, 8]]));
    assert_eq!(r["outputs"]["cycle_type"], json!({"2": 1, "3": 1, "5": 1}));
    let r = report(&checker(&["perm", "info", "--top", "3,1,2", "--images", "1,2,3"]));
    assert_eq!(r["outputs"]["inverse"], json!([3, 1, 2]));
    let r = report(&checker(&["perm", "compose", "--p", "2,1,3", "--q", "1,3,2"]));
    assert_eq!(r["outputs"]["product"], json!([2, 3, 1]));
}

#[test]
fn board_json_is_accepted_and_dot_is_written() {
    let dir = TempDir::new().unwrap();
    let b = write(&dir, "b.json", &json!({"n": 3, "gluings": [[2, 1], [1, 2], [2, 1]]}));
    let dot = dir.path().join("b.dot");
    let out = checker(&["board", "dot", "--in", s(&b), "--out", s(&dot)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.contains("color=red") && text.contains("color=blue"));
}

#[test]
fn identity_squared_is_identity() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", &json!({"n": 3, "perms": [[1, 2], [1, 2], [1, 2]]}));
    let coset = report(&checker(&["coset", "from-element", "--in", s(&g), "--alpha", "2", "--beta", "2"]));
    let id = write(&dir, "id.json", &coset["outputs"]["coset"]);
    let out = checker(&["coset", "mul", "--a", s(&id), "--b", s(&id)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["outputs"]["product"], coset["outputs"]["coset"]);
}

#[test]
fn involution_and_canonical_form() {
    let dir = TempDir::new().unwrap();
    let a = write(
        &dir,
        "a.json",
        &json!({"n": 3, "alpha": 2, "beta": 1, "gluings": [[2, 3, 1], [1, 3, 2], [3, 2, 1]],
                "black_labels": {"1": 2}, "white_labels": {"1": 1, "2": 3}}),
    );
    let inv = report(&checker(&["coset", "involute", "--in", s(&a)]));
    assert_eq!(inv["outputs"]["involution"]["alpha"], 1);
    assert_eq!(inv["outputs"]["involution"]["beta"], 2);
    let back = write(&dir, "back.json", &inv["outputs"]["involution"]);
    let twice = report(&checker(&["coset", "involute", "--in", s(&back)]));
    let c1 = report(&checker(&["coset", "canon", "--in", s(&a)]));
    let a2 = write(&dir, "a2.json", &twice["outputs"]["involution"]);
    let c2 = report(&checker(&["coset", "canon", "--in", s(&a2)]));
    assert_eq!(c1["outputs"]["digest"], c2["outputs"]["digest"]);
}

#[test]
fn homomorphism_check_passes() {
    let out = checker(&["tft", "check", "--dims", "2,2,2", "--pairs", "20", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["deviations"]["homomorphism"].as_f64().unwrap() <= 1e-10);
    assert_eq!(r["passed"], true);
}

#[test]
fn oracle_agrees_with_the_state_sum_on_a_graded_symbol() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", &json!({"n": 3, "perms": [[2, 1, 3], [1, 3, 2], [3, 1, 2]]}));
    let h = write(
        &dir,
        "h.json",
        &json!({"n": 3, "dims": [2, 2, 2], "parities": [[0, 1], [0, 1], [0, 0]],
                "entries": [{"idx": [1, 1, 1], "re": 0.6}, {"idx": [2, 2, 1], "re": 0.3, "im": 0.5},
                            {"idx": [1, 1, 2], "re": -0.4}, {"idx": [2, 2, 2], "re": 0.2, "im": -0.1}]}),
    );
    let out = checker(&["tft", "oracle", "--in", s(&g), "--tensor", s(&h), "--alpha", "2", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert!(r["deviations"]["state_sum"].as_f64().unwrap() <= 1e-10);
    assert_eq!(r["outputs"]["operator"]["rows"], 64);
    assert_eq!(r["outputs"]["operator"]["cols"], 8);
}

#[test]
fn phi_of_a_cheburek_is_one_and_op_of_the_identity_is_identity() {
    let dir = TempDir::new().unwrap();
    let h = write(
        &dir,
        "h.json",
        &json!({"n": 2, "dims": [2, 2], "entries": [{"idx": [1, 1], "re": 0.6}, {"idx": [2, 1], "im": 0.8, "re": 0.0}]}),
    );
    let closed = write(&dir, "c.json", &json!({"n": 2, "alpha": 0, "beta": 0, "gluings": [[1], [1]]}));
    let r = report(&checker(&["tft", "phi", "--board", s(&closed), "--tensor", s(&h)]));
    assert!((r["outputs"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let id = write(
        &dir,
        "id.json",
        &json!({"n": 2, "alpha": 1, "beta": 1, "gluings": [[1], [1]], "black_labels": {"1": 1}, "white_labels": {"1": 1}}),
    );
    let r = report(&checker(&["tft", "op", "--board", s(&id), "--tensor", s(&h)]));
    assert_eq!(r["outputs"]["operator"]["re"], json!([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]));
}

#[test]
fn chips_from_the_figure_pair_and_composition_with_identity() {
    let dir = TempDir::new().unwrap();
    let g = write(
        &dir,
        "g.json",
        &json!({"n": 2, "perms": [[4, 10, 9, 5, 3, 8, 2, 6, 1, 7], [10, 5, 3, 9, 6, 4, 8, 2, 7, 1]]}),
    );
    let r = report(&checker(&["chips", "from-pair", "--in", s(&g), "--alpha", "4", "--beta", "3"]));
    let chip = &r["outputs"]["chip"];
    assert_eq!(chip["arcs"].as_array().unwrap().len(), 7);
    let has = |x: &str, y: &str, len: u64| {
        chip["arcs"].as_array().unwrap().iter().any(|arc| {
            let ends: Vec<&str> = arc["ends"].as_array().unwrap().iter().map(|e| e.as_str().unwrap()).collect();
            (ends == [x, y] || ends == [y, x]) && arc["len"] == len
        })
    };
    assert!(has("entry-square-2", "entry-fat-3", 3));
    assert!(has("entry-fat-1", "exit-fat-4", 0));
    let a = write(&dir, "a.json", chip);
    let idg = write(&dir, "id.json", &json!({"n": 2, "perms": [[1, 2, 3], [1, 2, 3]]}));
    let id = report(&checker(&["chips", "from-pair", "--in", s(&idg), "--alpha", "3", "--beta", "3"]));
    let idp = write(&dir, "idc.json", &id["outputs"]["chip"]);
    let out = checker(&["chips", "compose", "--a", s(&a), "--b", s(&idp)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report(&out)["outputs"]["chip"], *chip);
}

#[test]
fn thoma_eval_cross_checks_the_graded_state_sum() {
    let out = checker(&["thoma", "eval", "--cycles", "5,3,2", "--alphas", "0.5,0.3", "--betas", "0.2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let p = |k: i32| 0.5f64.powi(k) + 0.3f64.powi(k) - (-0.2f64).powi(k);
    let expected = p(5) * p(3) * p(2);
    assert!((r["outputs"]["character"].as_f64().unwrap() - expected).abs() < 1e-15);
    assert!(r["deviations"]["phi_super"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn quasidual_stats_for_the_cheburek() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", &json!({"n": 4, "perms": [[1], [1], [1], [1]]}));
    let r = report(&checker(&["quasidual", "stats", "--in", s(&g)]));
    let c = &r["outputs"]["complex"];
    assert_eq!((c["vertices"].as_u64(), c["edges"].as_u64()), (Some(2), Some(4)));
    assert_eq!(c["faces"].as_array().unwrap().len(), 6);
    assert_eq!(r["outputs"]["is_surface"], false);
}

#[test]
fn verify_all_passes_every_check() {
    let out = checker(&["verify", "all", "--seed", "0"]);
    let r = report(&out);
    let checks = r["outputs"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 11);
    for c in checks {
        assert_eq!(c["passed"], true, "{c}");
    }
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reports_are_reproducible_apart_from_timings() {
    fn strip(mut v: Value) -> Value {
        v.as_object_mut().unwrap().remove("wall_time_ms");
        if let Some(checks) = v["outputs"]["checks"].as_array_mut() {
            for c in checks {
                c.as_object_mut().unwrap().remove("wall_time_ms");
            }
        }
        v
    }
    for args in [&["tft", "check", "--pairs", "5", "--seed", "3"][..], &["verify", "one", "--id", "10", "--seed", "4"]] {
        let a = strip(report(&checker(args)));
        let b = strip(report(&checker(args)));
        assert_eq!(a, b);
    }
}

#[test]
fn thread_cap_does_not_change_results() {
    let args = ["tft", "check", "--pairs", "5", "--seed", "9"];
    let base = report(&checker(&args));
    let capped = Command::new(env!("CARGO_BIN_EXE_checker"))
        .args(args)
        .env("COSET_TFT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(0));
    assert_eq!(report(&capped)["outputs"], base["outputs"]);
    let bad = Command::new(env!("CARGO_BIN_EXE_checker"))
        .args(args)
        .env("COSET_TFT_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn bad_input_exits_with_one() {
    assert_eq!(checker(&["board", "stats", "--bogus"]).status.code(), Some(1));
    assert_eq!(checker(&["nosuch"]).status.code(), Some(1));
    assert_eq!(checker(&["perm", "info", "--images", "1,1"]).status.code(), Some(1));
    assert_eq!(checker(&["verify", "one", "--id", "12"]).status.code(), Some(1));
    assert_eq!(checker(&["board", "stats", "--in", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(checker(&["tft", "check", "--dims", "2"]).status.code(), Some(1));
    assert_eq!(checker(&["thoma", "eval", "--cycles", "2", "--alphas", "0.9,0.5"]).status.code(), Some(1));
    let help = checker(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}
