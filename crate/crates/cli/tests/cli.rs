use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn gevrey(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gevrey")).current_dir(dir).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

/// Run `args` with `--config cfg.json --out out` inside a fresh directory.
fn run(args: &[&str], cfg: &Value) -> (TempDir, Output) {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path(), "cfg.json", cfg);
    let mut full = args.to_vec();
    full.extend(["--config", "cfg.json", "--out", "out"]);
    let out = gevrey(dir.path(), &full);
    (dir, out)
}

fn report(dir: &TempDir, name: &str) -> Value {
    let text = fs::read_to_string(dir.path().join("out").join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn type_fit_on_euler_recovers_half() {
    let (dir, out) = run(&["type-fit"], &json!({"input": {"testbed": "euler"}, "directions": [[0.0]]}));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rep = report(&dir, "type-fit.json");
    let r = rep["results"][0]["estimate"][0].as_f64().unwrap();
    assert!((r / 0.5 - 1.0).abs() < 0.1, "R = {r}");
    let plain = rep["results"][0]["plain_estimate"][0].as_f64().unwrap();
    assert!((plain / 0.5 - 1.0).abs() < 0.1, "plain R = {plain}");
}

#[test]
fn type_fit_on_flat_entry_uses_flat_fit() {
    let (dir, out) = run(&["type-fit"], &json!({"input": {"testbed": "flat1", "params": {"flat_rate": 2.0}}, "directions": [[FRAC_PI_4]]}));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rep = report(&dir, "type-fit.json");
    assert_eq!(rep["kind"], "flat");
    let r = rep["results"][0]["estimate"][0].as_f64().unwrap();
    assert!((r - 2.0 * FRAC_PI_4.cos()).abs() < 1e-8, "{r}");
}

#[test]
fn predict_type_circle_row_at_quarter_turn() {
    let cfg = json!({"alpha": 0.0, "beta": FRAC_PI_2, "r_alpha": 1.0, "r_beta": 1.0});
    let (dir, out) = run(&["predict-type"], &cfg);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("out/predict-type.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "theta,fz_type,sine_type,circle_type,r_tilde,final_type");
    let row: Vec<&str> = lines
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|c| (c[0].parse::<f64>().unwrap() - FRAC_PI_4).abs() < 1e-15)
        .expect("row at π/4");
    // the circle through 0, 1 and i has centre (1+i)/2; its chord along π/4 is √2
    let circle: f64 = row[3].parse().unwrap();
    assert!((circle - SQRT_2).abs() < 1e-12, "{circle}");
    assert_eq!(row[1].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn predict_type_leaves_undefined_cells_empty() {
    // r_tilde needs |θ − θ0| < π/2; the edges of a half plane miss it
    let cfg = json!({"alpha": -FRAC_PI_2, "beta": FRAC_PI_2, "count": 3});
    let (dir, out) = run(&["predict-type"], &cfg);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("out/predict-type.csv")).unwrap();
    let first: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first.len(), 6);
    assert!(first[4].is_empty() && first[3].is_empty(), "{first:?}");
}

#[test]
fn verify_coherence_on_rat2_passes() {
    let (dir, out) = run(&["verify", "coherence"], &json!({"input": {"testbed": "rat2"}}));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rep = report(&dir, "verify-coherence.json");
    assert!(rep["details"]["max_residual"].as_f64().unwrap() < 1e-6);
    assert_eq!(rep["status"], "ok");
}

#[test]
fn verify_suites_on_testbed_entries() {
    let (_d, out) = run(&["verify", "pl"], &json!({"input": {"testbed": "brg_const2"}}));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (_d, out) = run(&["verify", "null-expansion"], &json!({"input": {"testbed": "flat2"}, "orders": {"min": 1, "max": 4}}));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (dir, out) = run(&["verify", "remainder"], &json!({"input": {"testbed": "poly"}, "orders": {"min": 1, "max": 3}}));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(report(&dir, "verify-remainder.json")["details"][0]["all_decay"], true);
}

#[test]
fn failed_checks_exit_1() {
    // 1/((1+z1)(1+z2)) tends to 1 at the vertex, so |f|/|z|^N blows up
    let (dir, out) = run(&["verify", "null-expansion"], &json!({"input": {"testbed": "rat2"}, "orders": {"min": 1, "max": 2}}));
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let rep = report(&dir, "verify-null-expansion.json");
    assert_eq!(rep["status"], "failed");
    assert_eq!(rep["details"][0]["all_decay"], false);
}

#[test]
fn transform_matches_closed_form() {
    // L[1](z) over [0, z0] is 1 − exp(−z0/z)
    let cfg = json!({
        "input": {"series": {"dim": 1, "exact": true, "coeffs": [{"index": [0], "re": 1.0, "im": 0.0}]},
                  "laplace": {"z0": [[0.5, 0.0]]}},
        "grid": {"rays": {"directions": [[0.0], [0.7]], "radii": {"start": 0.6, "ratio": 0.5, "count": 6}}}
    });
    let (dir, out) = run(&["transform"], &cfg);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("out/transform.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "re z1,im z1,re F,im F,est_err");
    let mut rows = 0;
    for l in lines {
        let c: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
        let z = num(c[0], c[1]);
        let want = {
            let w = div(num(-0.5, 0.0), z);
            let e = (w.0.exp() * w.1.cos(), w.0.exp() * w.1.sin());
            (1.0 - e.0, -e.1)
        };
        assert!((c[2] - want.0).hypot(c[3] - want.1) < 1e-10, "{l}");
        assert!(c[4] >= 0.0);
        rows += 1;
    }
    assert_eq!(rows, 12);
    assert_eq!(report(&dir, "transform.json")["failed_points"], 0);
}

fn num(re: f64, im: f64) -> (f64, f64) {
    (re, im)
}

fn div(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

#[test]
fn interpolate_rat2_reproduces_its_family() {
    let cfg = json!({"input": {"testbed": "rat2"}, "z0": [[0.5, 0.0], [0.5, 0.0]], "profiles": [1000.0, 1000.0], "order": 3});
    let (dir, out) = run(&["interpolate"], &cfg);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rep = report(&dir, "interpolate.json");
    assert!(rep["check"]["max_error"].as_f64().unwrap() < 1e-5);
    assert!(rep["coherence_residual"].as_f64().unwrap() < 1e-6);
    // rat2 = 1/((1+z1)(1+z2)): A_{nm} = (−1)^{n+m}
    assert_eq!(rep["constants"][1][2][0].as_f64().unwrap().round(), -1.0);
}

#[test]
fn list_testbed_prints_registry() {
    let dir = tempfile::tempdir().unwrap();
    let out = gevrey(dir.path(), &["list-testbed", "--out", "o"]);
    assert_eq!(code(&out), 0);
    let listed: Value = serde_json::from_slice(&out.stdout).unwrap();
    let ids: Vec<&str> = listed.as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["brg_const", "brg_const2", "euler", "flat1", "flat2", "monomial", "poly", "rat2"]);
    assert_eq!(fs::read(dir.path().join("o/testbed.json")).unwrap(), out.stdout);
}

#[test]
fn schema_violations_exit_2_before_any_output() {
    let cases = [
        (vec!["verify", "coherence"], json!({"input": {"testbed": "rat2"}, "bogus": 1})),
        (vec!["verify", "coherence"], json!({"command": "transform", "input": {"testbed": "rat2"}})),
        (vec!["verify", "coherence"], json!({"suite": "pl", "input": {"testbed": "rat2"}})),
        (vec!["verify", "pl"], json!({"input": {"testbed": "rat2"}, "probe": {}})),
        (vec!["verify", "coherence"], json!({"input": {"testbed": "nope"}})),
        (vec!["verify", "coherence"], json!({"input": {"testbed": "rat2", "series_file": "x.json"}})),
        (vec!["type-fit"], json!({"input": {"testbed": "euler"}, "radii": {"start": 0.8, "ratio": 1.5, "count": 10}})),
        (vec!["type-fit"], json!({"input": {"testbed": "euler"}, "directions": [[2.0]]})),
        (vec!["predict-type"], json!({"alpha": 1.0, "beta": 0.0})),
        (vec!["transform"], json!({"input": {"testbed": "euler"}, "grid": {"points": [[[0.1, 0.0]]]}})),
        (vec!["interpolate"], json!({"input": {"testbed": "euler"}, "z0": [[0.5, 0.0], [0.5, 0.0]], "profiles": [1.0, 1.0]})),
        (vec!["verify", "coherence"], json!({"input": {"testbed": "rat2"}, "outputs": {"report": "../escape.json"}})),
    ];
    for (args, cfg) in cases {
        let (dir, out) = run(&args, &cfg);
        assert_eq!(code(&out), 2, "{args:?} {cfg}: {}", stderr(&out));
        assert!(!dir.path().join("out").exists(), "{args:?} wrote output");
    }
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("broken.json"), "{ not json").unwrap();
    assert_eq!(code(&gevrey(dir.path(), &["type-fit", "--config", "broken.json"])), 2);
    assert_eq!(code(&gevrey(dir.path(), &["type-fit"])), 2, "missing --config");
    assert_eq!(code(&gevrey(dir.path(), &["list-testbed", "--threads", "0"])), 2);
    assert_eq!(code(&gevrey(dir.path(), &["list-testbed", "--threads", "many"])), 2);
}

#[test]
fn nonconvergence_exits_3_with_partial_report() {
    let cfg = json!({"input": {"testbed": "rat2"}, "tolerance": 1e-15, "probe": {"max_levels": 3, "tol": 1e-15}});
    let (dir, out) = run(&["verify", "coherence"], &cfg);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    let rep = report(&dir, "verify-coherence.json");
    assert_eq!(rep["status"], "nonconverged");
    assert!(rep["details"]["failures"].as_array().unwrap().iter().any(|p| p["converged"] == false));

    let cfg = json!({
        "input": {"series": {"dim": 1, "exact": true, "coeffs": [{"index": [2], "re": 1.0, "im": 0.0}]},
                  "laplace": {"z0": [[0.5, 0.0]], "tol": 1e-16, "max_depth": 1}},
        "grid": {"rays": {"directions": [[0.0]], "radii": {"start": 0.4, "ratio": 0.5, "count": 8}}}
    });
    let (dir, out) = run(&["transform"], &cfg);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(report(&dir, "transform.json")["failed_points"].as_u64().unwrap() > 0);
    assert!(dir.path().join("out/transform.csv").exists());
}

#[test]
fn unknown_subcommand_exits_64() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&gevrey(dir.path(), &["frobnicate"])), 64);
    assert_eq!(code(&gevrey(dir.path(), &["verify", "everything"])), 64);
    assert_eq!(code(&gevrey(dir.path(), &[])), 64);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let jittered = json!({
        "input": {"series": {"dim": 2, "exact": true, "coeffs": [{"index": [0, 0], "re": 1.0, "im": 0.0}, {"index": [1, 2], "re": -2.0, "im": 0.5}]},
                  "laplace": {"z0": [[0.5, 0.0], [0.4, 0.2]]}},
        "grid": {"rays": {"directions": [[0.0, 0.3]], "radii": {"start": 0.3, "ratio": 0.7, "count": 5}}, "jitter": 0.1}
    });
    let read = |dir: &TempDir| {
        (fs::read(dir.path().join("out/transform.csv")).unwrap(), fs::read(dir.path().join("out/transform.json")).unwrap())
    };
    let (a, _) = run(&["transform", "--seed", "7"], &jittered);
    let (b, _) = run(&["transform", "--seed", "7", "--threads", "1"], &jittered);
    let (c, _) = run(&["transform", "--seed", "8"], &jittered);
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a).0, read(&c).0, "seed moves jittered points");

    let mut plain = jittered.clone();
    plain["grid"]["jitter"] = json!(0.0);
    let (d, _) = run(&["transform", "--seed", "7"], &plain);
    let (e, _) = run(&["transform", "--seed", "8"], &plain);
    assert_eq!(read(&d), read(&e), "seed has no effect without jitter");

    let coh = json!({"input": {"testbed": "brg_const2"}, "max_order": 2});
    let (f, _) = run(&["verify", "coherence", "--threads", "1"], &coh);
    let (g, _) = run(&["verify", "coherence"], &coh);
    let bytes = |d: &TempDir| fs::read(d.path().join("out/verify-coherence.json")).unwrap();
    assert_eq!(bytes(&f), bytes(&g));

    let tf = json!({"input": {"testbed": "euler"}, "directions": [[0.3]]});
    let (h, _) = run(&["type-fit"], &tf);
    let (i, _) = run(&["type-fit", "--threads", "2"], &tf);
    assert_eq!(fs::read(h.path().join("out/type-fit.json")).unwrap(), fs::read(i.path().join("out/type-fit.json")).unwrap());
}

#[test]
fn relative_series_file_resolves_against_config_dir() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("cfg")).unwrap();
    fs::write(dir.path().join("cfg/s.json"), r#"{"dim":1,"exact":true,"coeffs":[{"index":[0],"re":1,"im":0}]}"#).unwrap();
    write_config(
        &dir.path().join("cfg"),
        "t.json",
        &json!({"input": {"series_file": "s.json", "laplace": {"z0": [[0.5, 0.0]]}},
                "grid": {"points": [[[0.2, 0.0]]]}}),
    );
    let out = gevrey(dir.path(), &["transform", "--config", "cfg/t.json", "--out", "o"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(dir.path().join("o/transform.csv").exists());
}
