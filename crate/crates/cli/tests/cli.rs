use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use wittlat::{Cochar, WittMat, WittRing};

fn wittlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittlat")).args(args).env_remove("WITTLAT_SEED").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn strata_chain_for_n2_r2() {
    let out = wittlat(&["strata", "--n", "2", "--r", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["strata"].as_array().unwrap().len(), 3);
    assert_eq!(v["edges"].as_array().unwrap().len(), 2);
    let dot = String::from_utf8(wittlat(&["strata", "--n", "2", "--r", "2", "--dot"]).stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("s0 -> s1") && dot.contains("s1 -> s2"));
}

#[test]
fn dims_subregular_point() {
    let out = wittlat(&["dims", "--n", "2", "--r", "1", "--i", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["dim_matrix_orbit"]["value"], 8);
    assert_eq!(v["codim_in_mat"]["value"], 4);
    assert_eq!(v["ci"], true);
    let by_type = json(&wittlat(&["dims", "--type", "2,0", "--r", "1"]));
    assert_eq!(by_type["dim_matrix_orbit"]["value"], 10);
    assert_eq!(by_type["subregular_index"], 0);
    assert_eq!(wittlat(&["dims", "--n", "2", "--r", "1", "--i", "2"]).status.code(), Some(2));
    assert_eq!(wittlat(&["dims", "--n", "3", "--type", "2,0", "--r", "1"]).status.code(), Some(3));
}

#[test]
fn degenerate_round_trip() {
    let out = wittlat(&["degenerate", "--from", "1,1", "--to", "2,0", "--p", "2", "--N", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 1);
    let w = &steps[0]["witness"];
    assert_eq!(w["fac"]["b"], 1);
    let mat = |key: &str| WittMat::from_json(&w[key].to_string()).unwrap();
    let (x, eta, y, target) = (mat("x"), mat("eta_prime"), mat("y"), mat("target"));
    assert_eq!(&x * &eta, &target * &y);
    let ring = WittRing::prime(2, 3).unwrap();
    assert_eq!(target, WittMat::from_ints(&ring, 2, &[2, 0, 1, 2]).unwrap());

    let path = temp_file("witness_target.json", &w["target"].to_string());
    let report = json(&wittlat(&["classify", "--input", path.to_str().unwrap(), "--r", "1"]));
    assert_eq!(report["in_Xr"], true);
    assert_eq!(report["divisors"], serde_json::json!([2, 0]));

    assert!(wittlat(&["degenerate", "--from", "2,2,2", "--to", "4,2,0"]).status.success());
    assert_eq!(wittlat(&["degenerate", "--from", "2,0", "--to", "1,1"]).status.code(), Some(2));
    assert_eq!(wittlat(&["degenerate", "--from", "1,1", "--to", "2,0", "--t", "0"]).status.code(), Some(2));
}

#[test]
fn classify_reports_and_exit_codes() {
    let ring = WittRing::prime(3, 4).unwrap();
    let mu = temp_file("mu.json", &Cochar::mu(3, 1).matrix(&ring).to_json());
    let out = wittlat(&["classify", "--input", mu.to_str().unwrap(), "--r", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["in_Xr"], true);
    assert_eq!(v["divisors"], serde_json::json!([3, 0, 0]));
    assert_eq!(v["stratum_index"], 0);

    let id = temp_file("identity.json", &WittMat::identity(&ring, 3).to_json());
    let out = wittlat(&["classify", "--input", id.to_str().unwrap(), "--r", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["in_Xr"], false);

    assert_eq!(wittlat(&["classify", "--input", id.to_str().unwrap(), "--r", "2"]).status.code(), Some(3));
    assert_eq!(wittlat(&["classify", "--input", id.to_str().unwrap(), "--r", "1", "--p", "2"]).status.code(), Some(3));
    let bad = temp_file("bad.json", "{\"p\": 3, \"entries\": ");
    assert_eq!(wittlat(&["classify", "--input", bad.to_str().unwrap(), "--r", "1"]).status.code(), Some(2));
    assert_eq!(wittlat(&["classify", "--r", "1"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let fac = wittlat(&["verify", "--suite", "fac", "--p", "2", "--n", "2", "--r", "1"]);
    assert!(fac.status.success());
    assert_eq!(json(&fac)["passed"], true);
    let tiny = wittlat(&["verify", "--suite", "tiny"]);
    assert!(tiny.status.success());
    for suite in ["witt", "snf", "dims"] {
        let out = wittlat(&["verify", "--suite", suite, "--samples", "50"]);
        assert!(out.status.success(), "{suite}");
    }
    assert_eq!(wittlat(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn strata_suite_reports_predicate_counterexamples() {
    let out = wittlat(&["verify", "--suite", "strata", "--samples", "60", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let props = v["properties"].as_array().unwrap();
    let implication = props.iter().find(|p| p["name"] == "pred_val_implies_closure").unwrap();
    assert!(implication["failures"].as_u64().unwrap() > 0);
    assert!(implication["reproducers"][0].as_str().unwrap().starts_with("seed="));
    for p in props.iter().filter(|p| p["name"] != "pred_val_implies_closure") {
        assert_eq!(p["failures"], 0, "{}", p["name"]);
    }
}

#[test]
fn census_is_reproducible() {
    let args = ["census", "--p", "2", "--n", "2", "--r", "1", "--samples", "300", "--seed", "17"];
    let a = wittlat(&args);
    let b = wittlat(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut sharded: Vec<&str> = args.to_vec();
    sharded.extend(["--jobs", "4"]);
    assert_eq!(wittlat(&sharded).stdout, a.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 17);
    let total: u64 = v["histogram"].as_object().unwrap().values().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(total, 300);
    assert!(v["histogram"].as_object().unwrap().keys().all(|k| k == "(2,0)" || k == "(1,1)"));

    let from_env = Command::new(env!("CARGO_BIN_EXE_wittlat"))
        .args(&args[..args.len() - 2])
        .env("WITTLAT_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(from_env.stdout, a.stdout);
}

#[test]
fn enumerate_tiny() {
    let out = wittlat(&["enumerate", "--tiny", "--jobs", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["group_order"], 1536);
    assert_eq!(v["total_matrices"], 4096);
    assert_eq!(v["all_ok"], true);
    assert_eq!(wittlat(&["enumerate"]).status.code(), Some(2));
}

#[test]
fn pretty_output_parses_to_the_same_value() {
    let plain = wittlat(&["dims", "--n", "3", "--r", "2", "--i", "2"]);
    let pretty = wittlat(&["dims", "--n", "3", "--r", "2", "--i", "2", "--pretty"]);
    assert_ne!(plain.stdout, pretty.stdout);
    assert_eq!(json(&plain), json(&pretty));
}
