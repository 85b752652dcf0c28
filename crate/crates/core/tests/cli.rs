use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use walk_occupation::generate;
use walk_occupation::io::{load_vector, InstanceFile};
use walk_occupation::occupation::expected_occupation_fixed_point;
use walk_occupation::solvability::solve_path;
use walk_occupation::weights::transition_matrix;
use walk_occupation::{GraphInstance, OccupationVector, WeightAssignment};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn walkocc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walkocc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn write_instance(dir: &TempDir, name: &str, g: &GraphInstance, w: Option<&WeightAssignment>) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_vec(&InstanceFile::from_graph(g, w)).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn expect_fixedpoint_on_p3() {
    let out = walkocc(&["expect", "--instance", &data("p3.json"), "--method", "fixedpoint"]);
    assert!(out.status.success());
    let tau = floats(&stdout_json(&out)["tau"]);
    for (a, b) in tau.iter().zip([1.0, 2.0, 2.0]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn expect_green_on_single_edge_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("tau.csv");
    let out = walkocc(&["expect", "--instance", &data("single_edge.json"), "--method", "green", "--out", path_str(&csv)]);
    assert!(out.status.success());
    let tau = load_vector(&csv, &[]).unwrap();
    assert!((tau[0] - 1.0).abs() < 1e-12 && (tau[1] - 1.0).abs() < 1e-12);
    let manifest: Value = serde_json::from_slice(&std::fs::read(dir.path().join("tau.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "expect");
    assert_eq!(manifest["flags"]["method"], "green");
}

#[test]
fn montecarlo_on_p3_is_close_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("mc.json");
    let args = [
        "expect", "--instance", &data("p3.json"), "--method", "montecarlo", "--N", "200000", "--seed", "42", "--out",
        path_str(&out_path),
    ];
    assert!(walkocc(&args).status.success());
    let first = std::fs::read(&out_path).unwrap();
    assert!(walkocc(&args).status.success());
    assert_eq!(first, std::fs::read(&out_path).unwrap());

    let v: Value = serde_json::from_slice(&first).unwrap();
    let (tau, se) = (floats(&v["tau"]), floats(&v["std_err"]));
    for (k, exact) in [1.0, 2.0, 2.0].into_iter().enumerate() {
        assert!((tau[k] - exact).abs() <= 4.0 * se[k] + 1e-12, "vertex {k}: {} ± {}", tau[k], se[k]);
    }
    assert_eq!(v["manifest"]["seed"], 42);
}

#[test]
fn montecarlo_without_seed_names_the_flag() {
    let out = walkocc(&["expect", "--instance", &data("p3.json"), "--method", "montecarlo", "--N", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
}

#[test]
fn missing_weights_name_the_field() {
    let out = walkocc(&["expect", "--instance", &data("petersen.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rho"));
}

#[test]
fn reconstruct_p3_gives_uniform_weights() {
    let out = walkocc(&["reconstruct", "--instance", &data("p3.json"), "--tau", &data("p3_tau.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "converged");
    for r in floats(&v["rho"]) {
        assert!((r - 1.0).abs() < 1e-6);
    }
}

#[test]
fn reconstruct_p4_agrees_with_path_solver() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("rho.json");
    let out = walkocc(&[
        "reconstruct", "--instance", &data("p4.json"), "--tau", &data("p4_tau.json"), "--out", path_str(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&std::fs::read(&out_path).unwrap()).unwrap();
    let g = generate::path(4);
    let fitted = WeightAssignment::new(&g, floats(&v["rho"])).unwrap();
    let exact = solve_path(&g, &OccupationVector::expected(vec![1.0, 2.0, 3.0, 2.0])).unwrap();
    let gap = (transition_matrix(&g, &fitted) - transition_matrix(&g, &exact)).amax();
    assert!(gap < 1e-3, "{gap}");

    let log = std::fs::read_to_string(dir.path().join("rho.json.iterations.csv")).unwrap();
    assert!(log.starts_with("iter,cost,step\n"));
    let costs: Vec<f64> = log.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(costs.windows(2).all(|c| c[1] <= c[0]));
}

#[test]
fn reconstruct_with_disconnected_support_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("rho.json");
    let out = walkocc(&[
        "reconstruct", "--instance", &data("p4.json"), "--tau", &data("p4_gap.json"), "--out", path_str(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).to_lowercase().contains("support"));
    assert!(!out_path.exists());
}

#[test]
fn reconstruct_hitting_max_iters_exits_2() {
    let out = walkocc(&[
        "reconstruct", "--instance", &data("p4.json"), "--tau", &data("p4_tau.json"), "--max-iters", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["status"], "max_iters");
}

#[test]
fn solve_path_and_complete() {
    let out = walkocc(&["solve", "--instance", &data("p4.json"), "--r", &data("p4_tau.json")]);
    assert!(out.status.success());
    let rho = floats(&stdout_json(&out)["rho"]);
    for (a, b) in rho.iter().zip([1.0, 1.0, 1.0, 0.5]) {
        assert!((a - b).abs() < 1e-12);
    }

    let out = walkocc(&["solve", "--instance", &data("k3.json"), "--r", &data("k3_r.json"), "--family", "complete"]);
    assert!(out.status.success());
    let rho = floats(&stdout_json(&out)["rho"]);
    for r in rho {
        assert!((r - 1.0).abs() < 1e-10);
    }
}

#[test]
fn solve_reports_not_in_psi_with_exit_3() {
    let out = walkocc(&["solve", "--instance", &data("p3.json"), "--r", &data("p3_boundary.json"), "--family", "path"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn petersen_is_irreducible() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate::petersen();
    let r = expected_occupation_fixed_point(&g, &WeightAssignment::uniform(&g)).unwrap();
    let r_path: PathBuf = dir.path().join("r.json");
    std::fs::write(&r_path, serde_json::to_vec(&r.values).unwrap()).unwrap();
    let out = walkocc(&["solve", "--instance", &data("petersen.json"), "--r", path_str(&r_path)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).to_lowercase().contains("irreducible"));
}

#[test]
fn check_reports() {
    let v = stdout_json(&walkocc(&["check", "--instance", &data("p3.json")]));
    assert_eq!(v["hull_dim"], 1);
    assert_eq!(v["bipartite"], true);
    assert!(v["relint"].is_null());

    let v = stdout_json(&walkocc(&["check", "--instance", &data("k3.json")]));
    assert_eq!(v["hull_dim"], 2);
    assert_eq!(v["bipartite"], false);

    let v = stdout_json(&walkocc(&["check", "--instance", &data("p3.json"), "--r", &data("p3_boundary.json")]));
    assert_eq!(v["relint"], false);

    let v = stdout_json(&walkocc(&["check", "--instance", &data("p3.json"), "--r", &data("p3_tau.json")]));
    assert_eq!(v["relint"], true);
}

#[test]
fn check_with_tiny_cap_fails() {
    let out = walkocc(&["check", "--instance", &data("p4.json"), "--cap", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gradcheck_examples() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write_instance(&dir, "tree.json", &generate::random_tree(6, 7), None);
    for (instance, seed) in [(data("p3.json"), "1"), (data("k3.json"), "1"), (tree, "7")] {
        let out = walkocc(&["gradcheck", "--instance", &instance, "--seed", seed]);
        assert_eq!(out.status.code(), Some(0), "{instance}");
        let text = String::from_utf8_lossy(&out.stdout);
        let err: f64 = text.split_whitespace().nth(3).unwrap().parse().unwrap();
        assert!(err <= 1e-5, "{text}");
    }
}

#[test]
fn simulate_writes_proper_walks() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("walks.json");
    let out = walkocc(&["simulate", "--instance", &data("grid3.json"), "--N", "20", "--seed", "3", "--out", path_str(&out_path)]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&std::fs::read(&out_path).unwrap()).unwrap();
    let walks = v["walks"].as_array().unwrap();
    assert_eq!(walks.len(), 20);
    for walk in walks {
        let verts: Vec<u64> = walk.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        assert_eq!(verts[0], 8);
        assert_eq!(*verts.last().unwrap(), 0);
        assert_eq!(verts.iter().filter(|&&x| x == 0).count(), 1);
    }
}

#[test]
fn unknown_instance_fields_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"n":2,"edges":[[0,1]],"v_in":1,"v_out":0,"weights":[1,1]}"#).unwrap();
    let out = walkocc(&["expect", "--instance", path_str(&p)]);
    assert_eq!(out.status.code(), Some(1));
}
