use std::collections::VecDeque;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distance-eigen"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn summary(out: &Path) -> Value {
    let run: Value =
        serde_json::from_str(&fs::read_to_string(out.join("run.json")).unwrap()).unwrap();
    run["summary"].clone()
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let idx = reader
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == name)
        .unwrap();
    reader
        .records()
        .map(|r| r.unwrap()[idx].parse::<f64>().unwrap())
        .collect()
}

#[test]
fn path4_distance() {
    let dir = tempfile::tempdir().unwrap();
    let res = run(dir.path(), &["graph-distance", "--path", "4"]);
    assert!(res.status.success());
    assert_eq!(
        column(&dir.path().join("distance.csv"), "d"),
        vec![0.0, 1.0, 1.0, 0.0]
    );
    let run: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run.json")).unwrap()).unwrap();
    assert_eq!(run["seed"], 0);
    assert_eq!(run["command"], "graph-distance");
}

#[test]
fn grid_distance_matches_bfs() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(
        dir.path(),
        &["graph-distance", "--grid", "16", "16", "--boundary", "ring"]
    )
    .status
    .success());
    let d = column(&dir.path().join("distance.csv"), "d");
    let (w, h) = (16usize, 16usize);
    let mut oracle = vec![usize::MAX; w * h];
    let mut queue = VecDeque::new();
    for j in 0..h {
        for i in 0..w {
            if i == 0 || j == 0 || i + 1 == w || j + 1 == h {
                oracle[j * w + i] = 0;
                queue.push_back((i, j));
            }
        }
    }
    while let Some((i, j)) = queue.pop_front() {
        let here = oracle[j * w + i];
        let mut nbrs = vec![];
        if i > 0 {
            nbrs.push((i - 1, j));
        }
        if j > 0 {
            nbrs.push((i, j - 1));
        }
        if i + 1 < w {
            nbrs.push((i + 1, j));
        }
        if j + 1 < h {
            nbrs.push((i, j + 1));
        }
        for (a, b) in nbrs {
            if oracle[b * w + a] == usize::MAX {
                oracle[b * w + a] = here + 1;
                queue.push_back((a, b));
            }
        }
    }
    for (x, &o) in oracle.iter().enumerate() {
        assert_eq!(d[x], o as f64);
    }
}

#[test]
fn disconnected_graph_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    fs::write(
        &graph,
        r#"{"vertices":4,"edges":[[0,1,1],[2,3,1]],"boundary":[0]}"#,
    )
    .unwrap();
    let res = run(
        dir.path(),
        &["graph-distance", "--graph", graph.to_str().unwrap()],
    );
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("DisconnectedGraph"));
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    fs::write(&graph, "{\"vertices\": 3").unwrap();
    let res = run(
        dir.path(),
        &["graph-distance", "--graph", graph.to_str().unwrap()],
    );
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn spike_flow_extinction() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.csv");
    fs::write(&f, "vertex,value\n0,0\n1,1\n2,0\n").unwrap();
    let res = run(
        dir.path(),
        &[
            "flow",
            "--path",
            "3",
            "--f",
            f.to_str().unwrap(),
            "--step",
            "0.01",
        ],
    );
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let s = summary(dir.path());
    let t = s["extinction_time_estimate"].as_f64().unwrap();
    assert!((t - 1.0).abs() <= 2.0 * 0.01);
    let norms = column(&dir.path().join("trajectory.csv"), "norm2");
    assert!(norms.windows(2).all(|w| w[1] <= w[0] + 1e-12));
}

#[test]
fn zero_flow_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let res = run(dir.path(), &["flow", "--path", "5", "--f", "const:0"]);
    assert!(res.status.success());
    let s = summary(dir.path());
    assert!(s["profile"].is_null());
    assert_eq!(column(&dir.path().join("trajectory.csv"), "t"), vec![0.0]);
}

#[test]
fn grid_flow_profile() {
    let dir = tempfile::tempdir().unwrap();
    let res = run(dir.path(), &["flow", "--grid", "16", "16", "--f", "const"]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let s = summary(dir.path());
    assert!(s["distance_profile_error_inf"].as_f64().unwrap() <= 1e-3);
    let lambda = s["lambda_est"].as_f64().unwrap();
    assert!((lambda - s["distance_lambda"].as_f64().unwrap()).abs() <= 1e-3);
}

#[test]
fn certify_writes_certificate() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["certify", "--path", "4"])
        .status
        .success());
    let cert: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("certificate.json")).unwrap())
            .unwrap();
    assert!((cert["lambda"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(cert["q"].as_array().unwrap().len(), 6);
    assert!(cert["residuals"]["residual_inf"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn random_graph_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        assert!(run(
            dir.path(),
            &["--seed", "17", "graph-distance", "--random", "12", "6"]
        )
        .status
        .success());
    }
    let read = |d: &tempfile::TempDir| fs::read(d.path().join("distance.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_eq!(summary(a.path())["vertices"], 12);
}

#[test]
fn mesh_ingestion() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("mesh.csv");
    fs::write(
        &mesh,
        "source,target,weight\nnorth,centre,1\ncentre,south,4\n",
    )
    .unwrap();
    let res = run(
        dir.path(),
        &[
            "graph-distance",
            "--mesh",
            mesh.to_str().unwrap(),
            "--mesh-boundary",
            "north,south",
        ],
    );
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    assert_eq!(
        column(&dir.path().join("distance.csv"), "d"),
        vec![0.0, 0.5, 0.0]
    );
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let res = Command::new(env!("CARGO_BIN_EXE_distance-eigen"))
        .env("DISTANCE_EIGEN_OUT", dir.path())
        .args(["svc", "--level", "2"])
        .output()
        .unwrap();
    assert!(res.status.success());
    assert!(dir.path().join("svc_distance.csv").exists());
}

#[test]
fn continuum_interval_g() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(
        dir.path(),
        &["continuum", "--profile", "interval", "--demo", "g"]
    )
    .status
    .success());
    let path = dir.path().join("g.csv");
    let t = column(&path, "t");
    let g = column(&path, "g");
    for (t, g) in t.iter().zip(&g) {
        assert!((g - (3.0 * t).sqrt()).abs() <= 1e-6);
    }
}

#[test]
fn continuum_disk_t_star() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(
        dir.path(),
        &["continuum", "--profile", "disk", "--demo", "g"]
    )
    .status
    .success());
    let t_star = summary(dir.path())["t_star"].as_f64().unwrap();
    assert!((t_star - std::f64::consts::PI / 6.0).abs() <= 1e-6);
}

#[test]
fn lshape_bound_passes() {
    let dir = tempfile::tempdir().unwrap();
    let res = run(
        dir.path(),
        &[
            "continuum",
            "--profile",
            "lshape",
            "--L",
            "1",
            "--delta",
            "0.4",
            "--demo",
            "bound",
        ],
    );
    assert!(res.status.success());
    let s = summary(dir.path());
    assert_eq!(s["verdict"], "PASS");
    let margins = column(&dir.path().join("bound.csv"), "margin");
    assert!(margins.iter().all(|m| *m >= -1e-12));
}

#[test]
fn tabulated_profile_matches_disk() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("disk.csv");
    let mut text = String::from("tau,perimeter\n");
    for i in 0..=200 {
        let tau = i as f64 / 200.0;
        text.push_str(&format!(
            "{tau},{}\n",
            2.0 * std::f64::consts::PI * (1.0 - tau)
        ));
    }
    fs::write(&table, text).unwrap();
    let res = run(
        dir.path(),
        &[
            "continuum",
            "--profile",
            "csv",
            "--csv",
            table.to_str().unwrap(),
            "--demo",
            "vartime",
        ],
    );
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let s = summary(dir.path());
    assert!((s["d_norm2_sq"].as_f64().unwrap() - std::f64::consts::PI / 6.0).abs() < 1e-9);
    assert!(s["max_error"].as_f64().unwrap() < 1e-6);
}

#[test]
fn missing_bound_params_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("p.csv");
    fs::write(&table, "tau,perimeter\n0,2\n0.5,2\n1,2\n").unwrap();
    let res = run(
        dir.path(),
        &[
            "continuum",
            "--profile",
            "csv",
            "--csv",
            table.to_str().unwrap(),
            "--dimension",
            "1",
            "--demo",
            "bound",
        ],
    );
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("MissingBoundParams"));
    let convex = run(
        dir.path(),
        &["continuum", "--profile", "interval", "--demo", "bound"],
    );
    assert!(convex.status.success());
}

#[test]
fn sphere_calibration_table() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["continuum", "--demo", "calibration"])
        .status
        .success());
    let path = dir.path().join("calibration.csv");
    let found = column(&path, "maximizer");
    let expected = column(&path, "expected_maximizer");
    assert_eq!(found.len(), 5);
    for (a, b) in found.iter().zip(&expected) {
        assert!((a - b).abs() <= 1e-8);
    }
}

#[test]
fn basis_rayleigh_table() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["basis", "--n", "4"]).status.success());
    let r = column(&dir.path().join("rayleigh.csv"), "rayleigh");
    for (k, value) in r.iter().enumerate() {
        assert!((value - (1.5f64).sqrt() * (k + 1) as f64).abs() < 1e-12);
    }
    assert!(dir.path().join("basis_01_v1.csv").exists());
    assert!(dir.path().join("basis_04_u2.csv").exists());
}

#[test]
fn extreme_1d_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["svc", "--level", "4"]).status.success());
    let svc = dir.path().join("svc_distance.csv");
    let res = run(dir.path(), &["extreme-1d", svc.to_str().unwrap()]);
    assert!(res.status.success());
    let s = summary(dir.path());
    assert_eq!(s["verdict"], "not_extreme");
    assert_eq!(s["verified"], true);
    assert!(dir.path().join("v_plus.csv").exists() && dir.path().join("v_minus.csv").exists());

    let hat = dir.path().join("hat.csv");
    fs::write(&hat, "breakpoint,value\n-1,0\n0,1\n1,0\n").unwrap();
    assert!(run(dir.path(), &["extreme-1d", hat.to_str().unwrap()])
        .status
        .success());
    assert_eq!(summary(dir.path())["verdict"], "extreme");

    assert!(run(dir.path(), &["eigen-1d", hat.to_str().unwrap()])
        .status
        .success());
    let s = summary(dir.path());
    assert_eq!(s["lambda"], "3/2");
    assert_eq!(s["c"], "3/4");
}

#[test]
fn svc_level6_measure() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["svc", "--level", "6"]).status.success());
    let s = summary(dir.path());
    assert_eq!(s["measure"], "65/128");
    assert_eq!(s["extreme"], false);
    assert_eq!(s["decomposition_verified"], true);
}
