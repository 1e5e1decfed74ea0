use std::path::Path;
use std::process::{Command, Output};

use perfdisc::field_io::FieldGrid;
use perfdisc::{Point, RawScene};
use serde_json::Value;

fn perfdisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perfdisc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(args: &[&str]) -> Value {
    let out = perfdisc(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn field(args: &[&str]) -> FieldGrid {
    let out = perfdisc(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    FieldGrid::read_csv(&out.stdout[..]).unwrap()
}

fn error_kind(out: &Output) -> String {
    assert!(!out.status.success());
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    v["error"].as_str().unwrap().to_string()
}

/// Interior nodes lower than every finite 8-neighbour.
fn local_minima(g: &FieldGrid) -> Vec<Point> {
    let mut out = Vec::new();
    for iy in 1..g.ny - 1 {
        for ix in 1..g.nx - 1 {
            let v = g.get(ix, iy);
            let neighbours = (0..9)
                .filter(|&k| k != 4)
                .map(|k| g.get(ix + k % 3 - 1, iy + k / 3 - 1))
                .filter(|n| n.is_finite());
            if v.is_finite() && neighbours.clone().count() > 0 && neighbours.into_iter().all(|n| v < n) {
                out.push(g.node(ix, iy));
            }
        }
    }
    out
}

fn near(points: &[Point], c: Point) -> bool {
    points.iter().any(|p| p.distance(c) <= 0.1)
}

#[test]
fn eigen_center_hole() {
    let v = stdout_json(&["eigen", "--preset", "center"]);
    assert!((v["lambda_root"].as_f64().unwrap() - 0.216216).abs() < 1e-6);
    assert!((v["lambda_two_term"].as_f64().unwrap() - 0.215).abs() < 1e-12);
    assert!((v["tau"].as_f64().unwrap() - 4.625).abs() < 1e-9);
    assert!(v["scene_hash"].is_string() && v["version"].is_string());
}

#[test]
fn pair_without_source_has_minima_at_both_holes() {
    let g = field(&["acctime", "--preset", "hole-pair", "--grid", "101"]);
    let mins = local_minima(&g);
    assert!(near(&mins, Point::new(0.2, 0.0)) && near(&mins, Point::new(-0.2, 0.0)));
    assert!(!near(&mins, Point::new(0.0, 0.5)));
    for iy in 0..g.ny {
        for ix in 0..g.nx {
            let (a, b) = (g.get(ix, iy), g.get(g.nx - 1 - ix, iy));
            assert!(a.is_nan() == b.is_nan() && (a.is_nan() || (a - b).abs() < 1e-10));
        }
    }
}

#[test]
fn pair_with_source_gains_minimum_at_source() {
    let g = field(&["acctime", "--preset", "hole-pair-source", "--grid", "101"]);
    let mins = local_minima(&g);
    assert!(near(&mins, Point::new(0.0, 0.5)));
    assert!(near(&mins, Point::new(0.2, 0.0)) && near(&mins, Point::new(-0.2, 0.0)));
}

#[test]
fn artifacts_are_deterministic_and_carry_scene_hash() {
    let args = ["acctime-np", "--preset", "offset-hole", "--grid", "21"];
    let a = perfdisc(&args);
    let b = perfdisc(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let grid = FieldGrid::read_csv(&a.stdout[..]).unwrap();
    let scene = perfdisc_scene("offset-hole");
    assert_eq!(grid.metadata.scene_hash, scene.validate().unwrap().fingerprint());
    assert_eq!(grid.metadata.field, "acc_time_nonperturbative");
    assert_eq!(grid.metadata.params["s_base"], 1e-2);
}

fn perfdisc_scene(name: &str) -> RawScene {
    let v = stdout_json(&["presets"]);
    let entry = v.as_array().unwrap().iter().find(|p| p["name"] == name).unwrap();
    serde_json::from_value(entry["scene"].clone()).unwrap()
}

#[test]
fn presets_written_to_disk_validate() {
    let dir = tempfile::tempdir().unwrap();
    let v = stdout_json(&["presets", "--out-dir", dir.path().to_str().unwrap()]);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|p| p["name"].as_str().unwrap()).collect();
    for name in ["center", "offset-hole", "offset-hole-near-source", "offset-hole-opposite", "hole-pair", "hole-pair-source"] {
        assert!(names.contains(&name));
        let path = dir.path().join(format!("{name}.json"));
        let raw: RawScene = serde_json::from_reader(std::fs::File::open(&path).unwrap()).unwrap();
        raw.validate().unwrap();
    }
    let offset = perfdisc_scene("offset-hole");
    let c = offset.holes[0].center;
    assert!((c.x - 0.25 * 3f64.sqrt()).abs() < 1e-15 && (c.y - 0.25).abs() < 1e-15);
    assert_eq!((offset.gamma0, offset.x0), (1.0, Point::new(0.5, 0.0)));
}

#[test]
fn scene_file_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("scene.json");
    std::fs::write(&scene, r#"{"D":1,"nu":0.1,"gamma0":0,"x0":[0,0],"holes":[{"center":[0,0],"phi":1}]}"#).unwrap();
    let out = dir.path().join("t.csv");
    let status = perfdisc(&[
        "acctime",
        "--scene",
        scene.to_str().unwrap(),
        "--grid",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let g = FieldGrid::load(Path::new(&out)).unwrap();
    // node (1, 0) of the 5x5 lattice
    assert!((g.get(4, 2) - 4.75).abs() < 1e-12);
    assert!(g.get(2, 2).is_nan());
}

#[test]
fn radial_cut_profile() {
    let out = perfdisc(&["acctime", "--preset", "center", "--cut", "r", "--theta", "0", "--points", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# {") && lines[0].contains("scene_hash"));
    assert_eq!(lines[1], "r,theta,x,y,value");
    assert_eq!(lines.len(), 7);
    assert!(lines[2].ends_with(",nan"));
    let last: f64 = lines[6].rsplit(',').next().unwrap().parse().unwrap();
    assert!((last - 4.75).abs() < 1e-12);
}

#[test]
fn one_dimensional_profile_matches_closed_form() {
    let out = perfdisc(&["sweep1d", "--k", "2", "--points", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(2) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cols[2] - cols[1]).abs() < 1e-5);
        assert!((cols[3] - cols[1]).abs() < 1e-3);
    }
}

#[test]
fn compare_reports_small_gap() {
    let v = stdout_json(&["compare", "--preset", "center", "--epsilon", "0.05", "--h", "0.015625"]);
    let rel = v["report"]["linf_rel"].as_f64().unwrap();
    assert!(rel < 0.02, "{rel}");
    assert!(v["report"]["nodes_compared"].as_u64().unwrap() > 1000);
}

#[test]
fn errors_are_json() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("heavy.json");
    std::fs::write(&scene, r#"{"D":1,"nu":0.1,"gamma0":4,"x0":[0.5,0],"holes":[{"center":[0,0],"phi":1}]}"#).unwrap();
    let path = scene.to_str().unwrap();
    assert_eq!(error_kind(&perfdisc(&["acctime", "--scene", path, "--grid", "3"])), "GrowthConditionViolated");
    assert!(perfdisc(&["acctime", "--scene", path, "--grid", "3", "--allow-overshoot"]).status.success());
    assert_eq!(error_kind(&perfdisc(&["t0", "--preset", "hole-pair"])), "UnsupportedHoleCount");
    assert_eq!(error_kind(&perfdisc(&["eigen", "--preset", "nope"])), "Cli");
    assert_eq!(
        error_kind(&perfdisc(&["oracle", "--preset", "center", "--h", "0.1"])),
        "HoleUnresolved"
    );
}

#[test]
fn gauge_flags_are_exclusive() {
    let out = perfdisc(&["eigen", "--preset", "center", "--nu", "0.1", "--epsilon", "0.01"]);
    assert!(!out.status.success());
}
