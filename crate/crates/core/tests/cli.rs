use std::path::{Path, PathBuf};
use std::process::Command;

use convex_bodies::io::{BodyFile, MeasureFile, RunManifest};
use convex_bodies::{make_grid, steiner_normalize, support_distance, SupportVector, Vec3};
use serde_json::{json, Value};

fn cbody(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cbody")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn square_measure() -> Value {
    json!({"dim": 2, "atoms": [
        {"u": [1.0, 0.0], "w": 2.0}, {"u": [0.0, 1.0], "w": 2.0},
        {"u": [-1.0, 0.0], "w": 2.0}, {"u": [0.0, -1.0], "w": 2.0},
    ]})
}

fn lens_spec() -> Value {
    json!({
        "problem": "urysohn",
        "kind": "external",
        "obstacle": {"dim": 2, "vertices": [[-1.0, 0.0], [1.0, 0.0]]},
        "breadth_target": 1.6,
    })
}

#[test]
fn solve_minkowski_recovers_the_square() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "sq.json", &square_measure());
    let out = dir.path().join("body.json");
    let (code, _, err) = cbody(&["solve-minkowski", "--measure", s(&m), "--out", s(&out)]);
    assert_eq!(code, 0, "{err}");
    let body: BodyFile = serde_json::from_value(read(&out)).unwrap();
    let g = make_grid(2, 360).unwrap();
    let got = steiner_normalize(&body.to_support(Some(&g)).unwrap());
    let pts = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)].map(|(x, y)| Vec3::new(x, y, 0.0));
    let sq = SupportVector::from_points(g, &pts).unwrap();
    assert!(support_distance(&got, &sq).unwrap() < 1e-9);
}

#[test]
fn obstructed_majorization_exits_4_with_a_sampled_violation() {
    let dir = tempfile::tempdir().unwrap();
    let mu = write(
        dir.path(),
        "mu.json",
        &json!({"dim": 2, "atoms": [
        {"u": [0.0, 1.0], "w": 1.0}, {"u": [0.0, -1.0], "w": 1.0}]}),
    );
    let nu = write(
        dir.path(),
        "nu.json",
        &json!({"dim": 2, "atoms": [
        {"u": [1.0, 0.0], "w": 1.0}, {"u": [-1.0, 0.0], "w": 1.0}]}),
    );
    let (code, stdout, _) = cbody(&["check-majorization", "--mu", s(&mu), "--nu", s(&nu)]);
    assert_eq!(code, 4);
    let r: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(r["holds"], json!(false));
    assert!(r["sampled"]["min_gap"].as_f64().unwrap() < -1e-9);
    assert!(r["sampled"]["violating"]["generators"].is_array());
    assert!(r["certificate"]["generators"].is_array());

    let (code, stdout, _) = cbody(&["check-majorization", "--mu", s(&mu), "--nu", s(&mu)]);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(r["holds"], json!(true));
    assert!(r["sampled"]["violating"].is_null());
}

#[test]
fn lens_svg_has_one_vertex_per_direction() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "lens.json", &lens_spec());
    let svg = dir.path().join("lens.svg");
    let out = dir.path().join("out.json");
    let (code, _, err) = cbody(&["urysohn", "--spec", s(&spec), "--svg", s(&svg), "--out", s(&out)]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&svg).unwrap();
    let path = text.split("d=\"").nth(1).unwrap();
    let path = &path[..path.find('"').unwrap()];
    assert_eq!(path.matches(['M', 'L']).count(), 720);
    assert!(path.ends_with('Z'));
    assert_eq!(read(&out)["converged"], json!(true));
}

#[test]
fn solved_lens_verifies_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "lens.json", &lens_spec());
    let out = dir.path().join("out.json");
    assert_eq!(cbody(&["urysohn", "--spec", s(&spec), "--out", s(&out)]).0, 0);
    let body = read(&out)["body"].clone();
    let check = write(
        dir.path(),
        "check.json",
        &json!({
            "check": "external_urysohn",
            "xbar": body,
            "x0": {"dim": 2, "vertices": [[-1.0, 0.0], [1.0, 0.0]]},
        }),
    );
    let report = dir.path().join("report.json");
    let (code, _, err) = cbody(&["verify", "--spec", s(&check), "--tol", "1e-2", "--out", s(&report)]);
    assert_eq!(code, 0, "{err}");
    let r = read(&report);
    assert_eq!(r["verdict"], json!(true));
    assert_eq!(r["conditions"].as_array().unwrap().len(), 3);

    // The untouched obstacle hull is not optimal.
    let check = write(
        dir.path(),
        "bad.json",
        &json!({
            "check": "external_urysohn",
            "xbar": {"dim": 2, "vertices": [[-1.0, -0.5], [1.0, -0.5], [1.0, 0.5], [-1.0, 0.5]]},
            "x0": {"dim": 2, "vertices": [[-1.0, 0.0], [1.0, 0.0]]},
        }),
    );
    assert_eq!(cbody(&["verify", "--spec", s(&check)]).0, 4);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let run = |tag: &str| -> Vec<(String, Vec<u8>)> {
        let dir = tempfile::tempdir().unwrap();
        let spec = write(dir.path(), "lens.json", &lens_spec());
        let (o, v, m) = (
            dir.path().join("o.json"),
            dir.path().join("f.svg"),
            dir.path().join("m.json"),
        );
        let (code, _, err) = cbody(&[
            "urysohn",
            "--spec",
            s(&spec),
            "--out",
            s(&o),
            "--svg",
            s(&v),
            "--manifest",
            s(&m),
            "--grid",
            "360",
        ]);
        assert_eq!(code, 0, "{tag}: {err}");
        [o, v, m]
            .iter()
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    std::fs::read(p).unwrap(),
                )
            })
            .collect()
    };
    let (a, b) = (run("first"), run("second"));
    assert_eq!(a, b);
    let manifest: RunManifest = serde_json::from_slice(&a[2].1).unwrap();
    assert_eq!(manifest.command, "urysohn");
    assert_eq!(manifest.options["grid"], "360");
    assert_eq!(manifest.outputs.len(), 2);
}

#[test]
fn roundtrip_preserves_bodies_and_measures() {
    let dir = tempfile::tempdir().unwrap();
    let g = make_grid(2, 48).unwrap();
    let x = SupportVector::from_points(
        g,
        &[
            Vec3::new(0.3, -0.1, 0.0),
            Vec3::new(1.7, 0.2, 0.0),
            Vec3::new(0.1, 1.1, 0.0),
        ],
    )
    .unwrap();
    let body = BodyFile::from_support(&x).unwrap();
    let inp = write(dir.path(), "b.json", &serde_json::to_value(&body).unwrap());
    let out = dir.path().join("b2.json");
    assert_eq!(cbody(&["roundtrip", "--input", s(&inp), "--out", s(&out)]).0, 0);
    let back: BodyFile = serde_json::from_value(read(&out)).unwrap();
    assert_eq!(back, body);

    let inp = write(dir.path(), "m.json", &square_measure());
    assert_eq!(cbody(&["roundtrip", "--input", s(&inp), "--out", s(&out)]).0, 0);
    let back: MeasureFile = serde_json::from_value(read(&out)).unwrap();
    let orig: MeasureFile = serde_json::from_value(square_measure()).unwrap();
    assert_eq!(back.to_measure().unwrap(), orig.to_measure().unwrap());
}

#[test]
fn invalid_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = cbody(&["no-such-command"]);
    assert_eq!(code, 2);
    assert!(err.to_lowercase().contains("usage"), "{err}");
    let bad = write(
        dir.path(),
        "bad.json",
        &json!({"dim": 2, "atoms": [{"u": [1.0, 1.0], "w": 1.0}]}),
    );
    assert_eq!(cbody(&["roundtrip", "--input", s(&bad)]).0, 2);
    let unknown = write(dir.path(), "u.json", &json!({"problem": "soap_bubble"}));
    assert_eq!(cbody(&["urysohn", "--spec", s(&unknown)]).0, 2);
    let segment = write(
        dir.path(),
        "seg.json",
        &json!({"dim": 2, "vertices": [[-1.0, 0.0], [1.0, 0.0]]}),
    );
    let svg = dir.path().join("x.svg");
    assert_eq!(cbody(&["render", "--body", s(&segment), "--svg", s(&svg)]).0, 2);
}

#[test]
fn render_writes_obj_for_spatial_bodies() {
    let dir = tempfile::tempdir().unwrap();
    let cube: Vec<Vec<f64>> = (0..8)
        .map(|k| (0..3).map(|b| if k >> b & 1 == 1 { 1.0 } else { -1.0 }).collect())
        .collect();
    let body = write(dir.path(), "cube.json", &json!({"dim": 3, "vertices": cube}));
    let obj = dir.path().join("cube.obj");
    let (code, stdout, err) = cbody(&["render", "--body", s(&body), "--obj", s(&obj), "--grid", "2"]);
    assert_eq!(code, 0, "{err}");
    let r: Value = serde_json::from_str(&stdout).unwrap();
    assert!((r["volume"].as_f64().unwrap() - 8.0).abs() < 1e-9);
    let text = std::fs::read_to_string(&obj).unwrap();
    // 8 corners plus 6 facet centroids; each square fans into 4 triangles.
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 14);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 24);
}

#[test]
fn blaschke_sum_of_two_squares_doubles_the_area_measure() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "sq.json", &square_measure());
    let (code, stdout, err) = cbody(&["blaschke-sum", "--x", s(&m), "--y", s(&m)]);
    assert_eq!(code, 0, "{err}");
    let body: BodyFile = serde_json::from_str(&stdout).unwrap();
    let p = body.to_polytope().unwrap();
    // Edge lengths add: a square of side 4.
    assert!((p.volume() - 16.0).abs() < 1e-9, "{}", p.volume());
}

#[test]
fn leidenfrost_sweep_writes_stadium_and_spheroid_figures() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "lf.json",
        &json!({
            "problem": "leidenfrost", "area": 3.0, "lambdas": [[1.0, 0.5], [1.0, 2.0]], "grid3": {"resolution": 3},
        }),
    );
    let (svg, obj) = (dir.path().join("st.svg"), dir.path().join("sp.obj"));
    let (code, stdout, err) = cbody(&[
        "pareto",
        "--spec",
        s(&spec),
        "--svg",
        s(&svg),
        "--obj",
        s(&obj),
        "--grid",
        "360",
    ]);
    assert_eq!(code, 0, "{err}");
    let r: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(r.as_array().unwrap().len(), 2);
    for k in 0..2 {
        assert!(dir.path().join(format!("st-{k}.svg")).exists());
        assert!(dir.path().join(format!("sp-{k}.obj")).exists());
        assert!(r[k]["fit"]["residual"].as_f64().unwrap() < 1e-2);
    }
}
