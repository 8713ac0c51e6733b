use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use strongconvex::{Body, Vector};
use strongconvex_cli::{emit_scene, parse_scene};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_strongconvex"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const SQUARE: &str = r#"{
  "dimension": 2,
  "bodies": { "K": { "type": "box", "lo": [0, 0], "hi": [2, 2] } },
  "points": { "X": [[0, 0], [1, 1]], "p": [[1.5, 0.5]] }
}"#;

#[test]
fn member_outside_exits_3_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(dir.path(), "s.json", SQUARE);
    let out = bin().args(["member", "--scene", &scene, "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let r = json_of(&out);
    assert_eq!(r["member"], false);
    assert_eq!(r["witness_t"], serde_json::json!([-1.0, 0.0]));
    assert!((r["margin"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(r["revalidated"], true);

    let inside = bin().args(["member", "--scene", &scene, "--point", "0.5,0.5"]).output().unwrap();
    assert_eq!(inside.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&inside.stdout).contains("member: true"));
}

#[test]
fn cara_on_a_point_of_x_needs_one_point() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(dir.path(), "s.json", SQUARE);
    let out = bin().args(["cara", "--scene", &scene, "--point", "1,1", "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["size"], 1);
}

#[test]
fn input_errors_exit_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        "{\n\"dimension\": 2,\n\"bodies\": {\n\"K\": {\"type\": \"polytope\", \"normals\": [[1,0],[0,0],[-1,0],[0,-1],[0,1]], \"offsets\": [1,1,1,1,1]}}}",
    );
    let out = bin().args(["hull", "--scene", &bad]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4") && err.contains("degenerate normal"), "{err}");

    let mismatch = write(dir.path(), "mm.json", "{\"dimension\": 2,\n\"points\": {\"X\": [[1, 2, 3]]}}");
    let out = bin().args(["hull", "--scene", &mismatch]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension mismatch"));

    let scene = write(dir.path(), "s.json", SQUARE);
    let out = bin().args(["member", "--scene", &scene, "--point", "1,2,3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hull_undefined_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(
        dir.path(),
        "far.json",
        r#"{"dimension": 2, "bodies": {"K": {"type": "box", "lo": [0, 0], "hi": [1, 1]}},
            "points": {"X": [[0, 0], [5, 5]], "p": [[1, 1]]}}"#,
    );
    for cmd in ["hull", "member"] {
        let out = bin().args([cmd, "--scene", &scene]).output().unwrap();
        assert_eq!(out.status.code(), Some(4), "{cmd}");
    }
}

#[test]
fn cone_witness_scene_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cone.json");
    let out = bin()
        .args(["witness", "cone", "--m", "4", "--apex-height", "1", "--json", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json_of(&out);
    let p = r["test_point"].as_array().unwrap();
    assert!((p[2].as_f64().unwrap() - 0.418139).abs() < 1e-6);
    assert_eq!(r["expected_min_subset"], 4);

    let scene = parse_scene(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(scene.dimension, 3);
    assert!(matches!(scene.body("K"), Some(Body::Cone(_))));
    let member = bin().arg("member").arg("--scene").arg(&path).output().unwrap();
    assert_eq!(member.status.code(), Some(0));
}

#[test]
fn emitted_scenes_parse_to_the_same_supports() {
    let text = r#"{
      "dimension": 3,
      "bodies": {
        "P": {"type": "product", "factors": [{"type": "polygon", "vertices": [[0, 0], [1, 0.3], [0.2, 1.7]]}, {"type": "box", "lo": [-1], "hi": [0.1]}]},
        "B": {"type": "ball", "center": [0.1, 0.2, 0.3], "radius": 0.7},
        "C": {"type": "cone", "base_center": [0, 0, 0], "base_radius": 1.3, "apex_height": 0.9}
      },
      "points": {"X": [[0.1, 0.2, 0.3]]},
      "tolerances": {"eps_margin": 1e-5}
    }"#;
    let a = parse_scene(text).unwrap();
    let b = parse_scene(&emit_scene(&a).unwrap()).unwrap();
    assert_eq!(a.tolerances, b.tolerances);
    for name in ["P", "B", "C"] {
        for i in 0..50 {
            let t = i as f64 * 0.37;
            let u = Vector::from_vec(vec![t.cos(), t.sin(), (1.3 * t).cos()]);
            let (ha, hb) = (a.body(name).unwrap().support(&u).unwrap(), b.body(name).unwrap().support(&u).unwrap());
            assert!((ha - hb).abs() <= 1e-12, "{name}: {ha} vs {hb}");
        }
    }
}

#[test]
fn hull_svg_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(dir.path(), "s.json", SQUARE);
    let mut outputs = Vec::new();
    for name in ["a.svg", "b.svg"] {
        let path = dir.path().join(name);
        let out = bin().args(["hull", "--scene", &scene, "--svg"]).arg(&path).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        outputs.push(std::fs::read_to_string(path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(outputs[0].starts_with("<svg") && outputs[0].contains("class=\"hull\""));
}

#[test]
fn summand_and_criterion_reports() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(
        dir.path(),
        "t.json",
        r#"{"dimension": 2, "bodies": {
            "A": {"type": "polygon", "vertices": [[0, 0], [1, 0]]},
            "B": {"type": "polygon", "vertices": [[0, 0], [3, 0], [0, 3]]}}}"#,
    );
    let out = bin().args(["summand", "--scene", &scene, "--json"]).output().unwrap();
    let r = json_of(&out);
    assert_eq!(r["verdict"], false);
    assert!(r["witness_gap"].as_f64().unwrap() > 0.5);
    let out = bin().args(["criterion2d", "--scene", &scene, "--grid", "20", "--json"]).output().unwrap();
    let r = json_of(&out);
    assert_eq!(r["hypothesis_ok"], false);
    assert_eq!(r["first_failure"]["components"], 2);
}

#[test]
fn gen_test_on_square_passes() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write(dir.path(), "s.json", SQUARE);
    let out = bin().args(["gen-test", "--scene", &scene, "--samples", "40", "--seed", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("result: pass"));
}

#[test]
fn lower_bound_and_product_witnesses() {
    let out = bin().args(["witness", "lower-bound", "--dim", "3", "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["expected_min_subset"], 3);
    assert!(r["scale_radius"].as_f64().unwrap() >= 3.0 + 1.0 / 12.0);
    let out = bin().args(["witness", "product", "--left", "segment", "--right", "square", "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["scene"]["dimension"], 3);
}
