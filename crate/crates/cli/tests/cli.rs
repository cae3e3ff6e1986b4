use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gruss_core::io::{map_from_str, map_to_string, matrix_from_str, matrix_to_string, MatrixDoc};
use gruss_core::Matrix;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn gruss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gruss")).args(args).output().unwrap()
}

fn gruss_with(args: &[&str], paths: &[&Path]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gruss"));
    cmd.args(args);
    for p in paths {
        cmd.arg(p);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gruss-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn example_command_text() {
    let o = gruss(&["paper-example"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("defect 6.000000000, bound 4.743416490, verdict VIOLATED"), "{text}");
    assert!(text.contains("radius a 3.162277660  radius b 1.500000000"));
}

#[test]
fn example_command_is_deterministic() {
    let a = gruss(&["paper-example", "--machine"]);
    let b = gruss(&["paper-example", "--machine"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn radius_of_fixture() {
    let o = gruss_with(&["radius"], &[&fixture("a2.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("center 2.000000000+0.000000000i, radius 3.16227766017"), "{}", stdout(&o));
}

#[test]
fn defect_of_fixtures() {
    let o = gruss_with(
        &["defect", "--machine"],
        &[&fixture("transpose3.json"), &fixture("a3.json"), &fixture("b3.json")],
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["defect"].as_f64().unwrap() - 6.0).abs() < 1e-9);
    assert!((v["radius_b"]["radius"].as_f64().unwrap() - 1.5).abs() < 1e-9);
    assert_eq!(v["holds"], serde_json::Value::Bool(false));
}

#[test]
fn falsify_transpose() {
    let o = gruss_with(&["falsify"], &[&fixture("transpose2.json"), Path::new("2")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value -1.000000000"), "{}", stdout(&o));
    let o = gruss_with(&["falsify"], &[&fixture("reduction3.json"), Path::new("2")]);
    assert!(stdout(&o).contains("no witness"));
}

#[test]
fn dilate_rejects_non_cp() {
    let o = gruss_with(&["dilate"], &[&fixture("transpose2.json")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("Choi matrix not PSD"));
}

#[test]
fn dilate_cp_fixture() {
    let o = gruss_with(&["dilate", "--machine"], &[&fixture("cp3.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["env_dim"].as_u64(), Some(2));
    assert!(v["isometry_defect"].as_f64().unwrap() < 1e-10);
}

#[test]
fn decompose_round_trips() {
    let o = gruss_with(&["decompose", "--machine"], &[&fixture("a2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let scale = v["scale"].as_f64().unwrap();
    let mut sum = Matrix::zeros(2, 2);
    for (w, u) in v["weights"].as_array().unwrap().iter().zip(v["unitaries"].as_array().unwrap()) {
        let doc: MatrixDoc = serde_json::from_value(u.clone()).unwrap();
        let u = Matrix::try_from(&doc).unwrap();
        sum += u * gruss_core::matcore::c(w.as_f64().unwrap() * scale, 0.0);
    }
    let a = gruss_core::io::read_matrix(&fixture("a2.json")).unwrap();
    assert!(gruss_core::matcore::max_abs_diff(&sum, &a) < 1e-10);
}

#[test]
fn parse_errors_exit_2() {
    let bad = scratch("bad.json", "{\"rows\": 2, \"cols\": 2, \"data\": [[1, 0]]}");
    let o = gruss_with(&["radius"], &[&bad]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let garbage = scratch("garbage.json", "not json");
    assert_eq!(gruss_with(&["radius"], &[&garbage]).status.code(), Some(2));
    assert_eq!(gruss(&["radius", "/nonexistent/a.json"]).status.code(), Some(2));
    assert_eq!(gruss(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(gruss(&["suite", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(gruss(&["paper-example", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn dimension_mismatch_exits_3() {
    let o = gruss_with(&["defect"], &[&fixture("transpose2.json"), &fixture("a3.json"), &fixture("b3.json")]);
    assert_eq!(o.status.code(), Some(3));
    let nonsquare = scratch("rect.json", &matrix_to_string(&Matrix::zeros(2, 3)));
    assert_eq!(gruss_with(&["radius"], &[&nonsquare]).status.code(), Some(3));
}

#[test]
fn out_flag_writes_file_and_round_trips() {
    let dir = std::env::temp_dir().join(format!("gruss-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("radius.json");
    let o = gruss_with(&["radius", "--machine", "--out"], &[&out, &fixture("a2.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&out).unwrap();
    assert!(written.contains("\"radius\":3.16227766016837"));

    for name in ["a2.json", "b2.json", "a3.json", "b3.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let m = matrix_from_str(&text).unwrap();
        assert_eq!(matrix_from_str(&matrix_to_string(&m)).unwrap(), m);
    }
    for name in ["transpose2.json", "transpose3.json", "reduction3.json", "cp3.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let phi = map_from_str(&text).unwrap();
        assert_eq!(map_from_str(&map_to_string(&phi)).unwrap().choi(), phi.choi());
    }
}

#[test]
fn small_suite_passes_and_is_deterministic() {
    let a = gruss(&["suite", "--trials", "10", "--machine"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let b = gruss(&["suite", "--trials", "10", "--machine"]);
    assert_eq!(a.stdout, b.stdout);
    let seven = gruss(&["suite", "--trials", "10", "--seed", "7"]);
    assert_eq!(seven.status.code(), Some(0));
    assert!(!stdout(&seven).contains("FAIL"));
}
