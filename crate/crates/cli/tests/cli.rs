use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lombardi_core::files::{read_json, write_json, ArrangementFile, DrawingFile, GraphFile, LineRecord};
use tempfile::TempDir;

fn lombardi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lombardi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_two_lines(dir: &TempDir) -> PathBuf {
    let p = dir.path().join("lines2.json");
    write_json(&p, &vec![LineRecord { a: 1.0, b: 0.0 }, LineRecord { a: -1.0, b: 1.0 }]).unwrap();
    p
}

#[test]
fn describe_two_lines() {
    let dir = TempDir::new().unwrap();
    let lines = write_two_lines(&dir);
    let out = dir.path().join("arr.json");
    let o = lombardi(&["describe", "--lines", path_str(&lines), "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let arr: ArrangementFile = read_json(&out).unwrap();
    assert_eq!(arr.n, 2);
    assert_eq!(arr.lists, vec![vec![2], vec![1]]);
}

#[test]
fn reduce_full_counts() {
    let dir = TempDir::new().unwrap();
    let arr = dir.path().join("arr2.json");
    write_json(
        &arr,
        &ArrangementFile {
            n: 2,
            lists: vec![vec![2], vec![1]],
        },
    )
    .unwrap();
    let g = dir.path().join("g.json");
    let o = lombardi(&["reduce", "--full", "--in", path_str(&arr), "--out", path_str(&g)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let graph: GraphFile = read_json(&g).unwrap();
    assert_eq!(graph.vertices.len(), 32);
    assert_eq!(graph.edges.len(), 44);

    let o = lombardi(&["reduce", "--in", path_str(&arr), "--out", path_str(&g)]);
    assert!(o.status.success());
    let graph: GraphFile = read_json(&g).unwrap();
    assert_eq!(graph.vertices.len(), 8);
    assert_eq!(graph.edges.len(), 16);
}

#[test]
fn roundtrip_exits_zero() {
    let dir = TempDir::new().unwrap();
    let lines = write_two_lines(&dir);
    let o = lombardi(&["roundtrip", "--lines", path_str(&lines), "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn tampered_drawing_fails_validation() {
    let dir = TempDir::new().unwrap();
    let lines = write_two_lines(&dir);
    let g = dir.path().join("g.json");
    let d = dir.path().join("d.json");
    let o = lombardi(&[
        "draw",
        "--full",
        "--lines",
        path_str(&lines),
        "--graph-out",
        path_str(&g),
        "--out",
        path_str(&d),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = lombardi(&["validate", "--graph", path_str(&g), "--drawing", path_str(&d)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let mut file: DrawingFile = read_json(&d).unwrap();
    file.vertices.get_mut(&0).unwrap()[0] += 1e-3;
    let t = dir.path().join("tampered.json");
    write_json(&t, &file).unwrap();
    let o = lombardi(&["validate", "--graph", path_str(&g), "--drawing", path_str(&t)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("angular-resolution"));
}

#[test]
fn extract_and_render() {
    let dir = TempDir::new().unwrap();
    let lines = write_two_lines(&dir);
    let g = dir.path().join("g.json");
    let d = dir.path().join("d.json");
    let a = dir.path().join("a.json");
    let s = dir.path().join("d.svg");
    let draw = [
        "draw",
        "--full",
        "--lines",
        path_str(&lines),
        "--graph-out",
        path_str(&g),
        "--out",
        path_str(&d),
    ];
    assert!(lombardi(&draw).status.success());
    let o = lombardi(&["extract", "--graph", path_str(&g), "--drawing", path_str(&d), "--out", path_str(&a)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let arr: ArrangementFile = read_json(&a).unwrap();
    assert_eq!(arr.lists, vec![vec![2], vec![1]]);

    let o = lombardi(&["render", "--drawing", path_str(&d), "--graph", path_str(&g), "--out", path_str(&s)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(&s).unwrap();
    assert_eq!(svg.matches("<path").count(), 44);
    assert_eq!(svg.matches("<circle").count(), 32);
}

#[test]
fn draw_from_arrangement_alone() {
    let dir = TempDir::new().unwrap();
    let arr = dir.path().join("arr.json");
    write_json(
        &arr,
        &ArrangementFile {
            n: 3,
            lists: vec![vec![2, 3], vec![1, 3], vec![1, 2]],
        },
    )
    .unwrap();
    let o = lombardi(&["draw", "--arrangement", path_str(&arr)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let file: DrawingFile = lombardi_core::files::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(file.vertices.len(), 18);
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{not json").unwrap();
    assert_eq!(lombardi(&["describe", "--lines", path_str(&p)]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(lombardi(&["describe", "--lines", path_str(&missing)]).status.code(), Some(2));
    assert_eq!(lombardi(&["describe"]).status.code(), Some(2));
}
