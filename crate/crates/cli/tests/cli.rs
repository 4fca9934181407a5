use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sturmtree"))
        .args(args)
        .env_remove("STURMTREE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn census_of_sturmian_ray() {
    let o = run(&["census", "--example", "ex31-sturmian", "-n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Vec<usize>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split('\t').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 9);
    for r in rows {
        assert_eq!(r[1], r[0] + 2);
    }
}

#[test]
fn census_json_and_oracle() {
    let o = run(&["census", "--example", "constant", "-n", "5", "--oracle", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.to_string().contains("\"b\":1"));
    assert!(stderr(&o).contains("oracle agrees"));
}

#[test]
fn census_is_deterministic() {
    let a = run(&["census", "--example", "fib-ab", "-n", "6", "--format", "json"]);
    let b = run(&["--jobs", "1", "census", "--example", "fib-ab", "-n", "6", "--format", "json"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn regularity_error_exits_2() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{"k":3,"kind":"finite","alphabet":["a"],"vertices":[{{"color":"a","self":2}}],"edges":[]}}"#
    )
    .unwrap();
    let o = run(&["census", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("regularity error at position 0"), "{}", stderr(&o));
}

#[test]
fn file_input_round_trip() {
    let json = stdout(&run(&["export", "--example", "ex31-ray2", "--format", "json"]));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, json).unwrap();
    let from_file = run(&["census", "--input", path.to_str().unwrap(), "-n", "6"]);
    let from_catalog = run(&["census", "--example", "ex31-ray2", "-n", "6"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(stdout(&from_file), stdout(&from_catalog));
}

#[test]
fn cap_exceeded_exits_3() {
    let o = run(&["--cap", "100", "census", "--example", "ex31-sturmian", "-n", "8"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_sturmtree"))
        .args(["census", "--example", "constant", "-n", "6"])
        .env("STURMTREE_CAP", "50")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unknown_example_exits_2() {
    assert_eq!(run(&["census", "--example", "nope"]).status.code(), Some(2));
}

#[test]
fn classify_reports() {
    let o = stdout(&run(&["classify", "--example", "sec2-bounded-type", "-n", "10"]));
    assert!(o.contains("# sturmian\ttrue"));
    assert!(o.lines().any(|l| l.starts_with("0\tb\t-1\tfalse")), "{o}");
    let o = stdout(&run(&["classify", "--example", "ep-typeA", "-n", "8"]));
    assert!(o.contains("EventuallyPeriodicTypeA"));
    let o = stdout(&run(&["classify", "--example", "alternating", "-n", "6", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&o).unwrap();
    assert_eq!(v["plateau"], 0);
    assert_eq!(v["reconstructed"]["vertices"].as_array().unwrap().len(), 2);
}

#[test]
fn export_formats() {
    let o = stdout(&run(&["export", "--example", "ex31-sturmian"]));
    assert!(o.contains("v0 -- v1 [label=\"3 2\"]"));
    let o = stdout(&run(&["export", "--example", "constant"]));
    assert!(o.contains("v0 -- v0 [style=dotted, label=\"3\"]"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ball.dot");
    let r = run(&["export", "--example", "ex31-sturmian", "--ball", "0", "-n", "1", "-o", path.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let dot = std::fs::read_to_string(path).unwrap();
    assert_eq!(dot.matches("@").count(), 4);
}

#[test]
fn verify_subset_without_oracle() {
    let o = run(&["verify", "--no-oracle", "--only", "1,2,4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("criterion  4 SKIPPED"));
    assert_eq!(out.matches("PASS").count(), 2);
}

#[test]
fn verify_with_corruption_fails() {
    let o = run(&["verify", "--no-oracle", "--corrupt", "ex31-sturmian", "--only", "1,2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("criterion  2 FAIL"), "{}", stdout(&o));
    assert!(stderr(&o).contains("failed criteria: 2"));
}

#[test]
fn word_table() {
    let o = stdout(&run(&["word", "--fibonacci", "10000", "-n", "5"]));
    let last = o.lines().last().unwrap();
    assert_eq!(last, "5\t6\t7");
}
