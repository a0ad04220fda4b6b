use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

fn torsyz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsyz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_fixtures_report_expected_orders() {
    let cases = [
        ("fan", "fans/p1.fan", 1),
        ("fan", "fans/punctured_square.fan", 1),
        ("fan", "fans/punctured_cube_3.fan", 2),
        ("fan", "fans/c2_minus_origin.fan", 0),
        ("facestruct", "facestructs/mutant.fs", 1),
        ("facestruct", "facestructs/cube3.fs", 3),
        ("facestruct", "facestructs/no_vertex.fs", 0),
        ("facestruct", "facestructs/annulus.fs", 0),
        ("complex", "complexes/two_edges.cx", 0),
    ];
    for (kind, file, order) in cases {
        let o = torsyz(&["analyze", kind, path(&fixture(file)), "--oracle"]);
        assert_eq!(o.status.code(), Some(0), "{file}: {}", stderr(&o));
        let text = stdout(&o);
        assert!(
            text.contains(&format!("syzygy order: {order}\n")),
            "{file}:\n{text}"
        );
        assert!(text.contains("agreement: true"), "{file}:\n{text}");
    }
}

#[test]
fn json_report_parses() {
    let o = torsyz(&[
        "analyze",
        "gkm",
        path(&fixture("gkm/hexagon.gkm")),
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kernel"]["4"], 18);
    assert_eq!(v["agreement"], true);
}

#[test]
fn timing_goes_to_stderr() {
    let o = torsyz(&["analyze", "fan", path(&fixture("fans/p1.fan"))]);
    assert!(stderr(&o).contains("elapsed:"));
    assert!(!stdout(&o).contains("elapsed"));
}

#[test]
fn invalid_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fan");
    fs::write(&bad, "rank 2\nray 0: 1 0\nray 1: 0 x\n").unwrap();
    let o = torsyz(&["analyze", "fan", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = torsyz(&["analyze", "fan", path(&dir.path().join("missing.fan"))]);
    assert_eq!(o.status.code(), Some(1));

    let o = torsyz(&["analyze", "nonsense", "x"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn crosscheck_names_unreadable_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(fixture("fans/p1.fan"), dir.path().join("a.fan")).unwrap();
    fs::write(dir.path().join("b.fan"), "rank 1\nray 0: 1\ncone: 0 3\n").unwrap();
    let o = torsyz(&["crosscheck", path(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("b.fan"), "{}", stderr(&o));
    assert!(stdout(&o).contains("a: rank 1"));
}

#[test]
fn crosscheck_of_empty_directory_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let o = torsyz(&["crosscheck", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 checked"));
}

#[test]
fn crosscheck_output_independent_of_jobs() {
    let dir = fixture("fans");
    let one = torsyz(&["crosscheck", path(&dir), "--jobs", "1"]);
    let four = torsyz(&["crosscheck", path(&dir), "--jobs", "4"]);
    assert_eq!(one.status.code(), Some(0), "{}", stderr(&one));
    assert_eq!(one.stdout, four.stdout);
    assert!(stdout(&one).contains("0 mismatches"));
}

#[test]
fn generated_fixtures_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str, &str, usize); 4] = [
        (&["punctured_cube", "--rank", "3"], "fan", "pc.fan", 2),
        (
            &["punctured_cube", "--rank", "3", "--form", "facestruct"],
            "facestruct",
            "pc.fs",
            2,
        ),
        (
            &["punctured_product", "--dims", "1,1,1", "--distance", "2"],
            "fan",
            "pp.fan",
            1,
        ),
        (&["simplex", "--rank", "2", "--json"], "fan", "s.json", 2),
    ];
    for (args, kind, name, order) in cases {
        let out = dir.path().join(name);
        let mut full = vec!["generate"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["--out", path(&out)]);
        let o = torsyz(&full);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let o = torsyz(&["analyze", kind, path(&out)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        assert!(
            stdout(&o).contains(&format!("syzygy order: {order}\n")),
            "{name}:\n{}",
            stdout(&o)
        );
    }
}

#[test]
fn generated_named_mutant_matches_fixture() {
    let o = torsyz(&["generate", "named", "--name", "mutant"]);
    assert_eq!(o.status.code(), Some(0));
    let fixture = fs::read_to_string(fixture("facestructs/mutant.fs")).unwrap();
    assert_eq!(stdout(&o), fixture);
}

#[test]
fn version_prints() {
    let o = torsyz(&["version"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("torsyz "));
}
