use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quivrep"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("quivrep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn knit_e6_has_36_nodes() {
    let o = run(&["knit", "--diagram", "E6", "--dot"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), 36);
    assert_eq!(dot, stdout(&run(&["knit", "--diagram", "E6", "--dot"])), "DOT output is deterministic");
}

#[test]
fn coxeter_reports_factorization() {
    let o = run(&["coxeter", "--diagram", "K2"]);
    let s = stdout(&o);
    assert!(s.contains("[-1, 2]") && s.contains("[-2, 3]"), "{s}");
    assert!(s.trim_end().ends_with("factorization: OK"));
}

#[test]
fn quiver_file_round_trips() {
    let path = scratch("e6.json");
    let o = run(&["extend", "--diagram", "E6"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    std::fs::write(&path, serde_json::to_string(&v["quiver"]).unwrap()).unwrap();
    let o = run(&["radical", path.to_str().unwrap()]);
    assert!(o.status.success());
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["radical"], serde_json::json!([3, 2, 1, 2, 1, 2, 1]));
}

#[test]
fn schema_errors_exit_1_with_location() {
    let path = scratch("broken.json");
    std::fs::write(&path, "{\"vertices\": [\"1\",\n \"2\"], \"arrows\": [}").unwrap();
    let o = run(&["cartan", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");

    std::fs::write(&path, r#"{"vertices":["1"],"arrows":[{"id":"a","src":"1","tgt":"9","degree":0}]}"#).unwrap();
    let o = run(&["cartan", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("\"9\""));
}

#[test]
fn math_errors_exit_2() {
    // The Kronecker quiver is not Dynkin.
    let o = run(&["roots", "--diagram", "K2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn series_verify_and_out_dir() {
    let dir = scratch("out");
    std::fs::create_dir_all(&dir).unwrap();
    let o = bin()
        .args(["--out", "p3.txt", "series", "--family", "P3", "--t", "5", "--verify"])
        .env("QUIVREP_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.join("p3.txt")).unwrap();
    assert!(text.starts_with("dims: [144,55]\nexceptional: yes\n"), "{text}");
}

#[test]
fn series_spec_json_builds_expanded_module() {
    let spec = r#"{"family":"M1_221","l":4,"i":2,"j":2,"side":"Y","diagram":"D5"}"#;
    let o = run(&["series", "--spec", spec, "--verify"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("exceptional: yes"));
}

#[test]
fn exact_entries_round_trip_through_homext() {
    let qpath = scratch("k2.json");
    let mpath = scratch("m.json");
    let npath = scratch("n.json");
    std::fs::write(&qpath, r#"{"vertices":["1","2"],"arrows":[{"id":"a","src":"2","tgt":"1","degree":0},{"id":"b","src":"2","tgt":"1","degree":0}]}"#).unwrap();
    std::fs::write(&mpath, r#"{"dims":{"1":1,"2":1},"mats":{"a":[["1/2"]],"b":[["-3"]]}}"#).unwrap();
    std::fs::write(&npath, r#"{"dims":{"1":1,"2":1},"mats":{"a":[["1"]],"b":[["-6"]]}}"#).unwrap();
    let o = run(&["homext", qpath.to_str().unwrap(), mpath.to_str().unwrap(), npath.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // Same point of the projective line, so the modules are isomorphic.
    assert_eq!((v["hom"].as_u64(), v["ext"].as_u64()), (Some(1), Some(1)));
    assert_eq!(v["euler_check"], Value::Bool(true));
}

#[test]
fn reduced_ditalgebras_are_healthy() {
    for d in ["D4", "E6", "A4:rll"] {
        for side in ["x", "y"] {
            let o = run(&["reduced-dit", "--diagram", d, "--side", side]);
            let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
            assert_eq!(v["d_squared"], "OK", "{d} {side}");
            assert_eq!(v["triangular"], "OK", "{d} {side}");
        }
    }
}

#[test]
fn period_table_values() {
    for (d, p, m) in [("E6", 6, 5), ("D5", 6, 4), ("A4:rll", 6, 1)] {
        let v: Value = serde_json::from_str(&stdout(&run(&["period", "--diagram", d]))).unwrap();
        assert_eq!((v["period"].as_i64(), v["multiplicity"].as_i64()), (Some(p), Some(m)), "{d}");
    }
}
