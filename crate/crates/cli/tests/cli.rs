use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-bott"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_table() {
    let o = run(&["compute", "--k", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "a_4 = 13\n");
}

#[test]
fn compute_json() {
    let o = run(&["compute", "--k", "2", "--emit", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["k"], 2);
    assert_eq!(v["a_k"], "0");
    assert_eq!(v["components"], 9);
    assert_eq!(v["gamma"][0], 1);
    assert!(stdout(&o).starts_with(r#"{"k":2,"a_k":"0","components":9,"gamma":[1,"#));
}

#[test]
fn explicit_gammas_agree() {
    let a = run(&["compute", "--k", "4", "--gamma", "1,7"]);
    let b = run(&["compute", "--k", "4", "--gamma", "2,13"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn k1_warns() {
    let o = run(&["compute", "--k", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "a_1 = 1\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn enumerate_json_lines() {
    for (k, lines, euler) in [(1, 1, 1), (2, 9, 9)] {
        let o = run(&["enumerate", "--k", &k.to_string(), "--emit", "json"]);
        assert!(o.status.success());
        let out = stdout(&o);
        let all: Vec<&str> = out.lines().collect();
        assert_eq!(all.len(), lines + 1);
        let summary: Value = serde_json::from_str(all[lines]).unwrap();
        assert_eq!(summary["summary"]["euler_characteristic"], euler);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["enumerate", "--k", "0"]).status.code(), Some(2));
    assert_eq!(run(&["compute"]).status.code(), Some(2));
    assert_eq!(
        run(&["compute", "--k", "3", "--gamma", "0,0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["compute", "--k", "3", "--jobs", "0"]).status.code(),
        Some(2)
    );
    // A non-generic subgroup is an invariant breach, not bad input.
    let o = run(&["compute", "--k", "4", "--gamma", "1,1"]);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(
        run(&["compute", "--k", "3", "--reflect"]).status.code(),
        Some(3)
    );
}

#[test]
fn verify_passes() {
    let o = run(&["verify", "--k", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let o = run(&["verify", "--k", "2", "--seed", "5,-3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS seed independence"));
}

#[test]
fn reflected_verify_fails() {
    let o = run(&["verify", "--k", "2", "--reflect"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn output_independent_of_jobs() {
    let a = run(&["compute", "--k", "5", "--jobs", "1", "--dump-contributions"]);
    let b = run(&["compute", "--k", "5", "--jobs", "3", "--dump-contributions"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert_eq!(out.lines().count(), 712);
    assert!(out.ends_with("a_5 = 729\n"));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k4.jsonl");
    let o = run(&["enumerate", "--k", "4", "--emit", "json"]);
    std::fs::write(&file, &o.stdout).unwrap();
    let o = run(&["compute", "--from-cache", file.to_str().unwrap()]);
    assert_eq!(stdout(&o), "a_4 = 13\n");
    assert_eq!(
        run(&[
            "compute",
            "--k",
            "5",
            "--from-cache",
            file.to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );

    let cache = dir.path().join("cache");
    let args = ["compute", "--k", "4", "--cache", cache.to_str().unwrap()];
    assert_eq!(stdout(&run(&args)), "a_4 = 13\n");
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    assert_eq!(stdout(&run(&args)), "a_4 = 13\n");
}

#[test]
fn dump_ext_shape() {
    let o = run(&["dump-ext", "--k", "2", "--emit", "json"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 9);
    for line in out.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        let total: i64 = v["ext"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|e| {
                e["roots"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|r| r["mult"].as_i64().unwrap())
            })
            .sum();
        assert_eq!(total, 4);
    }
}
