use std::process::{Command, Output};

fn spinmcg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinmcg")).args(args).env_remove("SPINMCG_CACHE_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn betti_csv() {
    let o = spinmcg(&["betti", "--max-degree", "10", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("degree,dimension"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0], "0,1");
}

#[test]
fn betti_json_rows() {
    let o = spinmcg(&["betti", "--max-degree", "4", "--format", "json"]);
    assert!(o.status.success());
    for (n, line) in stdout(&o).lines().enumerate() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["degree"], n);
        assert!(v["dim"].as_u64().unwrap() >= 1);
        assert!(v["factors"]["kernel"].is_u64());
    }
}

#[test]
fn witness_target() {
    let o = spinmcg(&["verify", "--target", "prop3.10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("p_(2,1) + p_3"));
}

#[test]
fn commutation_target_counts() {
    let o = spinmcg(&["verify", "--target", "lemma3.7", "--max-degree", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("PASS lemma3.7"));
    assert_eq!(text.lines().filter(|l| l.trim_start().chars().next().is_some_and(|c| c.is_ascii_digit())).count(), 5);
}

#[test]
fn all_targets_json() {
    let o = spinmcg(&["verify", "--format", "json", "--max-degree", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let targets: Vec<String> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["target"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(targets, ["lemma3.6", "lemma3.7", "prop3.8", "prop3.9", "prop3.10", "cor2.7", "thm2", "thm3", "thm4", "cor1.8"]);
}

#[test]
fn usage_errors() {
    assert_eq!(spinmcg(&["verify", "--target", "lemma9.9"]).status.code(), Some(2));
    assert_eq!(spinmcg(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(spinmcg(&["basis", "--space", "s2"]).status.code(), Some(2));
    assert_eq!(spinmcg(&["betti", "--max-degree", "99"]).status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let args = ["primitives", "--degree", "5"];
    assert_eq!(spinmcg(&args).stdout, spinmcg(&args).stdout);
}

#[test]
fn map_values() {
    let o = spinmcg(&["map-eval", "--map", "partial", "--index", "1", "--tail", "zero"]);
    assert_eq!(stdout(&o), "abar_1 -> Q^2 e_1 + e_3\n");
    let o = spinmcg(&["map-eval", "--map", "composite", "--index", "1", "--word", "6"]);
    assert_eq!(stdout(&o), "Q^6 b_1 -> (Q^3 a_1)^2\n");
    let o = spinmcg(&["map-eval", "--map", "transfer", "--index", "3"]);
    assert_eq!(stdout(&o), "a_3 -> 0\n");
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_spinmcg"))
            .args(["betti", "--max-degree", "6", "--format", "csv"])
            .env("SPINMCG_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(dir.path().join("betti-primitive-6.json").exists());
    assert_eq!(first.stdout, run().stdout);
    assert_eq!(first.stdout, spinmcg(&["betti", "--max-degree", "6", "--format", "csv"]).stdout);
}

#[test]
fn loop_poincare() {
    let o = spinmcg(&["poincare", "--loops", "1", "--max-degree", "4", "--format", "csv"]);
    assert_eq!(stdout(&o), "degree,dimension\n0,1\n1,2\n2,5\n3,11\n4,21\n");
}
