use std::process::{Command, Output};

fn flatcliff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatcliff")).args(args).env_remove("FLATCLIFF_BUDGET").output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    flatcliff(args).status.code().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["check", "--algebra", "flat(C3)", "--schema", "srn", "--n", "3"]), 0);
    assert_eq!(code(&["check", "--algebra", "flat(C3)", "--schema", "mn", "--n", "2"]), 1);
    assert_eq!(code(&["check", "--algebra", "flat(C3)", "--schema", "srn", "--n", "3", "--budget", "1"]), 2);
    assert_eq!(code(&["check", "--algebra", "flat(C3)"]), 3);
    assert_eq!(code(&["no-such-command"]), 3);
    assert_eq!(code(&["enumerate", "--order", "5"]), 3);
}

#[test]
fn budget_from_environment() {
    let args = ["check", "--algebra", "flat(C3)", "--schema", "srn", "--n", "3"];
    let out = Command::new(env!("CARGO_BIN_EXE_flatcliff")).args(args).env("FLATCLIFF_BUDGET", "1").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // the flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_flatcliff"))
        .args(args)
        .args(["--budget", "1000"])
        .env("FLATCLIFF_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(code(&["ps-check", "--json", a.to_str().unwrap()]), 0);
    assert_eq!(code(&["ps-check", "--json", b.to_str().unwrap(), "--jobs", "1"]), 0);
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let doc: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(doc["format"], "flatcliff-report");
    assert_eq!(doc["version"], 1);
    assert_eq!(doc["verdict"], "pass");
    assert!(doc.get("elapsed_ms").is_none());
    let claims: Vec<&str> = doc["reports"].as_array().unwrap().iter().map(|r| r["claim"].as_str().unwrap()).collect();
    let mut sorted = claims.clone();
    sorted.sort();
    assert_eq!(claims, sorted);
}

#[test]
fn enumerate_writes_census() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("census.json");
    let out = flatcliff(&["enumerate", "--order", "3", "--filter", "Mn", "--n", "2", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(doc["metadata"]["count"], 3);
    assert_eq!(doc["metadata"]["provenance"].as_str().unwrap().len(), 64);
    assert_eq!(doc["algebras"].as_array().unwrap().len(), 3);
}

#[test]
fn algebra_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q8.json");
    let out = flatcliff(&["enumerate", "--order", "2", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let census: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let member = dir.path().join("member.json");
    std::fs::write(&member, census["algebras"][0].to_string()).unwrap();
    assert_eq!(code(&["axioms", "--algebra", member.to_str().unwrap()]), 0);
}

#[test]
fn pentagon_four_p_has_two_assumed_meets() {
    let out = flatcliff(&["pentagon", "--kind", "four-p", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("[ASSUMED]").count(), 2);
    assert!(text.contains("non-modularity confirmed modulo assumed meets"));
}
