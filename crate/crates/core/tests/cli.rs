use std::process::{Command, Output};

fn morita(args: &[&str], cache: Option<&std::path::Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_morita"));
    cmd.args(args).env_remove("MORITA_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("MORITA_CACHE_DIR", dir);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(morita(&["scopes-list", "2", "3"], None).status.code(), Some(0));
    assert_eq!(morita(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(morita(&["count", "3", "2"], None).status.code(), Some(1));
    assert_eq!(morita(&["count", "3", "2", "--method", "M0"], None).status.code(), Some(1));
    assert_eq!(morita(&["decomp", "2", "2", "()"], None).status.code(), Some(1));
    assert_eq!(morita(&["m-matrix", "3", "1", "(3)"], None).status.code(), Some(1));
    assert_eq!(morita(&["scopes-list", "2", "3", "--jobs", "0"], None).status.code(), Some(1));
    assert_eq!(morita(&["--help"], None).status.code(), Some(0));
}

#[test]
fn scopes_listing() {
    let o = morita(&["scopes-list", "2", "3"], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reps: Vec<&str> = v["classes"].as_array().unwrap().iter().map(|c| c["representative"].as_str().unwrap()).collect();
    assert_eq!(reps, vec!["()", "(1)", "(2,1)"]);
    assert_eq!(v["upper_bound"], 3);
}

#[test]
fn decomp_table() {
    let o = morita(&["decomp", "3", "1", "()", "--format", "table"], None);
    assert_eq!(stdout(&o), "p=3 w=1 core=()\n    (3) 1.\n  (2,1) 11\n(1,1,1) .1\nrows{1,1,2}|cols{2,2}\n");
}

#[test]
fn count_and_golden() {
    let dir = tempfile::tempdir().unwrap();
    let o = morita(&["count", "3", "3", "--method", "M", "--jobs", "1"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["lower_bound"].as_u64(), v["upper_bound"].as_u64(), v["value"].as_u64()), (Some(8), Some(8), Some(8)));

    std::fs::write(dir.path().join("count_p3_w3_M.json"), stdout(&o)).unwrap();
    let g = dir.path().to_str().unwrap();
    let again = morita(&["count", "3", "3", "--method", "M", "--jobs", "2", "--golden", g], None);
    assert_eq!(again.status.code(), Some(0));
    std::fs::write(dir.path().join("count_p3_w3_M.json"), stdout(&o).replace("\"w\": 3", "\"w\": 4")).unwrap();
    assert_eq!(morita(&["count", "3", "3", "--method", "M", "--golden", g], None).status.code(), Some(2));
}

#[test]
fn cache_dir_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let first = morita(&["m-matrix", "3", "2", "()"], Some(dir.path()));
    assert_eq!(first.status.code(), Some(0));
    let cached = dir.path().join("x_p3_w2.v1.txt");
    assert!(cached.exists());
    let second = morita(&["m-matrix", "3", "2", "()"], Some(dir.path()));
    assert_eq!(stdout(&first), stdout(&second));

    std::fs::write(&cached, "MORITA-XMATRIX\nversion 99\n").unwrap();
    let third = morita(&["m-matrix", "3", "2", "()"], Some(dir.path()));
    assert_eq!(third.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&third));
}

#[test]
fn eigencheck_and_conjectures() {
    let o = morita(&["eigencheck", "8"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["scale_exp"], 12);
    assert_eq!(v["roots"][7], "175");

    let o = morita(&["conjectures", "--p-max", "3", "--w-max", "3", "--format", "table"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.ends_with("PASS")).count(), 6, "{text}");
}

#[test]
fn oracle_flag() {
    let o = morita(&["m-matrix", "2", "2", "(1)", "--oracle"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["oracle_agrees"], true);
}
