use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ranklab(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ranklab"))
        .args(args)
        .env("RANKLAB_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

#[test]
fn invariants() {
    let dir = tempfile::tempdir().unwrap();
    let o = ranklab(dir.path(), &["invariants", "--p", "5", "--l", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!((v["m"].as_u64(), v["a"].as_u64()), (Some(1), Some(2)));
    assert!(v.get("c").is_none());
    let v = json(&ranklab(
        dir.path(),
        &["invariants", "--p", "3", "--l", "2"],
    ));
    assert_eq!(
        (v["m"].as_u64(), v["a"].as_u64(), v["c"].as_u64()),
        (Some(1), Some(1), Some(3))
    );
    let o = ranklab(dir.path(), &["invariants", "--p", "2", "--l", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("odd prime"));
    assert_eq!(
        ranklab(dir.path(), &["invariants", "--p", "9", "--l", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn build_writes_canonical_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let out_s = out.to_str().unwrap();
    let o = ranklab(
        dir.path(),
        &[
            "build", "xgroup", "--l", "2", "--a", "2", "--r", "1", "--out", out_s,
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let first = fs::read(&out).unwrap();
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["degree"], 8);
    assert_eq!(v["generators"].as_array().unwrap().len(), 3);
    ranklab(
        dir.path(),
        &[
            "build", "--out", out_s, "xgroup", "--l", "2", "--a", "2", "--r", "1",
        ],
    );
    assert_eq!(fs::read(&out).unwrap(), first);

    let v = json(&ranklab(
        dir.path(),
        &["build", "sylow-sym", "--n", "4", "--l", "2"],
    ));
    assert_eq!(v["degree"], 4);

    let o = ranklab(dir.path(), &["build", "semidihedral", "--c", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ranklab(
        dir.path(),
        &["build", "general-linear", "--d", "11", "--p", "3"],
    );
    assert_eq!(o.status.code(), Some(3));
}

fn build_file(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let mut full = vec!["build"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    assert_eq!(ranklab(dir, &full).status.code(), Some(0));
    path.to_str().unwrap().to_string()
}

#[test]
fn rank_both_on_ygroup() {
    let dir = tempfile::tempdir().unwrap();
    let file = build_file(dir.path(), "y.json", &["ygroup", "--c", "3", "--r", "1"]);
    let o = ranklab(dir.path(), &["rank", &file, "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(
        (v["formula_value"].as_u64(), v["brute_value"].as_u64()),
        (Some(4), Some(4))
    );
    assert_eq!(v["status"], "Match");
    assert_eq!(v["witness"]["generators"].as_array().unwrap().len(), 4);
    assert!(v.get("wall_ms").is_none());
}

#[test]
fn rank_brute_on_plain_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain.json");
    fs::write(&file, r#"{"degree":4,"generators":[[1,0,2,3],[0,1,3,2]]}"#).unwrap();
    let f = file.to_str().unwrap();
    let o = ranklab(dir.path(), &["rank", f, "--method", "brute"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["brute_value"], 2);
    assert!(v["witness"].is_object());
    let o = ranklab(dir.path(), &["rank", f, "--method", "formula"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ranklab(
        dir.path(),
        &["rank", dir.path().join("missing.json").to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rank_budget_limited_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let file = build_file(
        dir.path(),
        "x.json",
        &["xgroup", "--l", "2", "--a", "2", "--r", "1"],
    );
    let o = ranklab(dir.path(), &["rank", &file, "--class-budget", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["status"], "LowerBoundOnly");
    let o = ranklab(dir.path(), &["rank", &file, "--element-cap", "8"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn rank_mismatch_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    // claims to be C_4 but generates the Klein four-group
    let file = dir.path().join("liar.json");
    fs::write(
        &file,
        r#"{"degree":4,"generators":[[1,0,2,3],[0,1,3,2]],"descriptor":{"builder":"cyclic","n":4}}"#,
    )
    .unwrap();
    let o = ranklab(dir.path(), &["rank", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    let detail = stderr(&o);
    assert!(detail.contains("\"status\":\"Mismatch\""), "{detail}");
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    for args in [
        &["xgroup", "--l", "2", "--a", "2", "--r", "1"][..],
        &["gl-sylow", "--d", "2", "--p", "5", "--l", "2"],
        &[
            "remark-affine",
            "--p",
            "3",
            "--m",
            "2",
            "--d",
            "2",
            "--k",
            "2",
        ],
    ] {
        let file = build_file(dir.path(), "g.json", args);
        let fresh = ranklab(&cache, &["rank", &file, "--no-cache"]);
        let first = ranklab(&cache, &["rank", &file]);
        let cached = ranklab(&cache, &["rank", &file]);
        assert_eq!(stdout(&fresh), stdout(&first));
        assert_eq!(stdout(&first), stdout(&cached));
    }
    let entries: Vec<_> = fs::read_dir(&cache)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(entries.len(), 3);
    for path in entries {
        let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let name = path.file_stem().unwrap().to_str().unwrap();
        assert_eq!(v["key"], name);
        assert_eq!(name.len(), 64);
        assert!(v["tool_version"].as_str().unwrap().starts_with("ranklab "));
        assert!(v["payload"]["status"].is_string());
    }
}

#[test]
fn verify_suites() {
    let dir = tempfile::tempdir().unwrap();
    let o = ranklab(
        dir.path(),
        &[
            "verify", "xgroups", "--l", "2", "--amax", "2", "--rmax", "1",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.lines().filter(|l| l.starts_with("PASS")).count() == 4,
        "{text}"
    );
    assert!(text.ends_with("summary: 4/4 passed\n"));

    let o = ranklab(
        dir.path(),
        &[
            "verify",
            "lemma-monomial",
            "--l",
            "3",
            "--n",
            "3",
            "--k",
            "2",
            "--trials",
            "200",
            "--seed",
            "7",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("violations 0"));
    assert!(stdout(&o).contains("seed 7"));

    let o = ranklab(
        dir.path(),
        &["verify", "gl", "--p", "5", "--d", "2", "--l", "2"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Match"));

    for suite in ["remark-examples", "gl-bound", "prop-key"] {
        let o = ranklab(dir.path(), &["verify", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
    }
    let o = ranklab(dir.path(), &["verify", "gl", "--p", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_skips_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = ranklab(
        dir.path(),
        &[
            "verify",
            "xgroups",
            "--amax",
            "2",
            "--rmax",
            "1",
            "--element-cap",
            "16",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("SKIP"));
}

#[test]
fn table_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = ranklab(
        dir.path(),
        &["table", "--p", "3,5", "--l", "2", "--d", "1..3"],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,ell,d,value,case");
    assert_eq!(lines.len(), 7);
    assert!(lines.contains(&"5,2,3,4,two-one-mod-four"));
    for l in &lines[1..4] {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(f[0], "3");
        assert_eq!(f[2], f[3]);
    }
    let o = ranklab(
        dir.path(),
        &[
            "table",
            "--p",
            "7",
            "--l",
            "3",
            "--d",
            "2",
            "--format",
            "structured",
        ],
    );
    let v = json(&o);
    assert_eq!(v[0]["value"], 2);
    assert_eq!(v[0]["case"], "default");
    // rows come out sorted whatever the input order
    let o = ranklab(
        dir.path(),
        &["table", "--p", "5,3", "--l", "3,2", "--d", "2,1"],
    );
    let firsts: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l[..5].to_string())
        .collect();
    let mut sorted = firsts.clone();
    sorted.sort();
    assert_eq!(firsts, sorted);
    for bad in ["1..", "a", "3..1", "1,,2", "0"] {
        let o = ranklab(dir.path(), &["table", "--d", bad]);
        assert_eq!(o.status.code(), Some(2), "{bad}");
    }
    assert_eq!(
        ranklab(dir.path(), &["table", "--p", "2"]).status.code(),
        Some(2)
    );
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["table", "--p", "3..13", "--l", "2,3,5", "--d", "1..6"][..],
        &[
            "verify",
            "lemma-monomial",
            "--l",
            "2",
            "--trials",
            "50",
            "--seed",
            "3",
        ],
        &["verify", "ygroups", "--cmax", "3", "--rmax", "1"],
    ] {
        let a = ranklab(dir.path(), args);
        let b = ranklab(dir.path(), args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), b.status.code());
    }
}
