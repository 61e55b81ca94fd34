use std::{fs, path::PathBuf, process::Command};

fn boxcount(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_boxcount"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("boxcount-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn trivial_group_totals() {
    let (code, out, _) = boxcount(&["enum", "--group", "zn:1", "--max-degree", "5", "--totals"]);
    assert_eq!(code, 0);
    assert_eq!(out, "degree,count\n0,1\n1,1\n2,3\n3,6\n4,13\n5,24\n");
}

#[test]
fn csv_header_and_order() {
    let (code, out, _) = boxcount(&["enum", "--group", "zn:2", "--max-degree", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "degree,exponent_q0,exponent_q1,coefficient");
    assert_eq!(&lines[1..], ["0,0,0,1", "1,1,0,1", "2,1,1,2", "2,2,0,1"]);
}

#[test]
fn verifications_pass() {
    for args in [
        vec!["verify", "--theorem", "thm-klein", "--max-degree", "8"],
        vec!["verify", "--theorem", "thm-zn", "--group", "zn:3", "--max-degree", "6"],
        vec!["verify", "--theorem", "thm-pyramid", "--max-degree", "8"],
        vec!["verify", "--theorem", "lemma-7.2", "--max-degree", "8"],
        vec!["verify", "--theorem", "crc", "--group", "zn:2", "--max-degree", "0"],
        vec!["verify", "--theorem", "crc", "--group", "klein", "--max-degree", "6"],
        vec!["verify", "--theorem", "sign-flip", "--group", "zn:3", "--max-degree", "6"],
        vec!["verify", "--theorem", "transfer", "--max-degree", "6"],
        vec!["verify", "--theorem", "transfer", "--group", "zn:2", "--max-degree", "6"],
    ] {
        let (code, out, err) = boxcount(&args);
        assert_eq!(code, 0, "{args:?}: {out}{err}");
        assert!(out.starts_with("OK "), "{out}");
    }
}

#[test]
fn operator_suites() {
    let (code, out, _) = boxcount(&["verify-ops", "--suite", "commutators", "--cutoff", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 4);
    let (code, _, _) = boxcount(&["verify-ops", "--suite", "nope"]);
    assert_eq!(code, 2);
}

#[test]
fn diff_reports_first_mismatch() {
    let (a, b, c) = (scratch("a.json"), scratch("b.json"), scratch("c.json"));
    let p = |x: &PathBuf| x.to_str().unwrap().to_string();
    assert_eq!(boxcount(&["formula", "--which", "zn:2", "--max-degree", "6", "--out", &p(&a)]).0, 0);
    assert_eq!(boxcount(&["enum", "--group", "zn:2", "--max-degree", "6", "--out", &p(&b)]).0, 0);
    assert_eq!(boxcount(&["dt", "--group", "zn:2", "--max-degree", "6", "--out", &p(&c)]).0, 0);
    let (code, out, _) = boxcount(&["diff", &p(&a), &p(&b)]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = boxcount(&["diff", &p(&a), &p(&c)]);
    assert_eq!(code, 1);
    assert!(out.contains("first difference at q0"), "{out}");
    assert!(out.contains("has 1") && out.contains("has -1"), "{out}");
}

#[test]
fn sign_report() {
    let (code, out, _) = boxcount(&["sign", "--group", "klein", "--diagram", "[[0,0,0]]"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["parity"], 0);
    assert_eq!(v["closed_form_sign"], 1);
    let (code, out, _) = boxcount(&["sign", "--group", "z3diag", "--diagram", "[[0,0,0],[1,0,0],[0,1,0]]"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sign"], v["closed_form_sign"]);
    // (1,0,0) without its support is not a diagram.
    let (code, _, err) = boxcount(&["sign", "--group", "klein", "--diagram", "[[1,0,0]]"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn usage_errors() {
    assert_eq!(boxcount(&["enum", "--group", "d4", "--max-degree", "2"]).0, 2);
    assert_eq!(boxcount(&["enum", "--group", "zn:0", "--max-degree", "2"]).0, 2);
    assert_eq!(boxcount(&["enum", "--group", "zn:2"]).0, 2);
    assert_eq!(boxcount(&["enum", "--group", "zn:2", "--max-degree", "2", "--shards", "2", "--shard", "2"]).0, 2);
    assert_eq!(boxcount(&["formula", "--which", "dt-orb:z3diag", "--max-degree", "2"]).0, 2);
    assert_eq!(boxcount(&["transfer", "--which", "z3diag", "--max-degree", "2"]).0, 2);
    let bad = scratch("missing-dir").join("x").join("out.json");
    let (code, _, err) = boxcount(&["formula", "--which", "klein", "--max-degree", "2", "--out", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("writing"), "{err}");
}

#[test]
fn output_is_independent_of_threads_and_shards() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_boxcount"))
            .args(["enum", "--group", "klein", "--max-degree", "7"])
            .env("BOXCOUNT_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    let (_, four, _) = boxcount(&["--threads", "3", "enum", "--group", "klein", "--max-degree", "7"]);
    assert_eq!(one, four.as_bytes());

    // Shards add up to the whole.
    let whole: serde_json::Value = serde_json::from_slice(&one).unwrap();
    let mut total = 0usize;
    for s in 0..3 {
        let (code, out, _) = boxcount(&[
            "enum", "--group", "klein", "--max-degree", "7", "--shards", "3", "--shard", &s.to_string(),
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        total += v["terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| t["coef"].as_str().unwrap().parse::<usize>().unwrap())
            .sum::<usize>();
    }
    let expect: usize = whole["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["coef"].as_str().unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, expect);
}

#[test]
fn transfer_and_formula_agree() {
    let (c1, t, _) = boxcount(&["transfer", "--which", "zn:3", "--max-degree", "6"]);
    let (c2, f, _) = boxcount(&["formula", "--which", "zn:3", "--max-degree", "6"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(t, f);
    let (c1, t, _) = boxcount(&["transfer", "--which", "z2z2", "--max-degree", "6"]);
    let (c2, p, _) = boxcount(&["pyramid", "--max-degree", "6"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(t, p);
}
