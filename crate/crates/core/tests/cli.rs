use std::path::PathBuf;

use regcyc::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("regcyc").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("regcyc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn alt8() -> PathBuf {
    let p = scratch("alt8.grp");
    std::fs::write(&p, "degree 8\n# Alt(8)\n(1 2 3)\n(2 3 4 5 6 7 8)\n").unwrap();
    p
}

#[test]
fn check_alt8_witness() {
    let g = alt8();
    let (code, out, _) = call(&["check", "--group", g.to_str().unwrap(), "--element", "(1 2 3)(4 5)(6 7)"]);
    assert_eq!(code, 1);
    assert!(out.contains("no cycle of length 6"), "{out}");
    let (code, out, _) = call(&["--json", "check", "--group", g.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["elements"].as_array().unwrap().len(), 2);
}

#[test]
fn certify_exit_codes_and_json() {
    let args = ["certify", "--case", "ii", "--family", "POmega-", "--n", "8", "--q", "11", "--json"];
    let (code, out, _) = call(&args);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verdict"], "certified");
    assert!(!v["terms"]["s1"].as_array().unwrap().is_empty());
    assert_eq!(call(&args).1, out, "JSON must be byte-identical across runs");

    let (code, _, _) = call(&["certify", "--case", "triality", "--q", "2"]);
    assert_eq!(code, 1);
    let (code, _, err) = call(&["certify", "--case", "i", "--family", "PSL", "--n", "5", "--q", "6"]);
    assert_eq!(code, 2);
    assert!(err.contains("error"), "{err}");
    let (code, _, _) = call(&["certify", "--case", "v", "--family", "PSL", "--n", "5", "--q", "7"]);
    assert_eq!(code, 2);
}

#[test]
fn scan_small_dim_lists_table_rows() {
    let (code, out, _) = call(&["--json", "scan", "--theorem", "small-dim"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let groups: Vec<&str> = v["flagged"].as_array().unwrap().iter().map(|e| e["group"].as_str().unwrap()).collect();
    for g in ["PSL_2(19)", "PSL_4(8)", "PSU_4(8)", "PSp_4(5)"] {
        assert!(groups.contains(&g), "{g} missing");
    }
}

#[test]
fn build_action_round_trip() {
    let out = scratch("sp6-points.grp");
    let o = out.to_str().unwrap();
    let (code, _, err) = call(&[
        "build-action", "--type", "singular-points", "--form", "symplectic", "--n", "6", "--q", "2", "--count", "16",
        "--seed", "11", "--out", o,
    ]);
    assert_eq!(code, 0, "{err}");
    let labels = std::fs::read_to_string(format!("{o}.labels")).unwrap();
    assert_eq!(labels.lines().count(), 64);
    let (code, text, _) = call(&["--json", "verify", "--group", o, "--square-free-only"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["degree"], 63);
    assert_eq!(v["group_order"], 1451520);

    let ks = scratch("s5-pairs.grp");
    let (code, _, _) = call(&["build-action", "--type", "ksets", "--m", "5", "--k", "2", "--out", ks.to_str().unwrap()]);
    assert_eq!(code, 0);
    // (1 2 3)(4 5) still has a 6-cycle on pairs, through {1,4}
    let (code, text, _) = call(&["--json", "verify", "--group", ks.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!((v["degree"].as_u64(), v["group_order"].as_u64()), (Some(10), Some(120)));
}

#[test]
fn compare_points_and_lines() {
    let p = scratch("o8-points.grp");
    let l = scratch("o8-aniso.grp");
    for (t, f) in [("singular-points", &p), ("aniso2", &l)] {
        let (code, _, err) = call(&[
            "build-action", "--type", t, "--form", "quadratic", "--eps", "+", "--n", "8", "--q", "2", "--count", "8",
            "--seed", "11", "--out", f.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
    }
    let (code, out, _) = call(&[
        "--json", "compare", "--group", p.to_str().unwrap(), "--action1", p.to_str().unwrap(), "--action2",
        l.to_str().unwrap(), "--samples", "2000", "--seed", "3",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    assert_eq!((v["degree1"].as_u64(), v["degree2"].as_u64()), (Some(135), Some(1120)));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(call(&[]).0, 2);
    assert_eq!(call(&["check"]).0, 2);
    assert_eq!(call(&["check", "--group", "/nonexistent.grp"]).0, 2);
    let bad = scratch("bad.grp");
    std::fs::write(&bad, "degree 3\n(1 4)\n").unwrap();
    let (code, _, err) = call(&["verify", "--group", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(call(&["--help"]).0, 0);
}
