use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lrc_core::io::{CodeDoc, DmDoc, ResolvableDoc};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn lrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrc"))
        .args(args)
        .env_remove("LRC_DISTANCE_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_a_reproduces_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("code.json");
    let res = lrc(&[
        "construct",
        "a",
        "--packing",
        path(&data("regular_packing_8_3.json")),
        "--out",
        path(&out),
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert_eq!(
        std::fs::read(&out).unwrap(),
        std::fs::read(data("binary_16_8_4.json")).unwrap()
    );
    let doc = json(&res);
    assert_eq!(doc["optimal_c"], true);
    assert_eq!(doc["update_optimal"], true);
    assert_eq!(doc["bound_c"], 4);
}

#[test]
fn construct_a_rejects_uncovered_element_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let packing = dir.path().join("p.json");
    std::fs::write(&packing, r#"{"k":4,"blocks":[[1,2],[2,3]]}"#).unwrap();
    let out = dir.path().join("code.json");
    let res = lrc(&[
        "construct",
        "a",
        "--packing",
        path(&packing),
        "--out",
        path(&out),
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert_eq!(json(&res)["ok"], false);
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn analyze_golden_codes() {
    let res = lrc(&[
        "analyze",
        path(&data("binary_16_8_4.json")),
        "--r",
        "3",
        "--delta",
        "4",
    ]);
    assert_eq!(res.status.code(), Some(0));
    let doc = json(&res);
    assert_eq!(doc["d"], 4);
    assert_eq!(doc["distance_method"], "exact");
    assert_eq!(doc["optimal_c"], true);
    assert_eq!(doc["update_efficiency"], 4);
    assert_eq!(doc["report"]["bound_c"], 4);

    let res = lrc(&[
        "analyze",
        path(&data("binary_14_8_3.json")),
        "--r",
        "3",
        "--delta",
        "3",
    ]);
    assert_eq!(res.status.code(), Some(0));
    let doc = json(&res);
    assert_eq!(doc["optimal_c"], true);
    assert_eq!(
        doc["extracted"]["packing"]["blocks"]
            .as_array()
            .unwrap()
            .len(),
        6
    );
    assert_eq!(
        doc["extracted"]["deletions"],
        serde_json::json!([{ "column": 6, "element": 6 }])
    );
}

#[test]
fn analyze_reports_unsatisfiable_locality() {
    let res = lrc(&[
        "analyze",
        path(&data("binary_16_8_4.json")),
        "--r",
        "2",
        "--delta",
        "4",
    ]);
    assert_eq!(res.status.code(), Some(1));
    let doc = json(&res);
    assert_eq!(doc["locality"], "unsatisfied");
    assert_eq!(doc["symbol"], 1);
}

#[test]
fn distance_budget_flag_and_environment() {
    let code = data("binary_16_8_4.json");
    let res = lrc(&[
        "analyze",
        path(&code),
        "--r",
        "3",
        "--delta",
        "4",
        "--exact-distance",
        "100",
    ]);
    assert_eq!(json(&res)["distance_method"], "unknown");
    assert_eq!(json(&res)["d"], Value::Null);

    let res = Command::new(env!("CARGO_BIN_EXE_lrc"))
        .args(["analyze", path(&code), "--r", "3", "--delta", "4"])
        .env("LRC_DISTANCE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(0));
    assert_eq!(json(&res)["distance_method"], "unknown");
}

#[test]
fn split_code_is_certified_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.json");
    let res = lrc(&[
        "construct",
        "b",
        "--rs",
        "16,8",
        "--p",
        "2",
        "--m",
        "8",
        "--resolvable",
        path(&data("resolvable_8_two_classes.json")),
        "--out",
        path(&out),
    ]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let doc = json(&res);
    assert_eq!((doc["n"].as_u64(), doc["d"].as_u64()), (Some(20), Some(9)));
    assert_eq!(doc["distance_method"], "certified");

    let res = lrc(&["analyze", path(&out), "--r", "3", "--delta", "3"]);
    assert_eq!(res.status.code(), Some(0));
    let doc = json(&res);
    assert_eq!(doc["d"], 9);
    assert_eq!(doc["distance_method"], "certified");
    assert_eq!(doc["optimal_c"], true);
    assert_eq!(doc["update_efficiency"], 9);
}

#[test]
fn split_code_from_generated_mds_file() {
    let dir = tempfile::tempdir().unwrap();
    let [rs, dm, rp, out] = ["rs.json", "dm.json", "rp.json", "b.json"].map(|f| dir.path().join(f));
    let res = lrc(&[
        "rs-gen",
        "--p",
        "2",
        "--m",
        "3",
        "--n",
        "8",
        "--k",
        "4",
        "--out",
        path(&rs),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let res = lrc(&[
        "build-dm",
        "--k",
        "2",
        "--r",
        "2",
        "--u",
        "2",
        "--out",
        path(&dm),
        "--resolvable",
        path(&rp),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let res = lrc(&[
        "construct",
        "b",
        "--mds",
        path(&rs),
        "--resolvable",
        path(&rp),
        "--out",
        path(&out),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let res = lrc(&["analyze", path(&out), "--r", "2", "--delta", "3"]);
    let doc = json(&res);
    assert_eq!(doc["d"], 5);
    assert_eq!(doc["distance_method"], "exact");
    assert_eq!(doc["optimal_c"], true);
}

#[test]
fn build_dm_outputs_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let (dm, rp) = (dir.path().join("dm.json"), dir.path().join("rp.json"));
    let res = lrc(&[
        "build-dm",
        "--k",
        "3",
        "--r",
        "2",
        "--u",
        "2",
        "--out",
        path(&dm),
        "--resolvable",
        path(&rp),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let doc: ResolvableDoc = serde_json::from_slice(&std::fs::read(&rp).unwrap()).unwrap();
    assert_eq!(doc.k, 6);
    assert_eq!(
        doc.classes,
        vec![
            vec![vec![1, 4], vec![2, 5], vec![3, 6]],
            vec![vec![1, 5], vec![2, 6], vec![3, 4]]
        ]
    );
    doc.to_resolvable().unwrap();

    let dm4 = dir.path().join("dm4.json");
    assert_eq!(
        lrc(&[
            "build-dm",
            "--k",
            "4",
            "--r",
            "2",
            "--u",
            "2",
            "--out",
            path(&dm4)
        ])
        .status
        .code(),
        Some(0)
    );
    let parsed: DmDoc = serde_json::from_slice(&std::fs::read(&dm4).unwrap()).unwrap();
    assert_eq!(parsed.group, "gf");
    parsed.to_dm().unwrap().validate().unwrap();

    let dm6 = dir.path().join("dm6.json");
    let res = lrc(&[
        "build-dm",
        "--k",
        "6",
        "--r",
        "2",
        "--u",
        "2",
        "--out",
        path(&dm6),
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert!(json(&res)["error"]
        .as_str()
        .unwrap()
        .contains("not a prime power"));
    assert!(!dm6.exists());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        lrc(&["build-dm", "--k", "x", "--r", "2", "--u", "2", "--out", "o.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(lrc(&["analyze"]).status.code(), Some(2));
    assert_eq!(lrc(&["frobnicate"]).status.code(), Some(2));
    let code = data("binary_16_8_4.json");
    // neither --message nor --seed
    assert_eq!(
        lrc(&["repair", path(&code), "--report", path(&code)])
            .status
            .code(),
        Some(2)
    );
}

fn analysis(dir: &Path) -> PathBuf {
    let report = dir.join("analysis.json");
    let res = lrc(&[
        "analyze",
        path(&data("binary_16_8_4.json")),
        "--r",
        "3",
        "--delta",
        "4",
    ]);
    std::fs::write(&report, &res.stdout).unwrap();
    report
}

#[test]
fn repair_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let report = analysis(dir.path());
    let code = data("binary_16_8_4.json");
    let res = lrc(&[
        "repair",
        path(&code),
        "--report",
        path(&report),
        "--erase",
        "1,2,3",
        "--seed",
        "7",
    ]);
    assert_eq!(res.status.code(), Some(0));
    let doc = json(&res);
    assert_eq!(doc["recovered"], true);
    assert_eq!(doc["served_by"].as_array().unwrap().len(), 3);

    // Same flags, same output.
    let again = lrc(&[
        "repair",
        path(&code),
        "--report",
        path(&report),
        "--erase",
        "1,2,3",
        "--random",
        "7",
    ]);
    assert_eq!(again.stdout, res.stdout);

    let res = lrc(&[
        "repair",
        path(&code),
        "--report",
        path(&report),
        "--seed",
        "7",
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert_eq!(json(&res)["erased"], serde_json::json!([]));

    // The bare report member works too, with a message file and check-symbol erasures.
    let bare = dir.path().join("report.json");
    let full: Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    std::fs::write(&bare, full["report"].to_string()).unwrap();
    let msg = dir.path().join("msg.json");
    std::fs::write(&msg, r#"{"symbols":[1,0,1,1,0,0,1,0]}"#).unwrap();
    let res = lrc(&[
        "repair",
        path(&code),
        "--report",
        path(&bare),
        "--erase",
        "2,9,16",
        "--message",
        path(&msg),
    ]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    assert_eq!(
        json(&res)["message"],
        serde_json::json!([1, 0, 1, 1, 0, 0, 1, 0])
    );
}

#[test]
fn repair_rejects_too_many_erasures() {
    let dir = tempfile::tempdir().unwrap();
    let report = analysis(dir.path());
    let res = lrc(&[
        "repair",
        path(&data("binary_16_8_4.json")),
        "--report",
        path(&report),
        "--erase",
        "1,2,3,4",
        "--seed",
        "7",
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert_eq!(json(&res)["ok"], false);
}

#[test]
fn rs_gen_writes_a_loadable_mds_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rs.json");
    let res = lrc(&[
        "rs-gen",
        "--p",
        "2",
        "--m",
        "8",
        "--modulus",
        "0x11D",
        "--n",
        "16",
        "--k",
        "8",
        "--out",
        path(&out),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let doc: CodeDoc = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(doc.field.modulus, 0x11D);
    let code = doc.to_code().unwrap();
    assert!(code.mds_check(lrc_core::DEFAULT_MDS_EFFORT).is_full());

    let res = lrc(&[
        "rs-gen",
        "--p",
        "2",
        "--m",
        "8",
        "--modulus",
        "0x11B",
        "--n",
        "300",
        "--k",
        "8",
        "--out",
        path(&out),
    ]);
    assert_eq!(res.status.code(), Some(1));
}
