use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn dset(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dset"))
        .args(args)
        .arg("--quiet")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn fixture(name: &str) -> String {
    let out = dset(&["gen", "--fixture", name], None);
    assert!(out.status.success());
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn star_is_a_dset() {
    let out = dset(&["check", "-"], Some(&fixture("FLW4")));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["d1"]["verdict"], "pass");
}

#[test]
fn window_over_a_discerning_parameter_exits_one() {
    let out = dset(&["indisc", "-", "--seq", "0,1,2,3,4", "--over", "5"], Some(&fixture("CAT5X")));
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["indiscernible"], false);
    assert!(v["witness"].is_object());
}

#[test]
fn window_without_parameters_is_indiscernible() {
    let out = dset(&["indisc", "-", "--seq", "0,1,2,3,4"], Some(&fixture("CAT5X")));
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn generated_tree_rebuilds_to_itself() {
    let out = dset(&["to-tree", "-"], Some(&fixture("CAT4")));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["edges"].as_array().unwrap().len(), 5);
}

#[test]
fn dset_documents_round_trip_through_trees() {
    let tree = fixture("MIX");
    let d = dset(&["from-tree", "-"], Some(&tree));
    assert!(d.status.success());
    let back = dset(&["to-tree", "-"], Some(std::str::from_utf8(&d.stdout).unwrap()));
    assert_eq!(back.status.code(), Some(0));
    let again = dset(&["from-tree", "-"], Some(std::str::from_utf8(&back.stdout).unwrap()));
    assert_eq!(json(&d)["positives"], json(&again)["positives"]);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        vec!["gen", "--spec", "random:9", "--seed", "7", "--dset", "--coloring", "round_robin:2"],
        vec!["gen", "--spec", "d_regular:3:6"],
    ] {
        let a = dset(&args, None);
        let b = dset(&args, None);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
    let input = fixture("CAT6");
    let a = dset(&["hull", "-", "--seq", "0,1,2,3,4,5"], Some(&input));
    let b = dset(&["hull", "-", "--seq", "0,1,2,3,4,5"], Some(&input));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_input_exits_two_with_an_error_object() {
    let out = dset(&["check", "-"], Some("{not json"));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "malformed");

    let out = dset(&["gen", "--fixture", "NOPE"], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "unknown_fixture");
}

#[test]
fn non_dset_has_no_tree() {
    let doc = r#"{"n": 4, "positives": [[0,1,2,3],[0,2,1,3]]}"#;
    let out = dset(&["to-tree", "-"], Some(doc));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["representable"], false);
    let out = dset(&["check", "-"], Some(doc));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn star_splittings_and_brute_force_agree() {
    let tree = fixture("FLW4");
    let fast = dset(&["splittings", "-"], Some(&tree));
    let slow = dset(&["splittings", "-", "--brute"], Some(&tree));
    assert_eq!(fast.stdout, slow.stdout);
    let v = json(&fast);
    assert_eq!(v["node_count"], 1);
    assert_eq!(v["edge_count"], 4);
}

#[test]
fn probe_lists_images() {
    let dir = std::env::temp_dir().join(format!("dset-cli-probe-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let map = dir.join("map.json");
    std::fs::write(&map, r#"{"pairs": [[0, 1], [1, 0]]}"#).unwrap();
    let out = dset(&["probe", "-", "--map", map.to_str().unwrap(), "--add", "2", "--brute"], Some(&fixture("FLW4")));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["extensions"], serde_json::json!([2, 3]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dot_export_lists_every_edge() {
    let out = dset(&["export-dot", "-"], Some(&fixture("CAT4")));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph"));
    assert_eq!(text.matches(" -- ").count(), 5);
}
