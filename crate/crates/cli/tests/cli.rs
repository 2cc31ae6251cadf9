use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn torifan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torifan"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_fixture(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("torifan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const P1113: &str = r#"{"rays": [[-1,-1,-3],[1,0,0],[0,1,0],[0,0,1]],
                        "max_cones": [[1,2,3],[0,2,3],[0,1,3],[0,1,2]]}"#;

fn xl_minus_file() -> PathBuf {
    let o = torifan(&[
        "flip", "--alpha", "6", "--beta", "5", "--wall", "D1,D2", "--json",
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    write_fixture("xlminus_6_5.json", &v["fan"].to_string())
}

#[test]
fn discrepancy_on_flipped_bundle() {
    let f = xl_minus_file();
    let o = torifan(&["discrepancy", f.to_str().unwrap(), "--point", "0,1,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "-1/2");
    let o = torifan(&["discrepancy", f.to_str().unwrap(), "--point", "0,2,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn info_and_volume() {
    let f = write_fixture("p1113.json", P1113);
    let o = torifan(&["info", f.to_str().unwrap()]);
    let s = stdout(&o);
    assert!(s.contains("rho: 1"), "{s}");
    assert!(s.contains("gorenstein: true"), "{s}");
    assert!(s.contains("canonical: true"), "{s}");
    assert!(s.contains("-K^3: 72"), "{s}");
    assert_eq!(
        stdout(&torifan(&["volume", f.to_str().unwrap()])).trim(),
        "72"
    );

    let o = torifan(&["info", "--alpha", "6", "--beta", "5", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rho"], 2);
    assert_eq!(v["smooth"], true);
    assert_eq!(v["anticanonical_volume"], "54");
}

#[test]
fn mori_groups_walls() {
    let o = torifan(&["mori", "--alpha", "6", "--beta", "5", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rays = v["rays"].as_array().unwrap();
    assert_eq!(rays.len(), 2);
    let mut sizes: Vec<usize> = rays
        .iter()
        .map(|r| r["walls"].as_array().unwrap().len())
        .collect();
    sizes.sort();
    assert_eq!(sizes, vec![1, 6]);
}

#[test]
fn input_errors_exit_2() {
    let bad = write_fixture("bad.json", "{\"rays\": [[1,0,0]]");
    assert_eq!(
        torifan(&["info", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(torifan(&["info"]).status.code(), Some(2));
    assert_eq!(
        torifan(&["info", "/nonexistent/fan.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        torifan(&["verify-paper", "--only", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        torifan(&["flip", "--twist", "0", "--wall", "0,1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn flip_cap_from_environment() {
    let f = xl_minus_file();
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_torifan"))
            .args(["tworay", f.to_str().unwrap()])
            .env("TORIFAN_MAX_FLIPS", cap)
            .output()
            .unwrap()
    };
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("x").status.code(), Some(2));
    let o = run("1");
    assert!(o.status.success());
    assert!(stdout(&o).contains("step 1: flip tau(E0,E1)"));
}

#[test]
fn verify_paper_subset_and_json() {
    let o = torifan(&["verify-paper", "--only", "audit", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let statuses: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["status"].as_str().unwrap())
        .collect();
    assert_eq!(statuses, ["AUDIT", "AUDIT"]);
    for key in ["check_id", "expected", "computed", "citation"] {
        assert!(v[0][key].is_string());
    }
    let o = torifan(&["verify-paper", "--only", "volumes"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count() >= 8);
}

#[test]
fn output_is_deterministic() {
    let a = torifan(&["tworay", "--twist", "3", "--json"]);
    let b = torifan(&["tworay", "--twist", "3", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let a = torifan(&["verify-paper", "--only", "flip"]);
    let b = torifan(&["verify-paper", "--only", "flip"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn nef_membership() {
    let yes = torifan(&[
        "nef",
        "--alpha",
        "6",
        "--beta",
        "5",
        "--divisor",
        "1,0,0,0,0",
    ]);
    assert_eq!(stdout(&yes).trim(), "nef: true");
    let no = torifan(&[
        "nef",
        "--alpha",
        "6",
        "--beta",
        "5",
        "--divisor",
        r#"["-1",1,"1/2",1,1]"#,
    ]);
    assert_eq!(stdout(&no).trim(), "nef: false");
}
