use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_classforge");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("CLASSFORGE_CACHE")
        .output()
        .expect("binary runs")
}

fn run_with_cache_env(args: &[&str], cache: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .env("CLASSFORGE_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

/// No JSON numbers anywhere, and object keys in sorted order.
fn check_shape(v: &Value) {
    match v {
        Value::Number(n) => panic!("bare number {n}"),
        Value::Array(a) => a.iter().for_each(check_shape),
        Value::Object(o) => {
            let keys: Vec<_> = o.keys().collect();
            let mut sorted = keys.clone();
            sorted.sort();
            assert_eq!(keys, sorted);
            o.values().for_each(check_shape);
        }
        _ => {}
    }
}

const COMMANDS: &[&[&str]] = &[
    &["torsion", "--a", "0", "--b", "1"],
    &["torsion", "--a", "0", "--b", "-1"],
    &["classgroup", "--d", "-23"],
    &["cubic", "--m", "17"],
    &[
        "specialize",
        "--d",
        "-26",
        "--u",
        "1",
        "--w",
        "3",
        "--p",
        "3",
    ],
    &["descent", "--n", "17", "--search-bound", "20"],
    &[
        "scan", "--n", "1", "--l", "2", "--m-from", "2", "--m-to", "10",
    ],
    &["scan-cubic", "--from", "2", "--to", "12"],
    &["audit"],
];

#[test]
fn every_subcommand_emits_string_numbers() {
    for args in COMMANDS {
        let out = run(args);
        let v = json(&out);
        let text = String::from_utf8(out.stdout.clone()).unwrap();
        check_shape(&v);
        assert!(text.ends_with('\n'));
        // a second run is byte-identical
        assert_eq!(run(args).stdout, out.stdout, "{args:?}");
    }
}

#[test]
fn documented_examples() {
    let v = json(&run(&["torsion", "--a", "0", "--b", "1"]));
    assert_eq!(v["structure"], serde_json::json!(["6"]));
    assert_eq!(v["points"].as_array().unwrap().len(), 5);
    let v = json(&run(&["classgroup", "--d", "-23"]));
    assert_eq!(v["class_number"], "3");
    assert_eq!(v["structure"], serde_json::json!(["3"]));
    let v = json(&run(&["audit"]));
    let entry = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| {
            e["quote"]
                .as_str()
                .unwrap()
                .contains("a subgroup of order $8$")
        })
        .expect("order 8 claim");
    assert_eq!(entry["status"], "mismatch");
    assert_eq!(entry["computed"], "6");
    let v = json(&run(&[
        "specialize",
        "--d",
        "-26",
        "--u",
        "1",
        "--w",
        "3",
        "--p",
        "3",
    ]));
    assert_eq!(v["order"], "3");
}

#[test]
fn exit_codes() {
    // unknown flag and missing subcommand
    assert_eq!(
        run(&["torsion", "--a", "0", "--c", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&[]).status.code(), Some(2));
    // invalid mathematical input
    for args in [
        &["torsion", "--a", "0", "--b", "0"][..],
        &["classgroup", "--d", "-4"],
        &["classgroup", "--d", "5"],
        &["cubic", "--m", "8"],
        &[
            "specialize",
            "--d",
            "-26",
            "--u",
            "1",
            "--w",
            "2",
            "--p",
            "3",
        ],
        &["descent", "--n", "17", "--search-bound", "-1"],
        &[
            "scan", "--n", "1", "--l", "4", "--m-from", "2", "--m-to", "3",
        ],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
    // budget exhaustion
    for args in [
        &["--budget", "10", "classgroup", "--d", "-99999995"][..],
        &[
            "--budget",
            "100",
            "descent",
            "--n",
            "17",
            "--search-bound",
            "1000",
        ],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("limit"));
    }
}

#[test]
fn cache_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let c = cache.to_str().unwrap();
    for args in COMMANDS {
        let plain = run(args).stdout;
        let mut with: Vec<&str> = vec!["--cache", c];
        with.extend_from_slice(args);
        let miss = run(&with);
        let hit = run(&with);
        assert_eq!(miss.stdout, plain, "{args:?}");
        assert_eq!(hit.stdout, plain, "{args:?}");
        assert_eq!(run_with_cache_env(args, &cache).stdout, plain, "{args:?}");
    }
    let stored: Value = serde_json::from_slice(&std::fs::read(&cache).unwrap()).unwrap();
    assert_eq!(stored.as_object().unwrap().len(), COMMANDS.len());
    assert!(!dir.path().join("cache.json.lock").exists());
}

#[test]
fn budget_is_not_part_of_the_cache_key() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    let c = c.to_str().unwrap();
    let a = run(&["--cache", c, "classgroup", "--d", "-26"]).stdout;
    let b = run(&["--cache", c, "--budget", "5", "classgroup", "--d", "-26"]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(b.stdout, a);
}

#[test]
fn held_lock_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    std::fs::write(dir.path().join("cache.json.lock"), "").unwrap();
    let out = run(&[
        "--cache",
        cache.to_str().unwrap(),
        "classgroup",
        "--d",
        "-23",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let out = run_with_cache_env(&["classgroup", "--d", "-23"], &cache);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupt_cache_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    std::fs::write(&cache, "not json").unwrap();
    let out = run(&["--cache", cache.to_str().unwrap(), "audit"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("cache.json.lock").exists());
}

#[test]
fn scan_writes_csv_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let args = [
        "scan", "--n", "1", "--l", "2", "--m-from", "2", "--m-to", "5", "--format", "csv",
    ];
    let stdout = run(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let out = run(&with_out);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.as_bytes(), &stdout[..]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "m,raw,d,discriminant,status,h,divisors,l_rank,spec_u,spec_w,spec_order"
    );
    assert_eq!(lines.len(), 5);
    assert!(lines[2].starts_with("3,-26,-26,-104,ok,6,6,1,"));
    for line in &lines[1..] {
        assert_eq!(line.split(',').count(), 11);
        assert!(!line.contains('"'));
    }
}
