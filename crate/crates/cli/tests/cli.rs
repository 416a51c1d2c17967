use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_catbundle"))
}

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.toml"))
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn catalog_lists_every_entry() {
    let o = run(&["catalog"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    assert!(lines.iter().any(|l| l.starts_with("s3-conj ")));
    assert!(lines
        .iter()
        .any(|l| l.starts_with("z2-s3-broken") && l.contains("negative")));
    assert_eq!(text, stdout(&run(&["catalog"])));
}

#[test]
fn passing_scenario_exits_zero() {
    let o = run(&["run", &scenario("s3-catalog"), "-s", "crossed-module"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("cm.peiffer"));
}

#[test]
fn law_failure_exits_one_with_witness() {
    let o = run(&["run", &scenario("broken-peiffer")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness:"));
    let o = run(&["run", &scenario("s3-cocycle-broken"), "-f", "jsonl"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("a=o2"));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["run", &scenario("malformed")]).status.code(), Some(2));
    assert_eq!(run(&["run", "no/such/file.toml"]).status.code(), Some(2));
    assert_eq!(
        run(&["run", &scenario("s3-catalog"), "-s", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["run", &scenario("s3-catalog"), "--tol-group", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["run", &scenario("s3-catalog"), "-s", "transport"]).status.code(),
        Some(2)
    );
}

#[test]
fn unknown_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("typo.toml");
    std::fs::write(&p, "crossed_module = \"s3-conj\"\nseeed = 4\n").unwrap();
    let o = run(&["run", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("seeed"));
}

#[test]
fn jsonl_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str, extra: &[&str]| {
        let p = dir.path().join(name);
        let mut args = vec!["run", "-f", "jsonl", "-o", p.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        std::fs::read(p).unwrap()
    };
    let s = scenario("z4-quiver");
    let a = out("a.jsonl", &[&s]);
    let b = out("b.jsonl", &[&s]);
    let c = out("c.jsonl", &[&s, "--sequential"]);
    assert_eq!(a, b);
    assert_eq!(a, c);
    let text = String::from_utf8(a).unwrap();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["type"] == "suite" || v["type"] == "law");
        assert!(v.get("elapsed_ms").is_none());
    }
    let d = out("d.jsonl", &[&s, "--seed", "99"]);
    assert!(!d.is_empty());
}

#[test]
fn timings_are_opt_in() {
    let o = run(&[
        "run",
        &scenario("s3-catalog"),
        "-s",
        "crossed-module",
        "-f",
        "jsonl",
        "--timings",
    ]);
    assert!(stdout(&o).contains("\"elapsed_ms\""));
}

fn matrix(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines().skip_while(|l| !l.starts_with(&format!("path {name}:")));
    lines.next().expect("path printed");
    lines
        .take_while(|l| l.trim_start().starts_with('['))
        .flat_map(|l| {
            l.trim()
                .trim_matches(|c| c == '[' || c == ']')
                .split_whitespace()
                .map(|x| x.parse::<f64>().unwrap())
                .collect::<Vec<_>>()
        })
        .collect()
}

#[test]
fn transport_prints_rotation() {
    let o = run(&["transport", &scenario("so2-constant"), "-p", "unit"]);
    assert!(o.status.success());
    let m = matrix(&stdout(&o), "unit");
    let want = [0.0, 1.0, -1.0, 0.0];
    for (x, w) in m.iter().zip(want) {
        assert!((x - w).abs() < 1e-9, "{m:?}");
    }
}

#[test]
fn zero_connection_prints_identity() {
    let o = run(&["transport", &scenario("zero-connection")]);
    assert!(o.status.success());
    let m = matrix(&stdout(&o), "wander");
    assert_eq!(m, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
}

#[test]
fn transport_rejects_unknown_path() {
    assert_eq!(
        run(&["transport", &scenario("so2-constant"), "-p", "nowhere"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn suites_listing_names_every_suite() {
    let text = stdout(&run(&["suites"]));
    for name in [
        "crossed-module",
        "exchange-law",
        "prop31-roundtrip",
        "prop34",
        "prop51",
        "prop62",
        "transport",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn split_path_matches_whole_path_bit_for_bit() {
    let o = run(&[
        "transport",
        &scenario("so2-constant"),
        "-p",
        "second.first",
        "-p",
        "split",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let (a, b) = (matrix(&text, "second.first"), matrix(&text, "split"));
    assert_eq!(a.len(), 4);
    assert_eq!(a, b);
    let o = run(&["transport", &scenario("so2-constant"), "-p", "first.second"]);
    assert_eq!(o.status.code(), Some(2));
}
