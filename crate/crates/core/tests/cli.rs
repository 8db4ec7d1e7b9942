use std::path::PathBuf;
use std::process::Command;

use lsat_semantics::cli::run;

fn spec(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "specs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn lsat(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lsat").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn valid_specs_pass_validation() {
    for name in [
        "example.lsat",
        "example_repeat.lsat",
        "example_movable.lsat",
        "single_resource.lsat",
        "claiming.lsat",
        "peripherals.lsat",
        "two_activities.lsat",
        "cycle.lsat",
    ] {
        let (code, out, err) = lsat(&["validate", &spec(name)]);
        assert_eq!(code, 0, "{name}: {err}");
        assert!(out.is_empty() && err.is_empty(), "{name}: {out}{err}");
    }
}

#[test]
fn invalid_spec_reports_located_diagnostic() {
    let path = spec("self_concurrency.lsat");
    let (code, _, err) = lsat(&["validate", &path]);
    assert_eq!(code, 1);
    assert_eq!(
        err.trim(),
        format!(
            "E_SELF_CONCURRENCY:{path}:4:10: nodes `x` and `y` on peripheral `p1` are unordered"
        )
    );
}

#[test]
fn missing_file_is_a_usage_error() {
    let (code, _, err) = lsat(&["validate", "no/such/file.lsat"]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"), "{err}");
}

#[test]
fn unknown_command_is_a_usage_error() {
    assert_eq!(lsat(&["frobnicate"]).0, 2);
}

#[test]
fn availability_component_summary() {
    let (code, out, _) = lsat(&[
        "explore",
        &spec("single_resource.lsat"),
        "--component",
        "availability:R1",
        "--depth",
        "5",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "states=2 transitions=2 frontier=0 depth=1");
}

#[test]
fn depth_zero_expands_nothing() {
    let (code, out, _) = lsat(&["explore", &spec("example.lsat"), "--depth", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("transitions=0"), "{out}");
}

#[test]
fn json_summary_of_full_exploration() {
    let (code, out, _) = lsat(&[
        "explore",
        &spec("example.lsat"),
        "--full",
        "--initial",
        "p1=a",
        "--initial",
        "p2=b",
        "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    // a single instance with pinned peripherals runs exactly like its
    // activity automaton
    assert_eq!(v["states"], 12);
    assert_eq!(v["transitions"], 16);
    assert_eq!(v["frontier"], 0);
    assert_eq!(v["truncated"], false);
}

#[test]
fn strict_budget_exits_with_three() {
    let (code, _, _) = lsat(&[
        "explore",
        &spec("example_repeat.lsat"),
        "--full",
        "--max-states",
        "10",
        "--strict",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn truncation_warns_without_strict() {
    let (code, _, err) = lsat(&[
        "explore",
        &spec("example_repeat.lsat"),
        "--full",
        "--max-states",
        "10",
    ]);
    assert_eq!(code, 0);
    assert!(!err.is_empty());
}

#[test]
fn bad_pin_is_a_usage_error() {
    let (code, _, _) = lsat(&["explore", &spec("example.lsat"), "--initial", "p1=zzz"]);
    assert_eq!(code, 2);
}

#[test]
fn trace_verdicts() {
    let single = spec("single_resource.lsat");
    let t = |n: &str| spec(&format!("traces/{n}"));
    assert_eq!(
        lsat(&["trace", &single, &t("alternating.trace")]),
        (0, "accept\n".into(), String::new())
    );
    let (code, out, _) = lsat(&["trace", &single, &t("double_claim.trace")]);
    assert_eq!((code, out.trim()), (1, "reject at line 4"));
    assert_eq!(lsat(&["trace", &single, &t("empty.trace")]).0, 0);
    assert_eq!(
        lsat(&["trace", &spec("example_repeat.lsat"), &t("overtake.trace")]).0,
        0
    );
    // the same overtaking is impossible when Act runs once
    assert_eq!(
        lsat(&["trace", &spec("example.lsat"), &t("overtake.trace")]).0,
        1
    );
}

#[test]
fn malformed_trace_line_is_located() {
    let dir = std::env::temp_dir().join(format!("lsat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.trace");
    std::fs::write(&path, "Act#1.claim(R1)\nnot an event\n").unwrap();
    let (code, _, err) = lsat(&[
        "trace",
        &spec("single_resource.lsat"),
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("bad.trace:2:"), "{err}");
}

#[test]
fn dot_output_is_deterministic() {
    let a = lsat(&["dot", &spec("claiming.lsat"), "--depth", "6"]);
    let b = lsat(&["dot", &spec("claiming.lsat"), "--depth", "6"]);
    assert_eq!(a.0, 0);
    assert!(a.1.starts_with("digraph"), "{}", a.1);
    assert_eq!(a, b);
}

#[test]
fn explore_writes_dot_file() {
    let dir = std::env::temp_dir().join(format!("lsat-dot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("g.dot");
    let (code, _, _) = lsat(&[
        "explore",
        &spec("single_resource.lsat"),
        "--dot",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text, lsat(&["dot", &spec("single_resource.lsat")]).1);
}

#[test]
fn completeness_suggestion_and_check() {
    let cycle = spec("cycle.lsat");
    let (code, out, _) = lsat(&["complete-check", &cycle]);
    assert_eq!(code, 0);
    assert!(out.contains("candidate (A1 ; A2)^w"), "{out}");

    let (code, out, _) = lsat(&["complete-check", &cycle, "--candidate", "A1 ; (A2 ; A1)^w"]);
    assert_eq!((code, out.trim()), (0, "complete up to depth 20"));

    let (code, out, _) = lsat(&["complete-check", &cycle, "--candidate", "A1 ; (A1)^w"]);
    assert_eq!(code, 1);
    assert!(out.contains("not allowed: A1 ; A1"), "{out}");
}

#[test]
fn stats_counts() {
    let (code, out, _) = lsat(&["stats", &spec("example.lsat")]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "resources=2 peripherals=2 activities=1");
    assert_eq!(lines[1], "activity Act nodes=6 edges=5 postsets=12");
}

#[test]
fn binary_matches_library_entry_point() {
    let out = Command::new(env!("CARGO_BIN_EXE_lsat"))
        .args(["explore", &spec("example.lsat"), "--depth", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let lib = lsat(&["explore", &spec("example.lsat"), "--depth", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib.1);
}
