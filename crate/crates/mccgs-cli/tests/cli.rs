//! End-to-end tests of the `mccgs` binary: output formats, determinism,
//! exit codes, environment overrides, and the validation oracle, driven on
//! a small parametric conic system with a fully known answer.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use mccgs::{oracle_check, parse_poly, PTree, TermOrder, VarSpace};
use num_rational::BigRational;

const BIN: &str = env!("CARGO_BIN_EXE_mccgs");
const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/conic.json");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("MCCGS_SAMPLES")
        .env_remove("MCCGS_SEED")
        .env_remove("MCCGS_MAX_FACTOR_DEGREE")
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .env_remove("MCCGS_SAMPLES")
        .env_remove("MCCGS_SEED")
        .env_remove("MCCGS_MAX_FACTOR_DEGREE")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().expect("binary finishes")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn solve_renders_the_three_conic_segments() {
    let out = run(&["solve", FIXTURE]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("3 segments"), "{text}");
    assert!(text.contains("[1] (generic)"), "{text}");
    assert!(text.contains("[y, x]"), "{text}");
    assert!(text.contains("[2*b*y - 2*c^2*y - c*d, x]"), "{text}");
    assert!(text.contains("[x + c*y]"), "{text}");
    assert!(text.contains("V(b - c^2, d)"), "{text}");
    assert!(text.contains("certified: yes"), "{text}");
}

#[test]
fn solve_reads_the_problem_from_stdin() {
    let problem = std::fs::read_to_string(FIXTURE).unwrap();
    let piped = run_stdin(&["solve"], &problem);
    assert!(piped.status.success());
    let dashed = run_stdin(&["solve", "-"], &problem);
    let from_file = run(&["solve", FIXTURE]);
    assert_eq!(stdout_of(&piped), stdout_of(&from_file));
    assert_eq!(stdout_of(&dashed), stdout_of(&from_file));
}

#[test]
fn json_output_round_trips_through_the_tree_parser() {
    let out = run(&["solve", "--format", "json", FIXTURE]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid JSON");
    let segments = doc["segments"].as_array().expect("segments array");
    assert_eq!(segments.len(), 3);
    assert_eq!(doc["certified"], serde_json::Value::Bool(true));
    assert_eq!(doc["unmerged"].as_array().unwrap().len(), 0);

    // Reconstruct each region tree from its serialized form and check it
    // against a tree freshly parsed from the same document: equality of the
    // canonical forms means the serialization is faithful.
    let space = VarSpace::new(&["x", "y"], &["b", "c", "d"]);
    let order_a = TermOrder::param_leading(mccgs::OrderKind::Lex, 2, 3);
    let mut descriptions = vec![];
    for seg in segments {
        let t1 = PTree::from_json(&space, &order_a, &seg["tree"]).expect("tree parses");
        let t2 = PTree::from_json(&space, &order_a, &seg["tree"]).expect("tree parses");
        assert!(t1.tree_equal(&t2));
        t1.validate().expect("parsed tree is well-formed");
        descriptions.push(seg["description"].as_str().unwrap().to_string());
    }
    assert!(descriptions[0].contains("whole space"), "{descriptions:?}");
}

#[test]
fn dot_output_is_a_digraph_with_one_cluster_per_segment() {
    let out = run(&["solve", "--format", "dot", FIXTURE]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.starts_with("digraph"), "{text}");
    assert!(text.trim_end().ends_with('}'), "{text}");
    assert_eq!(text.matches("subgraph cluster_").count(), 3, "{text}");
    assert_eq!(text.matches("label=\"segment").count(), 3, "{text}");
}

#[test]
fn identical_invocations_produce_identical_bytes() {
    for format in ["text", "json", "dot"] {
        let a = run(&["solve", "--format", format, FIXTURE]);
        let b = run(&["solve", "--format", format, FIXTURE]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "format {format} drifted between runs");
    }
    let a = run(&["oracle", "--samples", "10", "--seed", "42", FIXTURE]);
    let b = run(&["oracle", "--samples", "10", "--seed", "42", FIXTURE]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "oracle output drifted between runs");
}

#[test]
fn oracle_passes_on_the_conic() {
    let out = run(&["oracle", "--samples", "25", "--seed", "7", FIXTURE]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_of(&out).contains("25/25"), "{}", stdout_of(&out));
}

#[test]
fn oracle_with_zero_samples_warns_and_passes() {
    let out = run(&["oracle", "--samples", "0", FIXTURE]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("warning"), "{}", stdout_of(&out));
}

#[test]
fn oracle_honors_null_conditions_when_sampling() {
    // Restricted to V(b): two segments survive, and every sampled point must
    // land on the variety, which rejection sampling alone would miss.
    let problem = r#"{
        "vars": ["x", "y"],
        "params": ["b", "c", "d"],
        "order_x": "lex",
        "order_a": "lex",
        "polys": ["x^2 + b*y^2 + 2*c*x*y + d*x", "2*x + 2*c*y + d", "2*b*y + 2*c*x"],
        "null": ["b"]
    }"#;
    let out = run_stdin(&["oracle", "--samples", "12", "--seed", "3"], problem);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_of(&out).contains("12/12"), "{}", stdout_of(&out));
}

#[test]
fn environment_overrides_file_options_and_flags_override_both() {
    let env_run = Command::new(BIN)
        .args(["oracle", FIXTURE])
        .env("MCCGS_SAMPLES", "4")
        .env("MCCGS_SEED", "9")
        .output()
        .unwrap();
    assert!(env_run.status.success());
    let text = stdout_of(&env_run);
    assert!(text.contains("4/4"), "{text}");
    assert!(text.contains("seed 9"), "{text}");

    let flag_run = Command::new(BIN)
        .args(["oracle", "--samples", "6", "--seed", "11", FIXTURE])
        .env("MCCGS_SAMPLES", "4")
        .env("MCCGS_SEED", "9")
        .output()
        .unwrap();
    assert!(flag_run.status.success());
    let text = stdout_of(&flag_run);
    assert!(text.contains("6/6"), "{text}");
    assert!(text.contains("seed 11"), "{text}");

    // With neither flag nor environment, the file's own seed (1) applies.
    let file_run = run(&["oracle", "--samples", "3", FIXTURE]);
    assert!(stdout_of(&file_run).contains("seed 1"), "{}", stdout_of(&file_run));
}

#[test]
fn bad_inputs_exit_with_the_usage_code() {
    let cases: Vec<Output> = vec![
        run_stdin(&["solve"], "{\"vars\": [}"),
        run_stdin(&["solve"], "{\"vars\":[\"x\"],\"params\":[\"x\"],\"order_x\":\"lex\",\"order_a\":\"lex\",\"polys\":[]}"),
        run_stdin(&["solve"], "{\"vars\":[\"x\"],\"params\":[],\"order_x\":\"lex\",\"order_a\":\"lex\",\"polys\":[\"y\"]}"),
        run(&["solve", "--no-such-flag", FIXTURE]),
        run(&["no-such-command"]),
        run(&["solve", "/no/such/file.json"]),
        run(&["solve", "--max-factor-degree", "99", FIXTURE]),
    ];
    for (i, out) in cases.iter().enumerate() {
        assert_eq!(out.status.code(), Some(1), "case {i}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let bad_env = Command::new(BIN)
        .args(["oracle", FIXTURE])
        .env("MCCGS_SAMPLES", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(1));
}

#[test]
fn help_names_both_subcommands_and_the_exit_codes() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    for needle in ["solve", "oracle", "vars", "params", "exit codes", "0 success"] {
        assert!(
            text.to_lowercase().contains(&needle.to_lowercase()),
            "--help does not mention {needle:?}:\n{text}"
        );
    }
}

#[test]
fn a_deliberately_corrupted_basis_is_reported_as_a_failure() {
    // Negative control for the oracle machinery: hand it a basis that is
    // wrong on the generic region and confirm the per-point check trips.
    let space = VarSpace::new(&["x", "y"], &["b", "c", "d"]);
    let order = TermOrder::two_block(mccgs::OrderKind::Lex, 2, mccgs::OrderKind::Lex, 3);
    let parse = |s: &str| parse_poly(s, &space, &order).unwrap();
    let sys = vec![
        parse("x^2 + b*y^2 + 2*c*x*y + d*x"),
        parse("2*x + 2*c*y + d"),
        parse("2*b*y + 2*c*x"),
    ];
    let honest = vec![parse("1")];
    let corrupted = vec![parse("x + 1"), parse("y")];
    let q = |n: i64| BigRational::from_integer(n.into());
    let generic_point = vec![q(1), q(1), q(1)];
    assert!(oracle_check(&sys, &honest, &generic_point));
    assert!(!oracle_check(&sys, &corrupted, &generic_point));
}

#[test]
fn a_deliberately_corrupted_tree_fails_validation() {
    // Negative control for tree checking: a forged serialized tree whose
    // child strictly contains nothing (equal ideals) must be rejected.
    let space = VarSpace::new(&["x"], &["a", "b"]);
    let order_a = TermOrder::param_leading(mccgs::OrderKind::Lex, 1, 2);
    let forged: serde_json::Value = serde_json::from_str(
        r#"{"ideal": [], "children": [
             {"ideal": ["a"], "children": [{"ideal": ["a"], "children": []}]}
           ]}"#,
    )
    .unwrap();
    match PTree::from_json(&space, &order_a, &forged) {
        Err(_) => {}
        Ok(t) => {
            t.validate().expect_err("equal parent and child ideals must not validate");
        }
    }
}
