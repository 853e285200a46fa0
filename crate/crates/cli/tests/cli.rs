//! End-to-end tests of the `indep` binary: golden outputs, report
//! self-checking, and the exit-code contract.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use indep_core::formula::parse;
use indep_core::oracle::Oracle;
use indep_core::{Theory, Valuation};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_indep")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn golden_outputs_are_stable() {
    let dir = golden_dir();
    let tmp = tempfile::tempdir().unwrap();
    for name in ["chain", "absorb", "mixed", "empty"] {
        for mode in ["tarski", "reznikoff"] {
            let out_path = tmp.path().join(format!("{name}.{mode}.out.thy"));
            let out_str = out_path.to_str().unwrap();
            let output = run_in(
                &dir,
                &[
                    "independize",
                    "--mode",
                    mode,
                    "--certify",
                    &format!("{name}.thy"),
                    "-o",
                    out_str,
                ],
            );
            assert!(output.status.success(), "{name} {mode}");
            let theory = std::fs::read_to_string(&out_path).unwrap();
            let report = std::fs::read_to_string(format!("{out_str}.json")).unwrap();
            let frozen_theory =
                std::fs::read_to_string(dir.join(format!("{name}.{mode}.out.thy"))).unwrap();
            let frozen_report =
                std::fs::read_to_string(dir.join(format!("{name}.{mode}.report.json"))).unwrap();
            assert_eq!(theory, frozen_theory, "{name} {mode} theory drifted");
            assert_eq!(report, frozen_report, "{name} {mode} report drifted");
        }
    }
}

/// The report must be re-checkable from its own contents: witnesses by
/// plain evaluation, entailment claims by the oracle.
#[test]
fn golden_reports_self_check() {
    let dir = golden_dir();
    for name in ["chain", "absorb", "mixed", "empty"] {
        for mode in ["tarski", "reznikoff"] {
            let text =
                std::fs::read_to_string(dir.join(format!("{name}.{mode}.report.json"))).unwrap();
            let report: serde_json::Value = serde_json::from_str(&text).unwrap();

            let output_formulas: Vec<_> = report["output"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| parse(v.as_str().unwrap()).unwrap())
                .collect();
            let input = Theory::parse_text(
                &std::fs::read_to_string(dir.join(format!("{name}.thy"))).unwrap(),
            )
            .unwrap();

            // independence witnesses: satisfy the others, falsify their own
            let records = report["certificates"]["independence"].as_array().unwrap();
            assert_eq!(records.len(), output_formulas.len());
            for (i, record) in records.iter().enumerate() {
                assert!(record["independent"].as_bool().unwrap());
                let witness: Valuation = record["witness"]
                    .as_object()
                    .unwrap()
                    .iter()
                    .map(|(k, v)| {
                        (
                            indep_core::Symbol::new(k).unwrap(),
                            v.as_bool().unwrap(),
                        )
                    })
                    .collect();
                let universe: BTreeSet<_> = output_formulas
                    .iter()
                    .flat_map(|f| f.symbols())
                    .collect();
                let witness = witness.extended_with_false(universe.iter());
                for (j, f) in output_formulas.iter().enumerate() {
                    assert_eq!(
                        f.evaluate(&witness).unwrap(),
                        i != j,
                        "{name} {mode}: witness {i} vs member {j}"
                    );
                }
            }

            // entailment claims, re-decided from scratch
            let oracle = Oracle::default();
            for (section, premises, targets) in [
                (
                    "input_entails_output",
                    input.formulas().to_vec(),
                    &output_formulas,
                ),
                (
                    "output_entails_input",
                    output_formulas.clone(),
                    &input.formulas().to_vec(),
                ),
            ] {
                let records = report["certificates"]["equivalence"][section]
                    .as_array()
                    .unwrap();
                assert_eq!(records.len(), targets.len());
                for (record, target) in records.iter().zip(targets) {
                    assert_eq!(record["status"], "entailed");
                    assert_eq!(parse(record["formula"].as_str().unwrap()).unwrap(), *target);
                    assert!(oracle.entails(&premises, target).unwrap().is_entailed());
                }
            }
        }
    }
}

#[test]
fn exit_code_contract() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();

    // 2: parse error, with file and line in the message
    std::fs::write(dir.join("bad.thy"), "p &\n").unwrap();
    let out = run_in(dir, &["independize", "bad.thy"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bad.thy:"), "stderr: {stderr}");
    assert!(stderr.contains("line 1"), "stderr: {stderr}");

    // 3: resource limit
    std::fs::write(dir.join("two.thy"), "p & q\n").unwrap();
    let out = run_in(dir, &["independize", "--max-vars", "1", "two.thy"]);
    assert_eq!(out.status.code(), Some(3));

    // 4: verify rejects a non-independent candidate
    std::fs::write(dir.join("in.thy"), "p\n").unwrap();
    std::fs::write(dir.join("cand.thy"), "p\np | q\n").unwrap();
    let out = run_in(dir, &["verify", "in.thy", "cand.thy"]);
    assert_eq!(out.status.code(), Some(4));

    // 4: interpolation precondition failure
    let out = run_in(dir, &["interpolate", "p", "q"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("countermodel"));

    // 4: coverage violation
    std::fs::write(dir.join("cover.thy"), "p\np | q\n").unwrap();
    let out = run_in(dir, &["star-check", "cover.thy"]);
    assert_eq!(out.status.code(), Some(4));

    // 5: surplus exceeds anchors with the fallback disabled
    std::fs::write(
        dir.join("exact1.thy"),
        "(w | x | y | z) & (~w | ~x) & (~w | ~y) & (~w | ~z) & (~x | ~y) & (~x | ~z) & (~y | ~z)\n",
    )
    .unwrap();
    let out = run_in(dir, &["independize", "--no-fallback", "exact1.thy"]);
    assert_eq!(out.status.code(), Some(5));

    // the same input succeeds with the fallback and flags it in the report
    let out = run_in(dir, &["independize", "--certify", "exact1.thy"]);
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["fallback_used"], true);

    // 0: empty input gives empty output
    std::fs::write(dir.join("empty.thy"), "# nothing\n").unwrap();
    let out = run_in(dir, &["independize", "empty.thy"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_accepts_its_own_products() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    std::fs::write(dir.join("in.thy"), "p & q\nq -> r\n").unwrap();
    let out = run_in(dir, &["independize", "in.thy", "-o", "out.thy"]);
    assert!(out.status.success());
    let out = run_in(dir, &["verify", "in.thy", "out.thy"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["mode"], "verify");
}

#[test]
fn starify_and_partition_subcommands() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    std::fs::write(dir.join("in.thy"), "p\np | q\n").unwrap();
    let out = run_in(dir, &["starify", "in.thy"]);
    assert_eq!(stdout_of(&out), "p\n");

    std::fs::write(dir.join("three.thy"), "p\nq\np | q\n").unwrap();
    let out = run_in(dir, &["partition", "three.thy"]);
    let dump: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(dump["anchors"].as_array().unwrap().len(), 2);
    assert_eq!(dump["divisors"][2]["anchors"], serde_json::json!([0, 1]));

    // constant members violate the partition preconditions
    std::fs::write(dir.join("const.thy"), "p\ntrue\n").unwrap();
    let out = run_in(dir, &["partition", "const.thy"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fuzz_reproduces_by_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let a = stdout_of(&run_in(dir, &["fuzz", "--seed", "9"]));
    let b = stdout_of(&run_in(dir, &["fuzz", "--seed", "9"]));
    assert_eq!(a, b);
    let c = stdout_of(&run_in(dir, &["fuzz", "--seed", "10"]));
    assert_ne!(a, c);
    // pairs parse as two formulas and the first entails the second
    let pair = stdout_of(&run_in(dir, &["fuzz", "--seed", "3", "--kind", "pair"]));
    let t = Theory::parse_text(&pair).unwrap();
    assert_eq!(t.len(), 2);
    let oracle = Oracle::default();
    assert!(oracle
        .entails(&t.formulas()[..1], &t.formulas()[1])
        .unwrap()
        .is_entailed());
}
