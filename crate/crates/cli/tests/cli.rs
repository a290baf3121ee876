use std::process::{Command, Output};

use crp_core::combinatorics::is_j_balanced;
use crp_core::distributions::even_partition_pmf;
use crp_core::samplers::{Sampler, SamplerModel};
use crp_core::{GroupIndexing, ModelParams, RngHandle, SetPartition};

fn crp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crp"))
        .args(args)
        .output()
        .expect("crp runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sample_balanced_emits_balanced_partitions() {
    let args = [
        "sample",
        "--model",
        "balanced",
        "--n",
        "2",
        "--j",
        "2",
        "--alpha",
        "1/2",
        "--theta",
        "1",
        "--seed",
        "7",
        "--samples",
        "3",
    ];
    let o = crp(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    let g = GroupIndexing::new(2, 2).unwrap();
    for l in &lines {
        let b: SetPartition = l.parse().unwrap();
        assert_eq!(b.n(), 4);
        assert!(is_j_balanced(&b, &g).unwrap());
    }
    assert_eq!(crp(&args).stdout, o.stdout);
}

#[test]
fn sample_output_matches_library_draws() {
    let o = crp(&[
        "sample",
        "--model",
        "even",
        "--n",
        "2",
        "--j",
        "3",
        "--kappa",
        "1/2",
        "--m",
        "3",
        "--seed",
        "5",
        "--samples",
        "50",
    ]);
    let p = ModelParams::negative_kappa(crp_core::Rational::new(1.into(), 2.into()), 3).unwrap();
    let sampler = Sampler::new(SamplerModel::Even, 2, 3, &p).unwrap();
    let mut rng = RngHandle::new(5, 0);
    let expected: String = (0..50)
        .map(|_| format!("{}\n", sampler.sample(&mut rng)))
        .collect();
    assert_eq!(stdout(&o), expected);
}

#[test]
fn sample_crp_of_one_element() {
    let o = crp(&["sample", "--model", "crp", "--n", "1", "--theta", "1"]);
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn structured_sample_records_and_trace_sidecar() {
    let dir = std::env::temp_dir().join(format!("crp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let trace = dir.join("trace.jsonl");
    let o = crp(&[
        "sample",
        "--model",
        "even",
        "--n",
        "2",
        "--j",
        "2",
        "--theta",
        "1",
        "--samples",
        "4",
        "--format",
        "structured",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["partition"].is_string());
    }
    let traces = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(traces.lines().count(), 4);
    for line in traces.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["trace"]["steps"].as_array().unwrap().len(), 1);
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn pmf_even_single_block() {
    let o = crp(&[
        "pmf", "--model", "even", "--object", "1 2 3 4", "--j", "2", "--alpha", "1/2", "--theta",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("prob 1/2\n"), "{text}");
    let p = ModelParams::ratio((1, 2), (1, 1)).unwrap();
    let lib = even_partition_pmf(
        &"1 2 3 4".parse().unwrap(),
        &GroupIndexing::new(2, 2).unwrap(),
        &p,
    )
    .unwrap();
    assert!(text.contains(&format!("log_prob {}", lib.ln())));
}

#[test]
fn pmf_crp_single_element() {
    let o = crp(&[
        "pmf", "--model", "crp", "--object", "1", "--n", "1", "--theta", "1",
    ]);
    assert!(stdout(&o).starts_with("prob 1\n"));
}

#[test]
fn pmf_structured_carries_num_and_den() {
    let o = crp(&[
        "pmf",
        "--model",
        "crp",
        "--object",
        "1 2|3",
        "--alpha",
        "1/2",
        "--theta",
        "1",
        "--format",
        "structured",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["value"]["prob"]["num"], "1");
    assert_eq!(v["value"]["prob"]["den"], "8");
}

#[test]
fn structural_violation_exits_2() {
    let o = crp(&[
        "pmf", "--model", "even", "--object", "1|2 3 4", "--j", "2", "--alpha", "1/2", "--theta",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn invalid_parameters_exit_2() {
    for args in [
        &[
            "sample", "--model", "crp", "--n", "3", "--alpha", "3/2", "--theta", "1",
        ][..],
        &[
            "sample", "--model", "crp", "--n", "3", "--alpha", "1/2", "--theta", "-1",
        ][..],
        &[
            "sample", "--model", "crp", "--n", "3", "--alpha", "0.5", "--theta", "1",
        ][..],
        &[
            "sample",
            "--model",
            "crp",
            "--n",
            "3",
            "--theta",
            "1",
            "--samples",
            "0",
        ][..],
        &["pmf", "--model", "crp", "--object", "2 1", "--theta", "1"][..],
    ] {
        assert_eq!(crp(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn exhausted_budget_exits_3() {
    let o = crp(&[
        "enumerate",
        "--class",
        "partitions",
        "--n",
        "9",
        "--max-objects",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = crp(&["verify", "--suite", "identity", "--max-ground", "4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn enumerate_lists_even_support_with_probabilities() {
    let o = crp(&[
        "enumerate",
        "--class",
        "even",
        "--n",
        "2",
        "--j",
        "2",
        "--model",
        "even",
        "--alpha",
        "1/2",
        "--theta",
        "1",
    ]);
    assert_eq!(
        stdout(&o),
        "1 2 3 4\t1/2\n1 2|3 4\t1/6\n1 3|2 4\t1/6\n1 4|2 3\t1/6\n"
    );
    let o = crp(&["enumerate", "--class", "partitions", "--n", "3"]);
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn verify_identity_passes() {
    let o = crp(&["verify", "--suite", "identity"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.contains("suite identity: 123 checks, 0 failed: PASS"),
        "{text}"
    );
}

#[test]
fn verify_seating_tree_passes() {
    let o = crp(&[
        "verify",
        "--suite",
        "seating-tree",
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let records: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.last().unwrap()["passed"], true);
    assert_eq!(records.len(), 49);
}

#[test]
fn claims_audit_writes_report_and_exits_0() {
    let dir = std::env::temp_dir().join(format!("crp-audit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("audit.jsonl");
    let o = crp(&[
        "verify",
        "--suite",
        "claims-audit",
        "--format",
        "structured",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report = std::fs::read_to_string(&out).unwrap();
    let fails = report
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v["verdict"] == "fails")
        .count();
    assert!(fails > 0);
    std::fs::remove_dir_all(&dir).ok();
}
