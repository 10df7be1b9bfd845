//! The acceptance suite: one test per shipped criterion, each printing its
//! pass/fail line (visible with `cargo test --test acceptance -- --nocapture`,
//! and always on failure). The same checks back the `verify` CLI subcommand.

use msgpass::verify::{run_suite, SUITES};

fn run(name: &str) {
    let result = run_suite(name, None).expect("suite exists");
    println!("{}", result.line());
    assert!(result.passed, "{}", result.line());
}

#[test]
fn criterion_01_map_edge_protocol() {
    run("map-protocol");
}

#[test]
fn criterion_02_dp_vs_brute_force() {
    run("dp-oracle");
}

#[test]
fn criterion_03_lower_bound_certificate() {
    run("map-certificate");
}

#[test]
fn criterion_04_counting_task() {
    run("counting-task");
}

#[test]
fn criterion_05_disjointness_protocol() {
    run("disjointness");
}

#[test]
fn criterion_06_edge_to_node_simulation() {
    run("edge-node-simulation");
}

#[test]
fn criterion_07_symmetric_simulation() {
    run("symmetric-simulation");
}

#[test]
fn criterion_08_bp_correctness() {
    run("bp-marginals");
}

#[test]
fn criterion_09_forward_pass_identity() {
    run("gcn-identity");
}

#[test]
fn criterion_10_reproducibility() {
    run("reproducibility");
}

#[test]
fn suite_list_is_complete() {
    assert_eq!(SUITES.len(), 10);
}
