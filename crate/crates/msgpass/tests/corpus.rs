//! The checked-in fuzz corpus seeds must parse with the parsers their targets
//! exercise, so the corpus stays valid as formats evolve.

use std::path::PathBuf;

fn corpus_dir(target: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fuzz/corpus")
        .join(target)
}

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = corpus_dir(target);
    let mut seeds: Vec<Vec<u8>> = std::fs::read_dir(&dir)
        .unwrap_or_else(|_| panic!("corpus directory {} missing", dir.display()))
        .map(|entry| std::fs::read(entry.unwrap().path()).unwrap())
        .collect();
    seeds.sort();
    assert!(!seeds.is_empty(), "no seeds for {target}");
    seeds
}

#[test]
fn graph_seeds_parse() {
    for seed in seeds("graph_json") {
        msgpass::json::parse_graph(&seed).unwrap();
    }
}

#[test]
fn potential_assignment_seeds_parse() {
    for seed in seeds("potential_assignment_json") {
        msgpass::json::parse_potential_assignment(&seed).unwrap();
    }
}

#[test]
fn ising_model_seeds_parse() {
    for seed in seeds("ising_model_json") {
        msgpass::json::parse_ising_model(&seed).unwrap();
    }
}

#[test]
fn ising_dataset_seeds_parse() {
    for seed in seeds("ising_dataset_json") {
        msgpass::json::parse_ising_dataset(&seed).unwrap();
    }
}

#[test]
fn star_dataset_seeds_parse() {
    for seed in seeds("star_dataset_json") {
        msgpass::json::parse_star_dataset(&seed).unwrap();
    }
}

#[test]
fn gcn_stack_seeds_parse() {
    for seed in seeds("gcn_stack_json") {
        msgpass::json::parse_gcn_stack(&seed).unwrap();
    }
}

#[test]
fn feature_map_seeds_parse() {
    for seed in seeds("feature_map_json") {
        msgpass::json::parse_feature_map(&seed).unwrap();
    }
}

#[test]
fn task_input_seeds_parse() {
    for seed in seeds("task_input_json") {
        msgpass::json::parse_task_input(&seed).unwrap();
    }
}

#[test]
fn run_manifest_seeds_parse() {
    for seed in seeds("run_manifest_json") {
        msgpass::manifest::RunManifest::parse(&seed).unwrap();
    }
}
