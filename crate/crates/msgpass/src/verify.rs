//! The acceptance checks, addressable by suite name. The `acceptance`
//! integration test and the CLI `verify` subcommand both run these; every
//! tolerance is pinned here.

use std::time::Instant;

use crate::certify::{counting_certificate, map_certificate};
use crate::gcn::{edge_gcn_forward, generate_star_dataset, node_gcn_forward, FeatureMap, GcnStack};
use crate::graph::Graph;
use crate::ising::{
    bp_marginals, complete_binary_tree, directed_node_dp, exact_marginals_bruteforce,
    generate_ising_dataset, max_abs_diff, IsingModel, Topology,
};
use crate::manifest::RunManifest;
use crate::map::{
    brute_force_map, build_map_edge_protocol, dp_map_hub_path, energy, potentials_from_symbols,
};
use crate::protocol::{
    all_inputs, copy_or_edge_protocol, copy_or_symmetric_edge_protocol, random_inputs,
    run_edge_protocol, run_node_protocol, run_symmetric_edge_protocol, run_symmetric_node_protocol,
    simulate_edge_with_node, symmetric_edge_to_node, StateMode, Symbol,
};
use crate::rng;
use crate::tasks::{
    build_counting_edge_protocol, build_disjointness_edge_protocol, counting_task_g,
    disjointness_split, disjointness_task_g, input_summation, set_disjointness,
};
use crate::{json, Result};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: &'static str,
    pub passed: bool,
    pub details: String,
    pub elapsed_ms: u128,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:<22} {} ({} ms)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.details,
            self.elapsed_ms
        )
    }
}

pub const SUITES: &[&str] = &[
    "map-protocol",
    "dp-oracle",
    "map-certificate",
    "counting-task",
    "disjointness",
    "edge-node-simulation",
    "symmetric-simulation",
    "bp-marginals",
    "gcn-identity",
    "reproducibility",
];

/// Short aliases accepted by `run_suite` alongside the full suite names.
fn resolve_suite(name: &str) -> &str {
    match name {
        "map" => "map-protocol",
        "dp" => "dp-oracle",
        "certificate" => "map-certificate",
        "counting" => "counting-task",
        "disj" => "disjointness",
        "simulation" => "edge-node-simulation",
        "symmetric" => "symmetric-simulation",
        "bp" | "ising" => "bp-marginals",
        "gcn" => "gcn-identity",
        "repro" => "reproducibility",
        other => other,
    }
}

/// Runs one named suite. `m_override` narrows the size-swept suites to a
/// single size where that makes sense.
pub fn run_suite(name: &str, m_override: Option<usize>) -> Result<CheckResult> {
    let name = resolve_suite(name);
    let start = Instant::now();
    let outcome = match name {
        "map-protocol" => check_map_protocol(m_override),
        "dp-oracle" => check_dp_oracle(m_override),
        "map-certificate" => check_map_certificate(),
        "counting-task" => check_counting_task(),
        "disjointness" => check_disjointness(),
        "edge-node-simulation" => check_edge_node_simulation(),
        "symmetric-simulation" => check_symmetric_simulation(),
        "bp-marginals" => check_bp_marginals(),
        "gcn-identity" => check_gcn_identity(),
        "reproducibility" => check_reproducibility(),
        other => {
            return Err(crate::Error::InvalidParameter(format!(
                "unknown suite '{other}'; known: {}",
                SUITES.join(", ")
            )))
        }
    };
    let (passed, details) = match outcome {
        Ok(details) => (true, details),
        Err(details) => (false, details),
    };
    Ok(CheckResult {
        id: SUITES.iter().find(|&&s| s == name).unwrap_or(&"?"),
        passed,
        details,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

pub fn run_all() -> Vec<CheckResult> {
    SUITES
        .iter()
        .map(|name| run_suite(name, None).expect("known suite"))
        .collect()
}

type Check = std::result::Result<String, String>;

fn fail(msg: impl Into<String>) -> Check {
    Err(msg.into())
}

// Criterion 1: the 3-round/4-bit MAP edge protocol equals the DP evaluator,
// exhaustively at m=2 and on 200 seeded inputs at m in {3,4}.
fn check_map_protocol(m_override: Option<usize>) -> Check {
    let mut checked = 0usize;
    let sizes: Vec<usize> = m_override.map_or_else(|| vec![2, 3, 4], |m| vec![m]);
    for m in sizes {
        let g = Graph::hub_path(m).map_err(|e| e.to_string())?;
        let p = build_map_edge_protocol(m).map_err(|e| e.to_string())?;
        if p.rounds != 3 || p.memory != 4 {
            return fail(format!("protocol shape {}x{} != 3x4", p.rounds, p.memory));
        }
        let inputs: Vec<Vec<Symbol>> = if m == 2 {
            all_inputs(4, g.num_edges()).collect()
        } else {
            random_inputs(4, g.num_edges(), 200, 1000 + m as u64)
        };
        for input in inputs {
            let trace = run_edge_protocol(&p, &g, &input).map_err(|e| e.to_string())?;
            if trace.max_state_bits != 4 {
                return fail(format!("max state {} bits", trace.max_state_bits));
            }
            let potentials = potentials_from_symbols(&input).map_err(|e| e.to_string())?;
            let dp = dp_map_hub_path(m, &potentials).map_err(|e| e.to_string())?;
            if trace.outputs != dp {
                return fail(format!("m={m}: protocol != dp on {input:?}"));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "3 rounds, 4 bits; {checked} inputs agree with the DP"
    ))
}

// Criterion 2: DP vs brute force, assignment equality under the fixed
// tie-break; exhaustive at m=2, 200 seeded inputs at m in {3,4}.
fn check_dp_oracle(m_override: Option<usize>) -> Check {
    let mut checked = 0usize;
    let sizes: Vec<usize> = m_override.map_or_else(|| vec![2, 3, 4], |m| vec![m]);
    for m in sizes {
        let g = Graph::hub_path(m).map_err(|e| e.to_string())?;
        let inputs: Vec<Vec<Symbol>> = if m == 2 {
            all_inputs(4, g.num_edges()).collect()
        } else {
            random_inputs(4, g.num_edges(), 200, 2000 + m as u64)
        };
        for input in inputs {
            let potentials = potentials_from_symbols(&input).map_err(|e| e.to_string())?;
            let dp = dp_map_hub_path(m, &potentials).map_err(|e| e.to_string())?;
            let bf = brute_force_map(&g, &potentials).map_err(|e| e.to_string())?;
            let e_dp = energy(&g, &potentials, &dp).map_err(|e| e.to_string())?;
            let e_bf = energy(&g, &potentials, &bf).map_err(|e| e.to_string())?;
            if e_dp != e_bf {
                return fail(format!("m={m}: energies {e_dp} != {e_bf}"));
            }
            if dp != bf {
                return fail(format!("m={m}: assignments differ on {input:?}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} inputs: same argmin, same energy"))
}

// Criterion 3: the light-cone certificate returns M = 2^m exactly for the
// proof instance at m in {2,3}.
fn check_map_certificate() -> Check {
    let mut parts = Vec::new();
    for m in [2usize, 3] {
        let report = map_certificate(m, 1 << 22, false).map_err(|e| e.to_string())?;
        if !report.exhaustive {
            return fail(format!("m={m}: enumeration not exhaustive"));
        }
        if report.distinct_outputs != 1 << m {
            return fail(format!(
                "m={m}: M = {} != {}",
                report.distinct_outputs,
                1 << m
            ));
        }
        if (report.bound - m as f64).abs() > 1e-9 {
            return fail(format!("m={m}: bound {} != {m}", report.bound));
        }
        parts.push(format!("m={m}: M=2^{m}, bound {}", report.bound));
    }
    Ok(parts.join("; "))
}

// Criterion 4: the counting protocol equals the task (exhaustive m=2, 200
// inputs at m in {4,5}); round-2 states equal the input summations; states
// stay within 2m+1; the lower-bound instance yields M >= 2^(m/2).
fn check_counting_task() -> Check {
    for m in [2usize, 4, 5] {
        let g = Graph::depth2_tree(m).map_err(|e| e.to_string())?;
        let p = build_counting_edge_protocol(m).map_err(|e| e.to_string())?;
        let inputs: Vec<Vec<Symbol>> = if m == 2 {
            all_inputs(2, g.num_edges()).collect()
        } else {
            random_inputs(2, g.num_edges(), 200, 4000 + m as u64)
        };
        for input in inputs {
            let direct = counting_task_g(m, &input).map_err(|e| e.to_string())?;
            let trace = run_symmetric_edge_protocol(&p, &g, &input).map_err(|e| e.to_string())?;
            if trace.outputs != direct {
                return fail(format!("m={m}: protocol != task on {input:?}"));
            }
            let c = input_summation(&g, &input);
            for (e, &ce) in c.iter().enumerate() {
                if trace.states[2][e].as_int() != Some(ce as i64) {
                    return fail(format!("m={m}: round-2 state != C at edge {e}"));
                }
            }
            match trace.max_int_state() {
                Some(v) if v <= (2 * m + 1) as i64 => {}
                other => return fail(format!("m={m}: max state {other:?} > 2m+1")),
            }
        }
    }
    let mut bounds = Vec::new();
    for m in [2usize, 4] {
        let report = counting_certificate(m, 1 << 22, false).map_err(|e| e.to_string())?;
        if !report.exhaustive {
            return fail(format!("counting m={m}: not exhaustive"));
        }
        if report.distinct_outputs < 1 << (m / 2) {
            return fail(format!(
                "counting m={m}: M = {} < 2^{}",
                report.distinct_outputs,
                m / 2
            ));
        }
        bounds.push(format!("m={m}: M={}", report.distinct_outputs));
    }
    Ok(format!(
        "protocol == task on m in {{2,4,5}}; round-2 = C; {}",
        bounds.join(", ")
    ))
}

// Criterion 5: the 6-round/1-bit protocol equals the mirrored-disjointness
// task (exhaustive n=4, 200 inputs n=6) and g = 1 - DISJ on the same inputs.
fn check_disjointness() -> Check {
    let mut checked = 0usize;
    for n in [4usize, 6] {
        let g = Graph::complete(n).map_err(|e| e.to_string())?;
        let p = build_disjointness_edge_protocol(n).map_err(|e| e.to_string())?;
        if p.rounds != 6 || p.memory != 1 {
            return fail(format!("protocol shape {}x{} != 6x1", p.rounds, p.memory));
        }
        let inputs: Vec<Vec<Symbol>> = if n == 4 {
            all_inputs(2, g.num_edges()).collect()
        } else {
            random_inputs(2, g.num_edges(), 200, 5000 + n as u64)
        };
        for input in inputs {
            let direct = disjointness_task_g(n, &input).map_err(|e| e.to_string())?;
            let trace = run_edge_protocol(&p, &g, &input).map_err(|e| e.to_string())?;
            if trace.outputs != direct {
                return fail(format!("n={n}: protocol != task on {input:?}"));
            }
            let (x, y) = disjointness_split(n, &input).map_err(|e| e.to_string())?;
            if direct[0] != !set_disjointness(&x, &y) {
                return fail(format!("n={n}: g != 1 - DISJ on {input:?}"));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "6 rounds, 1 bit; {checked} inputs agree with g = 1 - DISJ"
    ))
}

// Criterion 6: the node simulation of an edge protocol has T+1 rounds,
// matches every output, and stays within max_degree * B bits per node.
fn check_edge_node_simulation() -> Check {
    // Copy protocol on the star with 3 leaves, exhaustively.
    let g = Graph::star(3).map_err(|e| e.to_string())?;
    let p = copy_or_edge_protocol();
    let sim = simulate_edge_with_node(&p, &g);
    if sim.rounds != p.rounds + 1 {
        return fail("copy: simulated round count != T+1");
    }
    if sim.memory > g.max_degree() * p.memory {
        return fail(format!("copy: {} bits > degree * B", sim.memory));
    }
    for input in all_inputs(2, g.num_edges()) {
        let direct = run_edge_protocol(&p, &g, &input).map_err(|e| e.to_string())?;
        let node = run_node_protocol(&sim, &g, &input).map_err(|e| e.to_string())?;
        if direct.outputs != node.outputs {
            return fail(format!("copy: outputs differ on {input:?}"));
        }
    }

    // MAP protocol at m=2, exhaustively over all 4^6 inputs.
    let m = 2;
    let g = Graph::hub_path(m).map_err(|e| e.to_string())?;
    let p = build_map_edge_protocol(m).map_err(|e| e.to_string())?;
    let sim = simulate_edge_with_node(&p, &g);
    if sim.rounds != 4 {
        return fail("map: simulated round count != 4");
    }
    if sim.memory > g.max_degree() * p.memory {
        return fail(format!("map: {} bits > degree * B", sim.memory));
    }
    for input in all_inputs(4, g.num_edges()) {
        let direct = run_edge_protocol(&p, &g, &input).map_err(|e| e.to_string())?;
        let node = run_node_protocol(&sim, &g, &input).map_err(|e| e.to_string())?;
        if direct.outputs != node.outputs {
            return fail(format!("map: outputs differ on {input:?}"));
        }
    }
    Ok(format!(
        "copy (2 rounds, {} bits) and map (4 rounds, {} bits) match exhaustively",
        3, sim.memory
    ))
}

// Criterion 7: the symmetric node simulation has T+1 rounds and matches the
// counting protocol (m=2) and the copy protocol (star n=3) exhaustively.
fn check_symmetric_simulation() -> Check {
    let g = Graph::star(3).map_err(|e| e.to_string())?;
    let p = copy_or_symmetric_edge_protocol();
    let sim = symmetric_edge_to_node(&p, StateMode::Unbounded).map_err(|e| e.to_string())?;
    if sim.rounds != p.rounds + 1 {
        return fail("copy: simulated round count != T+1");
    }
    for input in all_inputs(2, g.num_edges()) {
        let direct = run_symmetric_edge_protocol(&p, &g, &input).map_err(|e| e.to_string())?;
        let node = run_symmetric_node_protocol(&sim, &g, &input).map_err(|e| e.to_string())?;
        if direct.outputs != node.outputs {
            return fail(format!("copy: outputs differ on {input:?}"));
        }
    }

    let m = 2;
    let g = Graph::depth2_tree(m).map_err(|e| e.to_string())?;
    let p = build_counting_edge_protocol(m).map_err(|e| e.to_string())?;
    let sim = symmetric_edge_to_node(&p, StateMode::Unbounded).map_err(|e| e.to_string())?;
    if sim.rounds != p.rounds + 1 {
        return fail("counting: simulated round count != T+1");
    }
    for input in all_inputs(2, g.num_edges()) {
        let direct = run_symmetric_edge_protocol(&p, &g, &input).map_err(|e| e.to_string())?;
        let node = run_symmetric_node_protocol(&sim, &g, &input).map_err(|e| e.to_string())?;
        if direct.outputs != node.outputs {
            return fail(format!("counting: outputs differ on {input:?}"));
        }
    }
    Ok("copy (T+1 = 2) and counting (T+1 = 4) match exhaustively".into())
}

// Criterion 8: BP marginals match the brute-force oracle within 1e-9 on 100
// random trees plus the fixed path and binary tree; the directed node DP
// matches BP within 1e-12 and is root-invariant within 1e-12.
fn check_bp_marginals() -> Check {
    let mut worst_bp = 0.0f64;
    let mut worst_dp = 0.0f64;
    let mut worst_root = 0.0f64;
    let mut models = Vec::new();
    for i in 0..100u64 {
        let mut ctx = rng::stream(8000, i);
        let n = 3 + rng::uniform(&mut ctx, 10); // 3..=12
        let g = Graph::random_tree(n, 8100 + i).map_err(|e| e.to_string())?;
        models.push(g);
    }
    models.push(Graph::path(10).map_err(|e| e.to_string())?);
    models.push(complete_binary_tree(3).map_err(|e| e.to_string())?);

    for (i, g) in models.into_iter().enumerate() {
        let mut field_rng = rng::stream(8200, i as u64);
        let h: Vec<f64> = (0..g.num_vertices())
            .map(|_| rng::standard_normal(&mut field_rng))
            .collect();
        let model = IsingModel::unit_couplings(g, h).map_err(|e| e.to_string())?;
        let bp = bp_marginals(&model).map_err(|e| e.to_string())?;
        let oracle = exact_marginals_bruteforce(&model).map_err(|e| e.to_string())?;
        worst_bp = worst_bp.max(max_abs_diff(&bp, &oracle));

        let reference = directed_node_dp(&model, 0).map_err(|e| e.to_string())?;
        worst_dp = worst_dp.max(max_abs_diff(&bp, &reference));
        for root in 1..model.graph().num_vertices() {
            let other = directed_node_dp(&model, root).map_err(|e| e.to_string())?;
            worst_root = worst_root.max(max_abs_diff(&reference, &other));
        }
    }
    if worst_bp > 1e-9 {
        return fail(format!("BP vs brute force: {worst_bp:e} > 1e-9"));
    }
    if worst_dp > 1e-12 {
        return fail(format!("node DP vs BP: {worst_dp:e} > 1e-12"));
    }
    if worst_root > 1e-12 {
        return fail(format!("root variance: {worst_root:e} > 1e-12"));
    }
    Ok(format!(
        "102 trees: BP err {worst_bp:.2e}, DP err {worst_dp:.2e}, root err {worst_root:.2e}"
    ))
}

// Criterion 9: edge forward pass == node forward pass on the line graph, bit
// for bit, on 20 random graphs; zero weights are the identity at depths 1-10.
fn check_gcn_identity() -> Check {
    for i in 0..20u64 {
        let g = random_graph(6 + (i % 4) as usize, i);
        let mut rng = rng::stream(9100, i);
        let stack = GcnStack::random(4, 1 + (i % 4) as usize, &mut rng);
        let h0 = random_features(g.num_edges(), 4, 9200 + i);
        let direct = edge_gcn_forward(&g, &stack, &h0).map_err(|e| e.to_string())?;
        let via_line = node_gcn_forward(&g.line_graph(), &stack, &h0).map_err(|e| e.to_string())?;
        if direct != via_line {
            return fail(format!("graph {i}: edge route != line-graph route"));
        }
    }
    let g = Graph::star(5).map_err(|e| e.to_string())?;
    for depth in 1..=10 {
        let stack = GcnStack::zeros(3, depth);
        let h0 = random_features(g.num_vertices(), 3, 9300 + depth as u64);
        if node_gcn_forward(&g, &stack, &h0).map_err(|e| e.to_string())? != h0 {
            return fail(format!("zero weights not the identity at depth {depth}"));
        }
        let e0 = random_features(g.num_edges(), 3, 9400 + depth as u64);
        if edge_gcn_forward(&g, &stack, &e0).map_err(|e| e.to_string())? != e0 {
            return fail(format!(
                "edge zero weights not the identity at depth {depth}"
            ));
        }
    }
    Ok("20 graphs bitwise identical; zero-weight identity holds at depths 1-10".into())
}

// Criterion 10: generators are byte-identical across reruns with one seed,
// and manifests round-trip.
fn check_reproducibility() -> Check {
    let ising_a =
        generate_ising_dataset(Topology::RandomTree { n: 12 }, 3, 21).map_err(|e| e.to_string())?;
    let ising_b =
        generate_ising_dataset(Topology::RandomTree { n: 12 }, 3, 21).map_err(|e| e.to_string())?;
    let a = serde_json::to_string_pretty(&ising_a).map_err(|e| e.to_string())?;
    let b = serde_json::to_string_pretty(&ising_b).map_err(|e| e.to_string())?;
    if a != b {
        return fail("ising dataset differs across reruns");
    }

    let star_a = generate_star_dataset(8, 3, 10, 3, 22).map_err(|e| e.to_string())?;
    let star_b = generate_star_dataset(8, 3, 10, 3, 22).map_err(|e| e.to_string())?;
    let a = serde_json::to_string_pretty(&star_a).map_err(|e| e.to_string())?;
    let b = serde_json::to_string_pretty(&star_b).map_err(|e| e.to_string())?;
    if a != b {
        return fail("star dataset differs across reruns");
    }

    let t1 = Graph::random_tree(16, 5).map_err(|e| e.to_string())?;
    let t2 = Graph::random_tree(16, 5).map_err(|e| e.to_string())?;
    if t1.edges() != t2.edges() {
        return fail("random tree differs across reruns");
    }
    let s = json::graph_to_json_string(&t1);
    let parsed = json::parse_graph(s.as_bytes()).map_err(|e| e.to_string())?;
    if json::graph_to_json_string(&parsed) != s {
        return fail("graph JSON does not round-trip");
    }

    let mut manifest = RunManifest::new(
        "ising dataset",
        serde_json::json!({"topology": "random_tree", "n": 12, "samples": 3}),
        Some(21),
    );
    manifest.record_output("dataset.json", a.as_bytes());
    let round =
        RunManifest::parse(manifest.to_json_string().as_bytes()).map_err(|e| e.to_string())?;
    if round != manifest {
        return fail("manifest does not round-trip");
    }
    Ok("datasets, trees, graph JSON and manifests reproduce byte-identically".into())
}

fn random_features(count: usize, width: usize, seed: u64) -> FeatureMap {
    let mut rng = rng::seeded(seed);
    (0..count)
        .map(|_| (0..width).map(|_| rng::standard_normal(&mut rng)).collect())
        .collect()
}

/// Seeded Erdos-Renyi-style test graph with at least one edge.
fn random_graph(n: usize, seed: u64) -> Graph {
    let mut rng = rng::stream(9000, seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng::uniform(&mut rng, 10) < 4 {
                edges.push((u, v));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    Graph::new(n, edges).expect("generated edges are valid")
}
