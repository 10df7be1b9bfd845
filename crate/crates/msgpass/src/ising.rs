//! Ising models on trees: brute-force marginals, belief propagation, the
//! directed two-pass node dynamic program, and seeded dataset generation.
//!
//! The model is p(x) proportional to exp( sum_E J_e x_u x_v + sum_V h_i x_i )
//! over x in {-1,+1}^V. On trees the tanh/atanh message recursion computes
//! the exact marginals E[x_i].

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::rng;
use crate::{Error, Result};

/// atanh arguments are clamped to this magnitude to keep huge couplings from
/// producing infinities; inactive in the dataset regime (J = 1, moderate h).
const ATANH_CLAMP: f64 = 1.0 - 1e-12;

pub const MARGINAL_BRUTE_FORCE_CAP: usize = 20;

#[derive(Debug, Clone)]
pub struct IsingModel {
    graph: Graph,
    j: Vec<f64>,
    h: Vec<f64>,
}

impl IsingModel {
    pub fn new(graph: Graph, j: Vec<f64>, h: Vec<f64>) -> Result<Self> {
        if j.len() != graph.num_edges() {
            return Err(Error::ShapeMismatch(format!(
                "{} couplings for {} edges",
                j.len(),
                graph.num_edges()
            )));
        }
        if h.len() != graph.num_vertices() {
            return Err(Error::ShapeMismatch(format!(
                "{} fields for {} vertices",
                h.len(),
                graph.num_vertices()
            )));
        }
        if j.iter().chain(h.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Format("couplings and fields must be finite".into()));
        }
        Ok(IsingModel { graph, j, h })
    }

    /// Uniform couplings J = 1 with the given fields.
    pub fn unit_couplings(graph: Graph, h: Vec<f64>) -> Result<Self> {
        let j = vec![1.0; graph.num_edges()];
        Self::new(graph, j, h)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn coupling(&self, e: usize) -> f64 {
        self.j[e]
    }

    pub fn field(&self, v: usize) -> f64 {
        self.h[v]
    }

    pub fn couplings(&self) -> &[f64] {
        &self.j
    }

    pub fn fields(&self) -> &[f64] {
        &self.h
    }
}

/// Messages nu_{i->j} on directed edges, each in [-1, 1]. For edge id e with
/// endpoints (u, v), slot 2e holds u->v and slot 2e+1 holds v->u.
#[derive(Debug, Clone, PartialEq)]
pub struct BpMessages {
    values: Vec<f64>,
}

impl BpMessages {
    fn zeros(g: &Graph) -> Self {
        BpMessages {
            values: vec![0.0; 2 * g.num_edges()],
        }
    }

    fn slot(g: &Graph, from: usize, to: usize) -> usize {
        let e = g.edge_id(from, to).expect("message along an edge");
        let (u, _) = g.endpoints(e);
        2 * e + (from != u) as usize
    }

    pub fn get(&self, g: &Graph, from: usize, to: usize) -> f64 {
        self.values[Self::slot(g, from, to)]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn contribution(j: f64, nu: f64) -> f64 {
    let arg = (j.tanh() * nu).clamp(-ATANH_CLAMP, ATANH_CLAMP);
    arg.atanh()
}

/// Exact marginals by summation over all 2^|V| states, with a log-sum-exp
/// normalization. Works on any graph with at most `MARGINAL_BRUTE_FORCE_CAP`
/// vertices.
pub fn exact_marginals_bruteforce(model: &IsingModel) -> Result<Vec<f64>> {
    let g = model.graph();
    let n = g.num_vertices();
    if n > MARGINAL_BRUTE_FORCE_CAP {
        return Err(Error::CapExceeded {
            size: n,
            cap: MARGINAL_BRUTE_FORCE_CAP,
        });
    }
    let spins = |mask: u64, v: usize| if mask >> v & 1 == 1 { 1.0 } else { -1.0 };
    let mut log_weights = Vec::with_capacity(1 << n);
    let mut max_log = f64::NEG_INFINITY;
    for mask in 0..1u64 << n {
        let mut lw = 0.0;
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            lw += model.coupling(e) * spins(mask, u) * spins(mask, v);
        }
        for v in 0..n {
            lw += model.field(v) * spins(mask, v);
        }
        max_log = max_log.max(lw);
        log_weights.push(lw);
    }
    let mut z = 0.0;
    let mut sums = vec![0.0; n];
    for (mask, lw) in log_weights.iter().enumerate() {
        let w = (lw - max_log).exp();
        z += w;
        for (v, sum) in sums.iter_mut().enumerate() {
            *sum += spins(mask as u64, v) * w;
        }
    }
    Ok(sums.into_iter().map(|s| s / z).collect())
}

/// Synchronous belief propagation from all-zero messages:
/// nu'_{i->j} = tanh( h_i + sum over k in N(i) minus j of
/// atanh( tanh(J_{ik}) nu_{k->i} ) ). On a tree the messages are exact fixed
/// points after diameter-many iterations.
pub fn bp_run(model: &IsingModel, num_iters: usize) -> Result<BpMessages> {
    if num_iters == 0 {
        return Err(Error::InvalidParameter(
            "bp_run needs num_iters >= 1".into(),
        ));
    }
    let g = model.graph();
    let mut messages = BpMessages::zeros(g);
    for _ in 0..num_iters {
        let mut next = BpMessages::zeros(g);
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            next.values[2 * e] = update_message(model, &messages, u, v);
            next.values[2 * e + 1] = update_message(model, &messages, v, u);
        }
        messages = next;
    }
    Ok(messages)
}

fn update_message(model: &IsingModel, messages: &BpMessages, from: usize, to: usize) -> f64 {
    let g = model.graph();
    let mut field = model.field(from);
    for &k in g.neighbors(from) {
        if k == from || k == to {
            continue;
        }
        let e = g.edge_id(k, from).expect("neighbor edge");
        field += contribution(model.coupling(e), messages.get(g, k, from));
    }
    field.tanh()
}

/// Per-vertex marginals from converged messages:
/// E[x_i] = tanh( h_i + sum over k in N(i) of atanh( tanh(J_{ik}) nu_{k->i} ) ).
pub fn marginals_from_messages(model: &IsingModel, messages: &BpMessages) -> Vec<f64> {
    let g = model.graph();
    (0..g.num_vertices())
        .map(|i| {
            let mut field = model.field(i);
            for &k in g.neighbors(i) {
                if k == i {
                    continue;
                }
                let e = g.edge_id(k, i).expect("neighbor edge");
                field += contribution(model.coupling(e), messages.get(g, k, i));
            }
            field.tanh()
        })
        .collect()
}

/// Belief propagation run to exactness on a tree (2 * diameter iterations,
/// at least one) followed by the marginal readout.
pub fn bp_marginals(model: &IsingModel) -> Result<Vec<f64>> {
    let d = model.graph().tree_diameter()?;
    let messages = bp_run(model, (2 * d).max(1))?;
    Ok(marginals_from_messages(model, &messages))
}

/// The directed node-state dynamic program: one upward pass computing, per
/// vertex, the message it sends toward the root (the effective field of its
/// subtree), one downward pass computing the message it receives from its
/// parent, then the same marginal readout as belief propagation. Exact on
/// trees for any root; arithmetic matches `bp_marginals` term for term.
pub fn directed_node_dp(model: &IsingModel, root: usize) -> Result<Vec<f64>> {
    let g = model.graph();
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    let n = g.num_vertices();
    if root >= n {
        return Err(Error::InvalidParameter(format!("root {root} out of range")));
    }

    // BFS order from the root.
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in g.neighbors(v) {
            if w != v && !seen[w] {
                seen[w] = true;
                parent[w] = Some(v);
                queue.push_back(w);
            }
        }
    }

    // Upward: up[v] = nu_{v -> parent(v)}, computed leaves first. Neighbors
    // are scanned in sorted order so each sum matches the BP update exactly.
    let mut up = vec![0.0; n];
    for &v in order.iter().rev() {
        let mut field = model.field(v);
        for &k in g.neighbors(v) {
            if k == v || parent[v] == Some(k) {
                continue;
            }
            let e = g.edge_id(k, v).expect("child edge");
            field += contribution(model.coupling(e), up[k]);
        }
        up[v] = field.tanh();
    }

    // Downward: down[v] = nu_{parent(v) -> v}, computed root first.
    let mut down = vec![0.0; n];
    for &v in &order {
        let Some(p) = parent[v] else { continue };
        let mut field = model.field(p);
        for &k in g.neighbors(p) {
            if k == p || k == v {
                continue;
            }
            let e = g.edge_id(k, p).expect("neighbor edge");
            let incoming = if parent[p] == Some(k) { down[p] } else { up[k] };
            field += contribution(model.coupling(e), incoming);
        }
        down[v] = field.tanh();
    }

    Ok((0..n)
        .map(|v| {
            let mut field = model.field(v);
            for &k in g.neighbors(v) {
                if k == v {
                    continue;
                }
                let e = g.edge_id(k, v).expect("neighbor edge");
                let incoming = if parent[v] == Some(k) { down[v] } else { up[k] };
                field += contribution(model.coupling(e), incoming);
            }
            field.tanh()
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Dataset generation
// ---------------------------------------------------------------------------

/// Tree topologies of the marginal-regression datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Topology {
    /// Complete binary tree with `depth` edge levels (size 2^(depth+1) - 1).
    BinaryTree {
        depth: usize,
    },
    Path {
        n: usize,
    },
    RandomTree {
        n: usize,
    },
}

impl Topology {
    pub fn build(&self, seed: u64) -> Result<Graph> {
        match *self {
            Topology::BinaryTree { depth } => complete_binary_tree(depth),
            Topology::Path { n } => Graph::path(n),
            Topology::RandomTree { n } => Graph::random_tree(n, seed),
        }
    }
}

/// Complete binary tree in heap order: vertex k has children 2k+1 and 2k+2.
pub fn complete_binary_tree(depth: usize) -> Result<Graph> {
    if depth > 20 {
        return Err(Error::InvalidParameter("binary tree too deep".into()));
    }
    let n = (1usize << (depth + 1)) - 1;
    let internal = (1usize << depth) - 1;
    let mut edges = Vec::with_capacity(n - 1);
    for k in 0..internal {
        edges.push((k, 2 * k + 1));
        edges.push((k, 2 * k + 2));
    }
    Graph::new(n, edges)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsingSample {
    pub h: Vec<f64>,
    pub marginals: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsingDataset {
    pub topology: Topology,
    pub seed: u64,
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub samples: Vec<IsingSample>,
}

/// Generates the marginal-regression dataset: couplings fixed at J = 1,
/// fields drawn i.i.d. standard normal per vertex (Box-Muller over the seeded
/// generator; sample i uses the stream derived from (seed, 1 + i)), labels
/// computed by belief propagation and cross-checked against the brute-force
/// oracle whenever the tree is small enough.
pub fn generate_ising_dataset(
    topology: Topology,
    n_samples: usize,
    seed: u64,
) -> Result<IsingDataset> {
    let graph = topology.build(seed)?;
    if !graph.is_tree() {
        return Err(Error::NotATree);
    }
    let mut samples = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let mut rng = rng::stream(seed, 1 + i as u64);
        let h: Vec<f64> = (0..graph.num_vertices())
            .map(|_| rng::standard_normal(&mut rng))
            .collect();
        let model = IsingModel::unit_couplings(graph.clone(), h.clone())?;
        let marginals = bp_marginals(&model)?;
        if graph.num_vertices() <= MARGINAL_BRUTE_FORCE_CAP {
            let oracle = exact_marginals_bruteforce(&model)?;
            let err = max_abs_diff(&marginals, &oracle);
            if err > 1e-9 {
                return Err(Error::InvalidProtocol(format!(
                    "BP labels disagree with the brute-force oracle by {err:e}"
                )));
            }
        }
        samples.push(IsingSample { h, marginals });
    }
    Ok(IsingDataset {
        topology,
        seed,
        num_vertices: graph.num_vertices(),
        edges: graph.edges().to_vec(),
        samples,
    })
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// The fixed dataset topologies of the published experiments: a complete
/// binary tree of size 31 and paths/random trees of size 30.
pub fn preset_topologies() -> Vec<Topology> {
    vec![
        Topology::BinaryTree { depth: 4 },
        Topology::Path { n: 30 },
        Topology::RandomTree { n: 30 },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree_model(n: usize, seed: u64, field_seed: u64) -> IsingModel {
        let g = Graph::random_tree(n, seed).unwrap();
        let mut rng = rng::seeded(field_seed);
        let h: Vec<f64> = (0..n).map(|_| rng::standard_normal(&mut rng)).collect();
        IsingModel::unit_couplings(g, h).unwrap()
    }

    #[test]
    fn zero_fields_give_zero_marginals() {
        let g = Graph::path(5).unwrap();
        let model = IsingModel::unit_couplings(g, vec![0.0; 5]).unwrap();
        for m in exact_marginals_bruteforce(&model).unwrap() {
            assert!(m.abs() < 1e-12);
        }
        for m in bp_marginals(&model).unwrap() {
            assert!(m.abs() < 1e-12);
        }
    }

    #[test]
    fn two_node_closed_form() {
        // E[x_2] = tanh(J) tanh(h_1) when h_2 = 0.
        let g = Graph::path(2).unwrap();
        let h1 = 0.7;
        let model = IsingModel::new(g, vec![1.0], vec![h1, 0.0]).unwrap();
        let expected = 1.0f64.tanh() * h1.tanh();
        let brute = exact_marginals_bruteforce(&model).unwrap();
        assert!(
            (brute[1] - expected).abs() < 1e-12,
            "{} vs {}",
            brute[1],
            expected
        );
        let bp = bp_marginals(&model).unwrap();
        assert!((bp[1] - expected).abs() < 1e-12);
    }

    #[test]
    fn decoupled_limit_is_tanh_of_field() {
        let g = Graph::path(4).unwrap();
        let h = vec![0.3, -1.1, 0.0, 2.0];
        let model = IsingModel::new(g, vec![0.0; 3], h.clone()).unwrap();
        let brute = exact_marginals_bruteforce(&model).unwrap();
        for (m, hi) in brute.iter().zip(&h) {
            assert!((m - hi.tanh()).abs() < 1e-12);
        }
    }

    #[test]
    fn single_edge_first_message_is_tanh_h() {
        let g = Graph::path(2).unwrap();
        let model = IsingModel::new(g, vec![1.0], vec![0.4, -0.2]).unwrap();
        let messages = bp_run(&model, 1).unwrap();
        assert!((messages.get(model.graph(), 0, 1) - 0.4f64.tanh()).abs() < 1e-15);
        assert!((messages.get(model.graph(), 1, 0) - (-0.2f64).tanh()).abs() < 1e-15);
    }

    #[test]
    fn messages_fix_after_diameter_iterations() {
        for seed in 0..5 {
            let model = tree_model(9, seed, seed + 100);
            let d = model.graph().tree_diameter().unwrap();
            let a = bp_run(&model, d).unwrap();
            let b = bp_run(&model, d + 1).unwrap();
            let drift = max_abs_diff(a.values(), b.values());
            assert!(drift < 1e-14, "seed {seed}: drift {drift:e}");
        }
    }

    #[test]
    fn bp_matches_brute_force_on_random_trees() {
        for seed in 0..20 {
            let n = 3 + (seed as usize % 10);
            let model = tree_model(n, seed, seed + 77);
            let bp = bp_marginals(&model).unwrap();
            let oracle = exact_marginals_bruteforce(&model).unwrap();
            let err = max_abs_diff(&bp, &oracle);
            assert!(err <= 1e-9, "seed {seed}: {err:e}");
        }
    }

    #[test]
    fn directed_dp_matches_bp_and_any_root() {
        for seed in 0..10 {
            let model = tree_model(10, seed, seed + 55);
            let bp = bp_marginals(&model).unwrap();
            let reference = directed_node_dp(&model, 0).unwrap();
            assert!(max_abs_diff(&bp, &reference) <= 1e-12);
            for root in 1..10 {
                let other = directed_node_dp(&model, root).unwrap();
                assert!(max_abs_diff(&reference, &other) <= 1e-12, "root {root}");
            }
        }
    }

    #[test]
    fn directed_dp_rejects_cycles() {
        let g = Graph::complete(3).unwrap();
        let model = IsingModel::unit_couplings(g, vec![0.0; 3]).unwrap();
        assert!(matches!(directed_node_dp(&model, 0), Err(Error::NotATree)));
    }

    #[test]
    fn negating_fields_negates_marginals() {
        let model = tree_model(8, 3, 9);
        let negated = IsingModel::unit_couplings(
            model.graph().clone(),
            model.fields().iter().map(|h| -h).collect(),
        )
        .unwrap();
        let a = bp_marginals(&model).unwrap();
        let b = bp_marginals(&negated).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x + y).abs() <= 1e-12);
        }
    }

    #[test]
    fn single_edge_marginal_monotone_in_field() {
        let g = Graph::path(2).unwrap();
        let mut last = -1.0;
        for k in -10..=10 {
            let h1 = k as f64 / 2.0;
            let model = IsingModel::new(g.clone(), vec![1.0], vec![h1, 0.0]).unwrap();
            let m = exact_marginals_bruteforce(&model).unwrap()[1];
            assert!(m >= last - 1e-12, "h1={h1}");
            last = m;
        }
    }

    #[test]
    fn dataset_is_deterministic_and_bounded() {
        let topo = Topology::RandomTree { n: 12 };
        let a = generate_ising_dataset(topo.clone(), 4, 11).unwrap();
        let b = generate_ising_dataset(topo, 4, 11).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        for sample in &a.samples {
            for m in &sample.marginals {
                assert!(m.abs() <= 1.0);
            }
        }
    }

    #[test]
    fn preset_sizes_match_the_experiments() {
        let sizes: Vec<usize> = preset_topologies()
            .into_iter()
            .map(|t| t.build(0).unwrap().num_vertices())
            .collect();
        assert_eq!(sizes, vec![31, 30, 30]);
    }
}
