//! Residual GCN forward passes, over nodes and over edges, and the planted
//! star-graph regression dataset.
//!
//! One layer: h'_x = h_x + sigma( W * MEAN( h_y : y adjacent to x, y != x ) ),
//! with the mean of an empty neighborhood defined as the zero vector. The
//! edge variant runs the identical update over edge neighborhoods M_G(e)
//! minus e; it equals the node variant on the line graph, and the tests pin
//! that identity bit for bit.

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::rng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nonlinearity {
    Tanh,
}

impl Nonlinearity {
    fn apply(self, x: f64) -> f64 {
        match self {
            Nonlinearity::Tanh => x.tanh(),
        }
    }
}

/// A stack of residual layers of one width: square weight matrices stored
/// row-major, one per layer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GcnStack {
    pub width: usize,
    pub sigma: Nonlinearity,
    pub weights: Vec<Vec<f64>>,
}

impl GcnStack {
    pub fn new(width: usize, sigma: Nonlinearity, weights: Vec<Vec<f64>>) -> Result<Self> {
        for (l, w) in weights.iter().enumerate() {
            if w.len() != width * width {
                return Err(Error::ShapeMismatch(format!(
                    "layer {l} has {} entries, expected {}",
                    w.len(),
                    width * width
                )));
            }
            if w.iter().any(|x| !x.is_finite()) {
                return Err(Error::Format("non-finite weight".into()));
            }
        }
        Ok(GcnStack {
            width,
            sigma,
            weights,
        })
    }

    pub fn zeros(width: usize, depth: usize) -> Self {
        GcnStack {
            width,
            sigma: Nonlinearity::Tanh,
            weights: vec![vec![0.0; width * width]; depth],
        }
    }

    pub fn depth(&self) -> usize {
        self.weights.len()
    }

    /// Random stack with i.i.d. N(0, 1/width) entries.
    pub fn random(width: usize, depth: usize, rng: &mut rng::Rng) -> Self {
        let scale = (1.0 / width as f64).sqrt();
        let weights = (0..depth)
            .map(|_| {
                (0..width * width)
                    .map(|_| scale * rng::standard_normal(rng))
                    .collect()
            })
            .collect();
        GcnStack {
            width,
            sigma: Nonlinearity::Tanh,
            weights,
        }
    }
}

/// One feature vector per node (or per edge id), all of one width.
pub type FeatureMap = Vec<Vec<f64>>;

fn check_features(features: &FeatureMap, count: usize, width: usize) -> Result<()> {
    if features.len() != count {
        return Err(Error::ShapeMismatch(format!(
            "{} feature vectors for {} processors",
            features.len(),
            count
        )));
    }
    for f in features {
        if f.len() != width {
            return Err(Error::ShapeMismatch(format!(
                "feature width {} does not match stack width {width}",
                f.len()
            )));
        }
        if f.iter().any(|x| !x.is_finite()) {
            return Err(Error::Format("non-finite feature".into()));
        }
    }
    Ok(())
}

/// Mean over the listed ids (excluding `own`), matvec, nonlinearity, residual
/// add. The neighbor sum runs in increasing id order so the node and edge
/// routes produce bitwise-identical floats.
fn layer_update(
    stack: &GcnStack,
    layer: usize,
    features: &FeatureMap,
    own: usize,
    neighborhood: &[usize],
) -> Vec<f64> {
    let d = stack.width;
    let mut mean = vec![0.0; d];
    let mut count = 0usize;
    for &y in neighborhood {
        if y == own {
            continue;
        }
        for (m, x) in mean.iter_mut().zip(&features[y]) {
            *m += x;
        }
        count += 1;
    }
    if count > 0 {
        for m in &mut mean {
            *m /= count as f64;
        }
    }
    let w = &stack.weights[layer];
    let mut out = features[own].clone();
    for (r, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, m) in mean.iter().enumerate() {
            acc += w[r * d + c] * m;
        }
        *o += stack.sigma.apply(acc);
    }
    out
}

/// Forward pass over the vertices of `g`.
pub fn node_gcn_forward(g: &Graph, stack: &GcnStack, h0: &FeatureMap) -> Result<FeatureMap> {
    check_features(h0, g.num_vertices(), stack.width)?;
    let mut h = h0.clone();
    for layer in 0..stack.depth() {
        let prev = h.clone();
        for (v, slot) in h.iter_mut().enumerate() {
            *slot = layer_update(stack, layer, &prev, v, g.neighbors(v));
        }
    }
    Ok(h)
}

/// Forward pass over the edges of `g`: message passing over the edge
/// neighborhoods M_G(e) minus e, i.e. over the line graph.
pub fn edge_gcn_forward(g: &Graph, stack: &GcnStack, h0: &FeatureMap) -> Result<FeatureMap> {
    check_features(h0, g.num_edges(), stack.width)?;
    let mut h = h0.clone();
    for layer in 0..stack.depth() {
        let prev = h.clone();
        for (e, slot) in h.iter_mut().enumerate() {
            *slot = layer_update(stack, layer, &prev, e, g.edge_neighbors(e));
        }
    }
    Ok(h)
}

/// Edge features as the concatenation of the endpoint node features, in
/// canonical endpoint order (u < v), so the width doubles.
pub fn init_edge_features_from_nodes(g: &Graph, node_features: &FeatureMap) -> Result<FeatureMap> {
    if node_features.len() != g.num_vertices() {
        return Err(Error::ShapeMismatch("one feature vector per vertex".into()));
    }
    Ok(g.edges()
        .iter()
        .map(|&(u, v)| {
            let mut f = node_features[u].clone();
            f.extend_from_slice(&node_features[v]);
            f
        })
        .collect())
}

/// Root mean squared error over all vectors and coordinates.
pub fn rmse(predictions: &FeatureMap, labels: &FeatureMap) -> Result<f64> {
    if predictions.len() != labels.len() {
        return Err(Error::ShapeMismatch(
            "prediction/label counts differ".into(),
        ));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for (p, l) in predictions.iter().zip(labels) {
        if p.len() != l.len() {
            return Err(Error::ShapeMismatch(
                "prediction/label widths differ".into(),
            ));
        }
        for (x, y) in p.iter().zip(l) {
            total += (x - y) * (x - y);
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::ShapeMismatch("empty prediction set".into()));
    }
    Ok((total / count as f64).sqrt())
}

// ---------------------------------------------------------------------------
// Planted star dataset
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StarSample {
    /// One input feature vector per leaf.
    pub x: Vec<Vec<f64>>,
    /// One label vector per leaf: the planted model's final edge embedding.
    pub y: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlantedModel {
    pub depth: usize,
    pub width: usize,
    pub sigma: Nonlinearity,
    /// Row-major layer matrices; recorded so the task is reproducible.
    pub weights: Vec<Vec<f64>>,
    /// Weight entries are N(0, 1/width); the standard deviation is recorded.
    pub weight_std: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StarDataset {
    pub n_leaves: usize,
    pub planted: PlantedModel,
    pub seed: u64,
    pub samples: Vec<StarSample>,
}

/// Generates the planted star-graph regression dataset: leaf features drawn
/// i.i.d. standard normal, labels produced by a fixed randomly-weighted
/// edge GCN run on the star with initial edge embedding x_i on edge {0, v_i}.
/// The planted weights come from the stream (seed, 0); sample i from the
/// stream (seed, 1 + i).
pub fn generate_star_dataset(
    n_leaves: usize,
    depth: usize,
    width: usize,
    n_samples: usize,
    seed: u64,
) -> Result<StarDataset> {
    if width == 0 {
        return Err(Error::InvalidParameter("width must be >= 1".into()));
    }
    let g = Graph::star(n_leaves)?;
    let mut weight_rng = rng::stream(seed, 0);
    let stack = GcnStack::random(width, depth, &mut weight_rng);

    let mut samples = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let mut rng = rng::stream(seed, 1 + i as u64);
        let x: Vec<Vec<f64>> = (0..n_leaves)
            .map(|_| (0..width).map(|_| rng::standard_normal(&mut rng)).collect())
            .collect();
        // Edge {0, v_i} has id i-1; the leaf order and edge order agree.
        let y = edge_gcn_forward(&g, &stack, &x)?;
        samples.push(StarSample { x, y });
    }
    Ok(StarDataset {
        n_leaves,
        planted: PlantedModel {
            depth,
            width,
            sigma: stack.sigma,
            weights: stack.weights.clone(),
            weight_std: (1.0 / width as f64).sqrt(),
        },
        seed,
        samples,
    })
}

/// The (leaves, depth) grid of the published planted-model experiments.
pub fn star_dataset_presets() -> Vec<(usize, usize)> {
    let mut presets = Vec::new();
    for &n_leaves in &[16usize, 32, 64] {
        for &depth in &[1usize, 3, 5] {
            presets.push((n_leaves, depth));
        }
    }
    presets
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_features(count: usize, width: usize, seed: u64) -> FeatureMap {
        let mut rng = rng::seeded(seed);
        (0..count)
            .map(|_| (0..width).map(|_| rng::standard_normal(&mut rng)).collect())
            .collect()
    }

    #[test]
    fn zero_weights_are_the_identity() {
        let g = Graph::star(4).unwrap();
        for depth in 1..=10 {
            let stack = GcnStack::zeros(3, depth);
            let h0 = random_features(g.num_vertices(), 3, 1);
            assert_eq!(node_gcn_forward(&g, &stack, &h0).unwrap(), h0);
            let e0 = random_features(g.num_edges(), 3, 2);
            assert_eq!(edge_gcn_forward(&g, &stack, &e0).unwrap(), e0);
        }
    }

    #[test]
    fn isolated_node_keeps_its_feature() {
        let g = Graph::new(2, vec![]).unwrap();
        let mut rng = rng::seeded(3);
        let stack = GcnStack::random(2, 3, &mut rng);
        let h0 = random_features(2, 2, 4);
        // Empty neighborhood means a zero mean, and tanh(W*0) = 0.
        assert_eq!(node_gcn_forward(&g, &stack, &h0).unwrap(), h0);
    }

    #[test]
    fn edge_forward_equals_node_forward_on_line_graph() {
        for seed in 0..5 {
            let g = Graph::random_tree(8, seed).unwrap();
            let mut rng = rng::seeded(seed + 10);
            let stack = GcnStack::random(4, 3, &mut rng);
            let h0 = random_features(g.num_edges(), 4, seed + 20);
            let direct = edge_gcn_forward(&g, &stack, &h0).unwrap();
            let via_line = node_gcn_forward(&g.line_graph(), &stack, &h0).unwrap();
            assert_eq!(direct, via_line, "seed {seed}");
        }
    }

    #[test]
    fn forward_pass_is_permutation_equivariant() {
        let g = Graph::star(5).unwrap();
        let mut rng = rng::seeded(7);
        let stack = GcnStack::random(3, 2, &mut rng);
        let h0 = random_features(g.num_vertices(), 3, 8);
        let out = node_gcn_forward(&g, &stack, &h0).unwrap();

        // Swap leaves 1 and 2 (an automorphism of the star).
        let perm = [0usize, 2, 1, 3, 4, 5];
        let permuted_h0: FeatureMap = (0..6)
            .map(|v| h0[perm.iter().position(|&p| p == v).unwrap()].clone())
            .collect();
        let permuted_out = node_gcn_forward(&g, &stack, &permuted_h0).unwrap();
        for v in 0..6 {
            let diff: f64 = out[v]
                .iter()
                .zip(&permuted_out[perm[v]])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(diff == 0.0, "vertex {v}");
        }
    }

    #[test]
    fn edge_feature_concatenation() {
        let g = Graph::path(3).unwrap();
        let node_features = vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]];
        let edges = init_edge_features_from_nodes(&g, &node_features).unwrap();
        assert_eq!(edges[0], vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(edges[1], vec![3.0, 4.0, 5.0, 6.0]);
        // The concatenation depends on the canonical endpoint order.
        assert_ne!(edges[0], vec![3.0, 4.0, 1.0, 2.0]);
    }

    #[test]
    fn rmse_values() {
        let a = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        assert_eq!(rmse(&a, &a).unwrap(), 0.0);
        let shifted: FeatureMap = a
            .iter()
            .map(|v| v.iter().map(|x| x + 0.5).collect())
            .collect();
        assert!((rmse(&a, &shifted).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(rmse(&vec![vec![0.0]], &vec![vec![3.0]]).unwrap(), 3.0);
    }

    #[test]
    fn star_dataset_zero_depth_is_identity() {
        let ds = generate_star_dataset(4, 0, 3, 2, 9).unwrap();
        for sample in &ds.samples {
            assert_eq!(sample.x, sample.y);
        }
    }

    #[test]
    fn star_dataset_is_deterministic() {
        let a = generate_star_dataset(6, 3, 10, 3, 42).unwrap();
        let b = generate_star_dataset(6, 3, 10, 3, 42).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let c = generate_star_dataset(6, 3, 10, 3, 43).unwrap();
        assert_ne!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&c).unwrap()
        );
    }

    #[test]
    fn presets_cover_the_grid() {
        assert_eq!(star_dataset_presets().len(), 9);
    }
}
