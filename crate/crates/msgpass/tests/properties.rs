//! Property tests for the structural invariants: canonical indexing, line
//! graphs, restricted balls, multiset canonicalization, energy equivariance,
//! and trace determinism.

use proptest::prelude::*;

use msgpass::graph::{Graph, VertexSet};
use msgpass::map::{energy, potentials_from_symbols};
use msgpass::protocol::{
    permute_input, random_inputs, run_symmetric_edge_protocol, sample_automorphisms,
    StructuredValue, Symbol,
};
use msgpass::tasks::build_counting_edge_protocol;

/// Arbitrary small graph: a vertex count and an edge subset mask.
fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..9).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let count = pairs.len();
        proptest::collection::vec(any::<bool>(), count).prop_map(move |mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .zip(&mask)
                .filter(|(_, &keep)| keep)
                .map(|(&e, _)| e)
                .collect();
            Graph::new(n, edges).expect("subset of the complete graph is valid")
        })
    })
}

proptest! {
    #[test]
    fn line_graph_degrees_match_edge_neighborhoods(g in small_graph()) {
        let lg = g.line_graph();
        prop_assert_eq!(lg.num_vertices(), g.num_edges());
        for e in 0..g.num_edges() {
            prop_assert_eq!(lg.degree(e), g.edge_neighbors(e).len() - 1);
        }
    }

    #[test]
    fn edge_ids_are_invariant_under_input_order(
        g in small_graph(),
        seed in any::<u64>(),
    ) {
        let mut edges = g.edges().to_vec();
        // Deterministic shuffle from the seed, with endpoint swaps.
        let mut rng = msgpass::rng::seeded(seed);
        for i in (1..edges.len()).rev() {
            let j = msgpass::rng::uniform(&mut rng, i + 1);
            edges.swap(i, j);
        }
        let flipped: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (v, u)).collect();
        let rebuilt = Graph::new(g.num_vertices(), flipped).unwrap();
        prop_assert_eq!(rebuilt.edges(), g.edges());
    }

    #[test]
    fn restricted_ball_is_monotone_and_defaults_to_bfs(
        g in small_graph(),
        start in 0usize..8,
    ) {
        let start = start % g.num_vertices();
        let s = VertexSet::new([start]);
        let none = VertexSet::empty();
        let mut prev = 0;
        for r in 0..g.num_vertices() {
            let ball = g.restricted_ball(&none, &s, r).unwrap();
            prop_assert!(ball.len() >= prev);
            prev = ball.len();
        }
        // With an empty K and a big radius, the ball is the whole component.
        let full = g.restricted_ball(&none, &s, g.num_vertices()).unwrap();
        for v in full.iter() {
            prop_assert!(v < g.num_vertices());
        }
        prop_assert!(full.contains(start));
    }

    #[test]
    fn multiset_equality_ignores_insertion_order(
        items in proptest::collection::vec(0i64..50, 0..12),
        rot in 0usize..12,
    ) {
        let values: Vec<StructuredValue> = items.iter().map(|&k| StructuredValue::Int(k)).collect();
        let mut rotated = values.clone();
        if !rotated.is_empty() {
            let by = rot % rotated.len();
            rotated.rotate_left(by);
        }
        prop_assert_eq!(
            StructuredValue::multiset(values),
            StructuredValue::multiset(rotated)
        );
    }

    #[test]
    fn energy_is_automorphism_invariant(
        seed in any::<u64>(),
        mask in 0u32..32,
    ) {
        // Joint permutation of inputs and assignment preserves the energy.
        let g = Graph::hub_path(2).unwrap();
        let input = &random_inputs(4, g.num_edges(), 1, seed)[0];
        let potentials = potentials_from_symbols(input).unwrap();
        let x: Vec<bool> = (0..g.num_vertices()).map(|v| mask >> v & 1 == 1).collect();
        let base = energy(&g, &potentials, &x).unwrap();
        for perm in sample_automorphisms(&g, 4, seed) {
            let permuted_input = permute_input(&g, &perm, input).unwrap();
            let permuted_potentials = potentials_from_symbols(&permuted_input).unwrap();
            let mut permuted_x = vec![false; x.len()];
            for (v, &b) in x.iter().enumerate() {
                permuted_x[perm[v]] = b;
            }
            prop_assert_eq!(energy(&g, &permuted_potentials, &permuted_x).unwrap(), base);
        }
    }

    #[test]
    fn symmetric_runs_are_deterministic(seed in any::<u64>()) {
        let m = 2;
        let g = Graph::depth2_tree(m).unwrap();
        let p = build_counting_edge_protocol(m).unwrap();
        let input: Vec<Symbol> = random_inputs(2, g.num_edges(), 1, seed).remove(0);
        let a = run_symmetric_edge_protocol(&p, &g, &input).unwrap();
        let b = run_symmetric_edge_protocol(&p, &g, &input).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
    }
}
