//! Empirical equivariance checking.
//!
//! Symmetric protocols are equivariant by construction; this check exists to
//! probe hand-written plain protocols that claim symmetry. For sampled graph
//! automorphisms pi and inputs I it asserts outputs(pi . I) = pi . outputs(I)
//! and reports the first counterexample found.

use super::Symbol;
use crate::graph::{Graph, GraphFamily};
use crate::rng;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct EquivarianceReport {
    pub trials: usize,
    pub counterexample: Option<EquivarianceFailure>,
}

#[derive(Debug, Clone)]
pub struct EquivarianceFailure {
    pub permutation: Vec<usize>,
    pub input: Vec<Symbol>,
    /// A vertex where outputs(pi . I)[pi(v)] != outputs(I)[v].
    pub vertex: usize,
}

impl EquivarianceReport {
    pub fn is_equivariant(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Pushes an input forward along a vertex permutation: the symbol on edge
/// {u, v} moves to edge {pi(u), pi(v)}.
pub fn permute_input(g: &Graph, perm: &[usize], input: &[Symbol]) -> Result<Vec<Symbol>> {
    let mut out = vec![Symbol(0); input.len()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let image = g.edge_id(perm[u], perm[v]).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "permutation is not a graph automorphism: edge ({u},{v}) has no image"
            ))
        })?;
        out[image] = input[e];
    }
    Ok(out)
}

/// Runs the protocol (as an input -> outputs function) on each (permutation,
/// input) pair and compares both orderings.
pub fn check_equivariance(
    g: &Graph,
    run: impl Fn(&[Symbol]) -> Vec<bool>,
    perms: &[Vec<usize>],
    inputs: &[Vec<Symbol>],
) -> Result<EquivarianceReport> {
    let mut trials = 0;
    for perm in perms {
        if perm.len() != g.num_vertices() {
            return Err(Error::ShapeMismatch("permutation length".into()));
        }
        for input in inputs {
            trials += 1;
            let base = run(input);
            let permuted = run(&permute_input(g, perm, input)?);
            for v in 0..g.num_vertices() {
                if permuted[perm[v]] != base[v] {
                    return Ok(EquivarianceReport {
                        trials,
                        counterexample: Some(EquivarianceFailure {
                            permutation: perm.clone(),
                            input: input.clone(),
                            vertex: v,
                        }),
                    });
                }
            }
        }
    }
    Ok(EquivarianceReport {
        trials,
        counterexample: None,
    })
}

/// Samples automorphisms of the constructed graph families:
/// leaf permutations for stars, path swaps for hub-path graphs, subtree and
/// leaf permutations for depth-2 trees, arbitrary permutations for complete
/// graphs. Custom graphs and random trees get the identity only.
pub fn sample_automorphisms(g: &Graph, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = rng::seeded(seed);
    let n = g.num_vertices();
    let identity: Vec<usize> = (0..n).collect();
    let mut perms = Vec::with_capacity(count);
    for _ in 0..count {
        let perm = match *g.family() {
            GraphFamily::Star { n: leaves } => {
                let sigma = rng::permutation(&mut rng, leaves);
                let mut p = vec![0usize; n];
                for (i, &s) in sigma.iter().enumerate() {
                    p[1 + i] = 1 + s;
                }
                p
            }
            GraphFamily::Complete { .. } => rng::permutation(&mut rng, n),
            GraphFamily::HubPath { m } => {
                // Permute whole paths; vertex (i, j) = 1 + (j-1)m + (i-1).
                let sigma = rng::permutation(&mut rng, m);
                let mut p = vec![0usize; n];
                for j in 0..m {
                    for i in 0..m {
                        p[1 + j * m + i] = 1 + sigma[j] * m + i;
                    }
                }
                p
            }
            GraphFamily::Depth2Tree { m } => {
                // Permute subtrees, then leaves within each subtree.
                let sigma = rng::permutation(&mut rng, m);
                let mut p = vec![0usize; n];
                for u in 0..m {
                    p[1 + u] = 1 + sigma[u];
                    let tau = rng::permutation(&mut rng, m);
                    for j in 0..m {
                        // leaf (u+1, j+1) has id m + u*m + (j+1)
                        p[1 + m + u * m + j] = 1 + m + sigma[u] * m + tau[j];
                    }
                }
                p
            }
            GraphFamily::RandomTree { .. } | GraphFamily::Custom => identity.clone(),
        };
        perms.push(perm);
    }
    perms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::edge::copy_or_edge_protocol;
    use crate::protocol::{random_inputs, run_edge_protocol};

    #[test]
    fn sampled_permutations_are_automorphisms() {
        for g in [
            Graph::star(5).unwrap(),
            Graph::hub_path(3).unwrap(),
            Graph::depth2_tree(3).unwrap(),
            Graph::complete(5).unwrap(),
        ] {
            for perm in sample_automorphisms(&g, 10, 5) {
                for &(u, v) in g.edges() {
                    assert!(g.edge_id(perm[u], perm[v]).is_some());
                }
            }
        }
    }

    #[test]
    fn copy_or_protocol_is_equivariant() {
        let g = Graph::star(4).unwrap();
        let p = copy_or_edge_protocol();
        let perms = sample_automorphisms(&g, 5, 1);
        let inputs = random_inputs(2, g.num_edges(), 10, 2);
        let report = check_equivariance(
            &g,
            |input| run_edge_protocol(&p, &g, input).unwrap().outputs,
            &perms,
            &inputs,
        )
        .unwrap();
        assert!(report.is_equivariant());
    }

    #[test]
    fn identity_protocol_is_equivariant() {
        let g = Graph::depth2_tree(2).unwrap();
        let report = check_equivariance(
            &g,
            |_| vec![false; g.num_vertices()],
            &sample_automorphisms(&g, 5, 3),
            &random_inputs(2, g.num_edges(), 5, 4),
        )
        .unwrap();
        assert!(report.is_equivariant());
    }
}
