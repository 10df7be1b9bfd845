//! Node message-passing protocols with bounded bit-string states.
//!
//! A protocol is a rule invoked per (round, vertex). The rule sees the
//! previous-round states of the closed neighborhood N_G(v) and the input
//! symbols on the incident edges M_G(v), and must emit exactly B bits. The
//! output of vertex v is the first bit of its final state.

use std::sync::Arc;

use super::{BitState, ExecutionTrace, Symbol};
use crate::graph::Graph;
use crate::{Error, ProcessorId, Result};

type NodeRule = dyn Fn(&NodeStep<'_>) -> BitState + Send + Sync;

/// Bounded node protocol: `rounds` synchronous rounds, `memory` bits per
/// vertex processor.
#[derive(Clone)]
pub struct NodeProtocol {
    pub rounds: usize,
    pub memory: usize,
    rule: Arc<NodeRule>,
}

impl NodeProtocol {
    pub fn new(
        rounds: usize,
        memory: usize,
        rule: impl Fn(&NodeStep<'_>) -> BitState + Send + Sync + 'static,
    ) -> Self {
        NodeProtocol {
            rounds,
            memory,
            rule: Arc::new(rule),
        }
    }
}

/// What a node rule may look at in one round. State and input accessors
/// enforce locality: reading outside the neighborhood panics.
pub struct NodeStep<'a> {
    pub round: usize,
    pub vertex: usize,
    graph: &'a Graph,
    prev: &'a [BitState],
    input: &'a [Symbol],
}

impl<'a> NodeStep<'a> {
    pub fn graph(&self) -> &Graph {
        self.graph
    }

    /// Previous-round state of a vertex in N_G(self.vertex); reflexive, so the
    /// processor's own state is readable.
    pub fn state(&self, v: usize) -> &BitState {
        assert!(
            self.graph.neighbors(self.vertex).binary_search(&v).is_ok(),
            "vertex {} is not adjacent to {}",
            v,
            self.vertex
        );
        &self.prev[v]
    }

    pub fn own_state(&self) -> &BitState {
        &self.prev[self.vertex]
    }

    /// Input symbol on an edge in M_G(self.vertex).
    pub fn input(&self, e: usize) -> Symbol {
        assert!(
            self.graph
                .incident_edges(self.vertex)
                .binary_search(&e)
                .is_ok(),
            "edge {} is not incident to vertex {}",
            e,
            self.vertex
        );
        self.input[e]
    }

    pub fn incident_edges(&self) -> &[usize] {
        self.graph.incident_edges(self.vertex)
    }
}

/// Runs a node protocol. Aborts with a memory-budget violation if any rule
/// emits a state wider than B, and with an invalid-protocol error if a rule
/// emits fewer than B bits; states are never truncated or padded silently.
pub fn run_node_protocol(
    p: &NodeProtocol,
    g: &Graph,
    input: &[Symbol],
) -> Result<ExecutionTrace<BitState>> {
    if input.len() != g.num_edges() {
        return Err(Error::ShapeMismatch(format!(
            "{} input symbols for {} edges",
            input.len(),
            g.num_edges()
        )));
    }
    if p.memory == 0 || p.rounds == 0 {
        return Err(Error::InvalidProtocol(
            "rounds and memory must be >= 1".into(),
        ));
    }

    let n = g.num_vertices();
    let mut states = vec![vec![BitState::zeros(p.memory); n]];
    for t in 1..=p.rounds {
        let prev = &states[t - 1];
        let mut next = Vec::with_capacity(n);
        for v in 0..n {
            let step = NodeStep {
                round: t,
                vertex: v,
                graph: g,
                prev,
                input,
            };
            let out = (p.rule)(&step);
            if out.len() > p.memory {
                return Err(Error::MemoryBudget {
                    round: t,
                    processor: ProcessorId::Vertex(v),
                    bits: out.len(),
                    budget: p.memory,
                });
            }
            if out.len() < p.memory {
                return Err(Error::InvalidProtocol(format!(
                    "rule at round {t}, vertex {v} emitted {} bits, protocol width is {}",
                    out.len(),
                    p.memory
                )));
            }
            next.push(out);
        }
        states.push(next);
    }

    let outputs = states[p.rounds].iter().map(|s| s.bit(0)).collect();
    Ok(ExecutionTrace {
        max_state_bits: p.memory,
        states,
        outputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::all_inputs;

    #[test]
    fn copy_first_incident_input() {
        // T=1: every vertex copies the input bit of its first incident edge.
        let g = Graph::star(3).unwrap();
        let p = NodeProtocol::new(1, 1, |step| {
            let e = step.incident_edges()[0];
            BitState::from_uint(step.input(e).0 as u64, 1)
        });
        for input in all_inputs(2, 3) {
            let trace = run_node_protocol(&p, &g, &input).unwrap();
            assert_eq!(trace.outputs[0], input[0].as_bool());
            for leaf in 1..=3 {
                assert_eq!(trace.outputs[leaf], input[leaf - 1].as_bool());
            }
        }
    }

    #[test]
    fn round_zero_states_are_all_zero() {
        let g = Graph::path(4).unwrap();
        let p = NodeProtocol::new(2, 3, |step| {
            assert!(step.round >= 1);
            BitState::zeros(3)
        });
        let trace = run_node_protocol(&p, &g, &[Symbol(0); 3]).unwrap();
        assert!(trace.states[0].iter().all(|s| s.is_zero()));
        assert_eq!(trace.rounds(), 2);
    }

    #[test]
    fn overwide_state_is_a_budget_violation() {
        let g = Graph::path(2).unwrap();
        let p = NodeProtocol::new(1, 4, |_| BitState::zeros(5));
        match run_node_protocol(&p, &g, &[Symbol(0)]) {
            Err(Error::MemoryBudget {
                bits: 5, budget: 4, ..
            }) => {}
            other => panic!("expected budget violation, got {other:?}"),
        }
    }

    #[test]
    #[should_panic(expected = "not adjacent")]
    fn reading_a_non_neighbor_panics() {
        let g = Graph::path(3).unwrap();
        let p = NodeProtocol::new(1, 1, |step| {
            if step.vertex == 0 {
                let _ = step.state(2); // 2 is not adjacent to 0
            }
            BitState::zeros(1)
        });
        let _ = run_node_protocol(&p, &g, &[Symbol(0); 2]);
    }
}
