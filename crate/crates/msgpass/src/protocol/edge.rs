//! Edge message-passing protocols with bounded bit-string states.
//!
//! Edge rules see the previous-round states of the closed edge neighborhood
//! M_G(e) and the edge's own input symbol only. After the last round, a
//! per-vertex aggregation rule turns the final states of the incident edges
//! into the vertex's output bit.

use std::sync::Arc;

use super::{BitState, ExecutionTrace, Symbol};
use crate::graph::Graph;
use crate::{Error, ProcessorId, Result};

type EdgeRule = dyn Fn(&EdgeStep<'_>) -> BitState + Send + Sync;
type AggregateRule = dyn Fn(&VertexReadout<'_>) -> bool + Send + Sync;

/// Bounded edge protocol: per-round edge rules plus the final vertex
/// aggregation.
#[derive(Clone)]
pub struct EdgeProtocol {
    pub rounds: usize,
    pub memory: usize,
    rule: Arc<EdgeRule>,
    aggregate: Arc<AggregateRule>,
}

impl EdgeProtocol {
    pub fn new(
        rounds: usize,
        memory: usize,
        rule: impl Fn(&EdgeStep<'_>) -> BitState + Send + Sync + 'static,
        aggregate: impl Fn(&VertexReadout<'_>) -> bool + Send + Sync + 'static,
    ) -> Self {
        EdgeProtocol {
            rounds,
            memory,
            rule: Arc::new(rule),
            aggregate: Arc::new(aggregate),
        }
    }

    pub(crate) fn rule(&self) -> &Arc<EdgeRule> {
        &self.rule
    }

    pub(crate) fn aggregate(&self) -> &Arc<AggregateRule> {
        &self.aggregate
    }
}

/// One edge processor's view of a round.
pub struct EdgeStep<'a> {
    pub round: usize,
    pub edge: usize,
    graph: &'a Graph,
    prev: &'a dyn Fn(usize) -> &'a BitState,
    own_input: Symbol,
}

impl<'a> EdgeStep<'a> {
    pub(crate) fn new(
        round: usize,
        edge: usize,
        graph: &'a Graph,
        prev: &'a dyn Fn(usize) -> &'a BitState,
        own_input: Symbol,
    ) -> Self {
        EdgeStep {
            round,
            edge,
            graph,
            prev,
            own_input,
        }
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    /// Previous-round state of an edge in M_G(self.edge); reflexive.
    pub fn state(&self, e: usize) -> &BitState {
        assert!(
            self.graph
                .edge_neighbors(self.edge)
                .binary_search(&e)
                .is_ok(),
            "edge {} is not adjacent to edge {}",
            e,
            self.edge
        );
        (self.prev)(e)
    }

    pub fn own_state(&self) -> &BitState {
        (self.prev)(self.edge)
    }

    pub fn own_input(&self) -> Symbol {
        self.own_input
    }

    pub fn adjacent_edges(&self) -> &[usize] {
        self.graph.edge_neighbors(self.edge)
    }
}

/// A vertex's view during final aggregation: the final states of its incident
/// edges.
pub struct VertexReadout<'a> {
    pub vertex: usize,
    graph: &'a Graph,
    finals: &'a [BitState],
}

impl<'a> VertexReadout<'a> {
    pub(crate) fn new(vertex: usize, graph: &'a Graph, finals: &'a [BitState]) -> Self {
        VertexReadout {
            vertex,
            graph,
            finals,
        }
    }

    pub fn state(&self, e: usize) -> &BitState {
        assert!(
            self.graph
                .incident_edges(self.vertex)
                .binary_search(&e)
                .is_ok(),
            "edge {} is not incident to vertex {}",
            e,
            self.vertex
        );
        &self.finals[e]
    }

    pub fn incident_edges(&self) -> &[usize] {
        self.graph.incident_edges(self.vertex)
    }
}

pub fn run_edge_protocol(
    p: &EdgeProtocol,
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

    let ne = g.num_edges();
    let mut states = vec![vec![BitState::zeros(p.memory); ne]];
    for t in 1..=p.rounds {
        let prev = &states[t - 1];
        let lookup = |e: usize| &prev[e];
        let mut next = Vec::with_capacity(ne);
        for (e, &symbol) in input.iter().enumerate() {
            let step = EdgeStep::new(t, e, g, &lookup, symbol);
            let out = (p.rule)(&step);
            if out.len() > p.memory {
                return Err(Error::MemoryBudget {
                    round: t,
                    processor: ProcessorId::Edge(e),
                    bits: out.len(),
                    budget: p.memory,
                });
            }
            if out.len() < p.memory {
                return Err(Error::InvalidProtocol(format!(
                    "rule at round {t}, edge {e} emitted {} bits, protocol width is {}",
                    out.len(),
                    p.memory
                )));
            }
            next.push(out);
        }
        states.push(next);
    }

    let finals = &states[p.rounds];
    let outputs = (0..g.num_vertices())
        .map(|v| {
            (p.aggregate)(&VertexReadout {
                vertex: v,
                graph: g,
                finals,
            })
        })
        .collect();
    Ok(ExecutionTrace {
        max_state_bits: p.memory,
        states,
        outputs,
    })
}

/// T=1 protocol that copies the input bit onto the edge; vertices OR their
/// incident states. Used as the small worked example for both simulations.
pub fn copy_or_edge_protocol() -> EdgeProtocol {
    EdgeProtocol::new(
        1,
        1,
        |step| BitState::from_uint(step.own_input().0 as u64, 1),
        |readout| {
            readout
                .incident_edges()
                .iter()
                .any(|&e| readout.state(e).bit(0))
        },
    )
}
