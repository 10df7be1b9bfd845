//! Symmetric protocols: update rules that are pure functions of canonical
//! multisets, so permutation equivariance holds by construction.
//!
//! The engine canonicalizes before every rule invocation: a node rule receives
//! its own state plus the multiset of (neighbor state, connecting-edge input)
//! pairs; an edge rule receives its own input and state plus the unordered
//! pair of endpoint side multisets (each side holding the states of all edges
//! at that endpoint, the edge itself included in both). Rules never see
//! processor identities.
//!
//! States are structured values. A protocol may carry an optional bit budget;
//! budget checks only apply when one is set (bounded mode).

use std::sync::Arc;

use super::{ExecutionTrace, StructuredValue, Symbol};
use crate::graph::Graph;
use crate::{Error, ProcessorId, Result};

type SymNodeRule = dyn Fn(&SymNodeStep<'_>) -> StructuredValue + Send + Sync;
type SymNodeReadout = dyn Fn(&StructuredValue) -> bool + Send + Sync;
type SymEdgeRule = dyn Fn(&SymEdgeStep<'_>) -> StructuredValue + Send + Sync;
type SymEdgeAggregate = dyn Fn(&[&StructuredValue]) -> bool + Send + Sync;

/// Symmetric node protocol: one rule per round, a readout mapping the final
/// state to the vertex's output bit.
#[derive(Clone)]
pub struct SymmetricNodeProtocol {
    pub rounds: usize,
    /// Bit budget; `None` runs unbounded.
    pub budget: Option<usize>,
    rule: Arc<SymNodeRule>,
    readout: Arc<SymNodeReadout>,
}

impl SymmetricNodeProtocol {
    pub fn new(
        rounds: usize,
        budget: Option<usize>,
        rule: impl Fn(&SymNodeStep<'_>) -> StructuredValue + Send + Sync + 'static,
        readout: impl Fn(&StructuredValue) -> bool + Send + Sync + 'static,
    ) -> Self {
        SymmetricNodeProtocol {
            rounds,
            budget,
            rule: Arc::new(rule),
            readout: Arc::new(readout),
        }
    }
}

/// Symmetric edge protocol: one rule per round plus a symmetric aggregation
/// over the multiset of incident final states.
#[derive(Clone)]
pub struct SymmetricEdgeProtocol {
    pub rounds: usize,
    pub budget: Option<usize>,
    rule: Arc<SymEdgeRule>,
    aggregate: Arc<SymEdgeAggregate>,
}

impl SymmetricEdgeProtocol {
    pub fn new(
        rounds: usize,
        budget: Option<usize>,
        rule: impl Fn(&SymEdgeStep<'_>) -> StructuredValue + Send + Sync + 'static,
        aggregate: impl Fn(&[&StructuredValue]) -> bool + Send + Sync + 'static,
    ) -> Self {
        SymmetricEdgeProtocol {
            rounds,
            budget,
            rule: Arc::new(rule),
            aggregate: Arc::new(aggregate),
        }
    }

    pub(crate) fn rule(&self) -> &Arc<SymEdgeRule> {
        &self.rule
    }

    pub(crate) fn aggregate(&self) -> &Arc<SymEdgeAggregate> {
        &self.aggregate
    }
}

/// A node rule's canonicalized view: own state and the multiset of
/// (neighbor state, edge input) pairs, in canonical order.
pub struct SymNodeStep<'a> {
    pub round: usize,
    own: &'a StructuredValue,
    pairs: Vec<(&'a StructuredValue, Symbol)>,
}

impl<'a> SymNodeStep<'a> {
    pub(crate) fn new(
        round: usize,
        own: &'a StructuredValue,
        mut pairs: Vec<(&'a StructuredValue, Symbol)>,
    ) -> Self {
        pairs.sort_by_cached_key(|(state, sym)| {
            let mut key = state.encode();
            key.extend_from_slice(&sym.0.to_be_bytes());
            key
        });
        SymNodeStep { round, own, pairs }
    }

    pub fn own_state(&self) -> &StructuredValue {
        self.own
    }

    /// (neighbor state, input on the connecting edge), canonically ordered.
    pub fn pairs(&self) -> &[(&'a StructuredValue, Symbol)] {
        &self.pairs
    }
}

/// An edge rule's canonicalized view: own input, own state, and the unordered
/// pair of endpoint side multisets.
pub struct SymEdgeStep<'a> {
    pub round: usize,
    own_input: Symbol,
    own: &'a StructuredValue,
    sides: [Vec<&'a StructuredValue>; 2],
}

impl<'a> SymEdgeStep<'a> {
    pub(crate) fn new(
        round: usize,
        own_input: Symbol,
        own: &'a StructuredValue,
        side_a: Vec<&'a StructuredValue>,
        side_b: Vec<&'a StructuredValue>,
    ) -> Self {
        let mut side_a = side_a;
        let mut side_b = side_b;
        side_a.sort_by_cached_key(|v| v.encode());
        side_b.sort_by_cached_key(|v| v.encode());
        let key = |side: &[&StructuredValue]| -> Vec<Vec<u8>> {
            side.iter().map(|v| v.encode()).collect()
        };
        let sides = if key(&side_a) <= key(&side_b) {
            [side_a, side_b]
        } else {
            [side_b, side_a]
        };
        SymEdgeStep {
            round,
            own_input,
            own,
            sides,
        }
    }

    pub fn own_input(&self) -> Symbol {
        self.own_input
    }

    pub fn own_state(&self) -> &StructuredValue {
        self.own
    }

    /// The two endpoint side multisets in canonical order. Each side contains
    /// the states of every edge at that endpoint, this edge included, so the
    /// edge's own state appears in both sides.
    pub fn sides(&self) -> (&[&'a StructuredValue], &[&'a StructuredValue]) {
        (&self.sides[0], &self.sides[1])
    }
}

fn check_budget(
    budget: Option<usize>,
    state: &StructuredValue,
    round: usize,
    processor: ProcessorId,
) -> Result<()> {
    if let Some(b) = budget {
        let bits = state.size_bits();
        if bits > b {
            return Err(Error::MemoryBudget {
                round,
                processor,
                bits,
                budget: b,
            });
        }
    }
    Ok(())
}

pub fn run_symmetric_node_protocol(
    p: &SymmetricNodeProtocol,
    g: &Graph,
    input: &[Symbol],
) -> Result<ExecutionTrace<StructuredValue>> {
    if input.len() != g.num_edges() {
        return Err(Error::ShapeMismatch(format!(
            "{} input symbols for {} edges",
            input.len(),
            g.num_edges()
        )));
    }
    let n = g.num_vertices();
    let mut states = vec![vec![StructuredValue::zero(); n]];
    let mut max_bits = 0;
    for t in 1..=p.rounds {
        let prev = &states[t - 1];
        let mut next = Vec::with_capacity(n);
        for v in 0..n {
            let pairs = g
                .neighbors(v)
                .iter()
                .filter(|&&w| w != v)
                .map(|&w| {
                    let e = g.edge_id(v, w).expect("neighbor implies edge");
                    (&prev[w], input[e])
                })
                .collect();
            let step = SymNodeStep::new(t, &prev[v], pairs);
            let out = (p.rule)(&step);
            check_budget(p.budget, &out, t, ProcessorId::Vertex(v))?;
            max_bits = max_bits.max(out.size_bits());
            next.push(out);
        }
        states.push(next);
    }
    let outputs = states[p.rounds].iter().map(|s| (p.readout)(s)).collect();
    Ok(ExecutionTrace {
        states,
        outputs,
        max_state_bits: max_bits,
    })
}

pub fn run_symmetric_edge_protocol(
    p: &SymmetricEdgeProtocol,
    g: &Graph,
    input: &[Symbol],
) -> Result<ExecutionTrace<StructuredValue>> {
    if input.len() != g.num_edges() {
        return Err(Error::ShapeMismatch(format!(
            "{} input symbols for {} edges",
            input.len(),
            g.num_edges()
        )));
    }
    let ne = g.num_edges();
    let mut states = vec![vec![StructuredValue::zero(); ne]];
    let mut max_bits = 0;
    for t in 1..=p.rounds {
        let prev = &states[t - 1];
        let mut next = Vec::with_capacity(ne);
        for e in 0..ne {
            let (u, v) = g.endpoints(e);
            let side = |x: usize| {
                g.incident_edges(x)
                    .iter()
                    .map(|&f| &prev[f])
                    .collect::<Vec<_>>()
            };
            let step = SymEdgeStep::new(t, input[e], &prev[e], side(u), side(v));
            let out = (p.rule)(&step);
            check_budget(p.budget, &out, t, ProcessorId::Edge(e))?;
            max_bits = max_bits.max(out.size_bits());
            next.push(out);
        }
        states.push(next);
    }
    let finals = &states[p.rounds];
    let outputs = (0..g.num_vertices())
        .map(|v| {
            let mut incident: Vec<&StructuredValue> =
                g.incident_edges(v).iter().map(|&e| &finals[e]).collect();
            incident.sort_by_cached_key(|s| s.encode());
            (p.aggregate)(&incident)
        })
        .collect();
    Ok(ExecutionTrace {
        states,
        outputs,
        max_state_bits: max_bits,
    })
}

/// T=1 symmetric protocol copying the input onto the edge state; vertices OR
/// their incident states. The symmetric twin of `copy_or_edge_protocol`.
pub fn copy_or_symmetric_edge_protocol() -> SymmetricEdgeProtocol {
    SymmetricEdgeProtocol::new(
        1,
        Some(1),
        |step| StructuredValue::Int(step.own_input().0 as i64),
        |incident| incident.iter().any(|s| s.as_int() != Some(0)),
    )
}
