//! The two protocol simulations.
//!
//! `simulate_edge_with_node` turns any bounded edge protocol with T rounds and
//! B bits into a node protocol with T+1 rounds and `max_degree * B` bits: each
//! node keeps one B-bit slot per incident edge (positional, in canonical edge
//! id order, zero-padded to the uniform width; there is no per-state header,
//! so the overhead beyond B bits per slot is zero) and replays the edge rules
//! one round behind.
//!
//! `symmetric_edge_to_node` turns any symmetric edge protocol with T rounds
//! into a symmetric node protocol with T+1 rounds in the unbounded state mode,
//! following the universal-protocol route: node states accumulate the
//! identity-accumulation ("universal") edge states, and a decoding pass
//! replays the original rules at readout time.

use std::sync::Arc;

use super::edge::{EdgeProtocol, EdgeStep, VertexReadout};
use super::symmetric::{SymEdgeStep, SymmetricEdgeProtocol, SymmetricNodeProtocol};
use super::{BitState, NodeProtocol, StructuredValue, Symbol};
use crate::graph::Graph;
use crate::{Error, Result};

/// Simulates an edge protocol with a node protocol on the same graph,
/// preserving every vertex output. The result has `p.rounds + 1` rounds and
/// `g.max_degree() * p.memory` bits per node.
pub fn simulate_edge_with_node(p: &EdgeProtocol, g: &Graph) -> NodeProtocol {
    let slot = p.memory;
    let width = g.max_degree() * slot;
    let last = p.rounds + 1;
    let edge_rule = Arc::clone(p.rule());
    let aggregate = Arc::clone(p.aggregate());

    NodeProtocol::new(last, width.max(1), move |step| {
        let g = step.graph();
        let v = step.vertex;
        if step.round == 1 {
            // P'_1(v) = (P_0(e))_e: all slots zero.
            return BitState::zeros(width.max(1));
        }

        // Previous-round edge states P_{t-2}(e), recovered from the slots of v
        // and of every neighbor. Overlapping slots agree by construction.
        let mut table: Vec<BitState> = vec![BitState::zeros(slot); g.num_edges()];
        for &w in g.neighbors(v) {
            let slots = step.state(w);
            for (k, &e) in g.incident_edges(w).iter().enumerate() {
                table[e] = slots.slice(k * slot, slot);
            }
        }

        // One edge-protocol round for every incident edge.
        let lookup = |e: usize| &table[e];
        let computed: Vec<BitState> = g
            .incident_edges(v)
            .iter()
            .map(|&e| {
                let inner = EdgeStep::new(step.round - 1, e, g, &lookup, step.input(e));
                let out = edge_rule(&inner);
                assert_eq!(
                    out.len(),
                    slot,
                    "simulated edge rule emitted {} bits, expected {}",
                    out.len(),
                    slot
                );
                out
            })
            .collect();

        if step.round < last {
            let refs: Vec<&BitState> = computed.iter().collect();
            return BitState::concat(&refs).padded(width.max(1));
        }

        // Final round: the computed states are P_T; fold in the aggregation.
        let mut finals: Vec<BitState> = vec![BitState::zeros(slot); g.num_edges()];
        for (k, &e) in g.incident_edges(v).iter().enumerate() {
            finals[e] = computed[k].clone();
        }
        let bit = aggregate(&VertexReadout::new(v, g, &finals));
        BitState::from_uint(bit as u64, 1).padded(width.max(1))
    })
}

/// State representation selector for symmetric runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateMode {
    Bounded(usize),
    Unbounded,
}

/// Simulates a symmetric edge protocol with a symmetric node protocol,
/// preserving every vertex output. The result has `p.rounds + 1` rounds.
///
/// The node state at round t+1 is the multiset of universal edge states
/// Q_t(v) = {{ P_t(e) : e incident to v }} for the identity-accumulation
/// protocol; round 1 holds the multiset of incident input symbols. Only the
/// unbounded mode is supported: the accumulated states grow with the round
/// number regardless of the source protocol's budget.
pub fn symmetric_edge_to_node(
    p: &SymmetricEdgeProtocol,
    mode: StateMode,
) -> Result<SymmetricNodeProtocol> {
    match mode {
        StateMode::Bounded(_) => return Err(Error::UnboundedRequired),
        StateMode::Unbounded => {}
    }
    let total = p.rounds;
    let rule = Arc::clone(p.rule());
    let aggregate = Arc::clone(p.aggregate());

    let step_rule = move |step: &super::SymNodeStep<'_>| -> StructuredValue {
        let t = step.round;
        if t == 1 {
            return StructuredValue::multiset(
                step.pairs()
                    .iter()
                    .map(|&(_, sym)| StructuredValue::Sym(sym.0))
                    .collect(),
            );
        }
        let items = step
            .pairs()
            .iter()
            .map(|&(neighbor, sym)| {
                if t == 2 {
                    // Round-1 states are input multisets; only their sizes
                    // (the endpoint degrees) enter Q_0.
                    universal_state(1, sym, &zeros_like(step.own_state()), &zeros_like(neighbor))
                } else {
                    universal_state(t - 1, sym, step.own_state(), neighbor)
                }
            })
            .collect();
        StructuredValue::multiset(items)
    };

    let rule_for_readout = Arc::clone(&rule);
    let readout = move |state: &StructuredValue| -> bool {
        let StructuredValue::Multiset(items) = state else {
            panic!("final simulation state must be a multiset");
        };
        let decoded: Vec<StructuredValue> = items
            .iter()
            .map(|x| decode_universal(total, x, &rule_for_readout))
            .collect();
        let mut refs: Vec<&StructuredValue> = decoded.iter().collect();
        refs.sort_by_cached_key(|v| v.encode());
        aggregate(&refs)
    };

    Ok(SymmetricNodeProtocol::new(
        total + 1,
        None,
        step_rule,
        readout,
    ))
}

/// Q_0-shaped multiset: as many zero atoms as the argument has elements.
fn zeros_like(ms: &StructuredValue) -> StructuredValue {
    let len = match ms {
        StructuredValue::Multiset(items) => items.len(),
        _ => panic!("expected a multiset state"),
    };
    StructuredValue::multiset(vec![StructuredValue::zero(); len])
}

/// Builds the universal (identity-accumulation) edge state
/// P°_s(e) = (I(e), P°_{s-1}(e), {{ Q_{s-1}(u), Q_{s-1}(v) }})
/// from the endpoint histories Q_{s-1}; earlier Q levels are recovered by
/// projecting each accumulated tuple onto its own-previous-state component.
fn universal_state(
    s: usize,
    input: Symbol,
    q_u: &StructuredValue,
    q_v: &StructuredValue,
) -> StructuredValue {
    if s == 0 {
        return StructuredValue::zero();
    }
    let prev = if s == 1 {
        StructuredValue::zero()
    } else {
        universal_state(s - 1, input, &project_prev(q_u), &project_prev(q_v))
    };
    StructuredValue::tuple(vec![
        StructuredValue::Sym(input.0),
        prev,
        StructuredValue::multiset(vec![q_u.clone(), q_v.clone()]),
    ])
}

/// Q_{s-1} from Q_s: each element of Q_s is a universal tuple whose second
/// component is the same edge's previous universal state.
fn project_prev(q: &StructuredValue) -> StructuredValue {
    let StructuredValue::Multiset(items) = q else {
        panic!("expected a Q multiset");
    };
    StructuredValue::multiset(
        items
            .iter()
            .map(|item| match item {
                StructuredValue::Tuple(parts) => parts[1].clone(),
                other => panic!("expected a universal tuple, found {other:?}"),
            })
            .collect(),
    )
}

/// h: decodes a universal state into the source protocol's state by replaying
/// the source rules round by round.
fn decode_universal(
    s: usize,
    state: &StructuredValue,
    rule: &Arc<dyn Fn(&SymEdgeStep<'_>) -> StructuredValue + Send + Sync>,
) -> StructuredValue {
    if s == 0 {
        return StructuredValue::zero();
    }
    let StructuredValue::Tuple(parts) = state else {
        panic!("expected a universal tuple, found {state:?}");
    };
    let StructuredValue::Sym(input) = parts[0] else {
        panic!("universal tuple must start with the input symbol");
    };
    let StructuredValue::Multiset(sides) = &parts[2] else {
        panic!("universal tuple must end with the side pair");
    };
    let own = decode_universal(s - 1, &parts[1], rule);
    let decode_side = |side: &StructuredValue| -> Vec<StructuredValue> {
        let StructuredValue::Multiset(items) = side else {
            panic!("expected a side multiset");
        };
        items
            .iter()
            .map(|x| decode_universal(s - 1, x, rule))
            .collect()
    };
    let side_a = decode_side(&sides[0]);
    let side_b = decode_side(&sides[1]);
    let step = SymEdgeStep::new(
        s,
        Symbol(input),
        &own,
        side_a.iter().collect(),
        side_b.iter().collect(),
    );
    rule(&step)
}
