//! The protocol engine: synchronous round-based execution of node and edge
//! message-passing protocols, bounded (bit-string) and unbounded (structured)
//! state modes, the two simulation constructions, and equivariance checking.
//!
//! Inputs always live on the edges: an input is one alphabet symbol per edge
//! id. Round 0 states are all-zero for every processor. A bounded run aborts
//! with a budget violation if any rule emits a state of the wrong width; it
//! never truncates.

mod bits;
mod edge;
mod equivariance;
mod node;
mod simulate;
mod symmetric;
mod value;

pub use bits::BitState;
pub use edge::{copy_or_edge_protocol, run_edge_protocol, EdgeProtocol, EdgeStep, VertexReadout};
pub use equivariance::{
    check_equivariance, permute_input, sample_automorphisms, EquivarianceReport,
};
pub use node::{run_node_protocol, NodeProtocol, NodeStep};
pub use simulate::{simulate_edge_with_node, symmetric_edge_to_node, StateMode};
pub use symmetric::{
    copy_or_symmetric_edge_protocol, run_symmetric_edge_protocol, run_symmetric_node_protocol,
    SymEdgeStep, SymNodeStep, SymmetricEdgeProtocol, SymmetricNodeProtocol,
};
pub use value::StructuredValue;

use crate::rng;

/// An input alphabet symbol. The engine treats symbols as opaque atoms; tasks
/// define their own encodings.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn as_bool(self) -> bool {
        self.0 != 0
    }
}

/// All inputs in Phi^len for an alphabet {0, .., alphabet-1}, in odometer
/// order (edge 0 cycles fastest).
pub fn all_inputs(alphabet: u32, len: usize) -> impl Iterator<Item = Vec<Symbol>> {
    let total = (alphabet as u128)
        .checked_pow(len as u32)
        .expect("input space too large");
    (0..total).map(move |mut code| {
        (0..len)
            .map(|_| {
                let s = (code % alphabet as u128) as u32;
                code /= alphabet as u128;
                Symbol(s)
            })
            .collect()
    })
}

/// `count` seeded uniform inputs over the alphabet.
pub fn random_inputs(alphabet: u32, len: usize, count: usize, seed: u64) -> Vec<Vec<Symbol>> {
    let mut rng = rng::seeded(seed);
    (0..count)
        .map(|_| {
            (0..len)
                .map(|_| Symbol(rng::uniform(&mut rng, alphabet as usize) as u32))
                .collect()
        })
        .collect()
}

/// State representations the trace can carry.
pub trait StateRepr: Clone {
    fn size_bits(&self) -> usize;
    fn state_json(&self) -> serde_json::Value;
}

impl StateRepr for BitState {
    fn size_bits(&self) -> usize {
        self.len()
    }

    fn state_json(&self) -> serde_json::Value {
        serde_json::json!({"hex": self.to_hex(), "len": self.len()})
    }
}

impl StateRepr for StructuredValue {
    fn size_bits(&self) -> usize {
        StructuredValue::size_bits(self)
    }

    fn state_json(&self) -> serde_json::Value {
        self.to_json()
    }
}

/// Full record of one protocol run: per-round states (round 0 is the all-zero
/// initial state), final per-vertex output bits, and the largest state size
/// observed anywhere in the run.
#[derive(Clone, Debug)]
pub struct ExecutionTrace<S> {
    pub states: Vec<Vec<S>>,
    pub outputs: Vec<bool>,
    pub max_state_bits: usize,
}

impl<S: StateRepr> ExecutionTrace<S> {
    pub fn rounds(&self) -> usize {
        self.states.len().saturating_sub(1)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rounds": self.states.iter()
                .map(|round| round.iter().map(|s| s.state_json()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "outputs": self.outputs.iter().map(|&b| b as u8).collect::<Vec<_>>(),
            "max_state_bits": self.max_state_bits,
        })
    }

    /// Largest integer atom observed in any state, for structured traces.
    pub fn max_int_state(&self) -> Option<i64>
    where
        S: MaxInt,
    {
        self.states
            .iter()
            .flat_map(|round| round.iter())
            .filter_map(|s| s.max_int())
            .max()
    }
}

pub trait MaxInt {
    fn max_int(&self) -> Option<i64>;
}

impl MaxInt for StructuredValue {
    fn max_int(&self) -> Option<i64> {
        StructuredValue::max_int(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_inputs_enumerates_the_whole_space() {
        let inputs: Vec<_> = all_inputs(4, 3).collect();
        assert_eq!(inputs.len(), 64);
        let distinct: std::collections::HashSet<_> = inputs.iter().cloned().collect();
        assert_eq!(distinct.len(), 64);
        assert_eq!(inputs[0], vec![Symbol(0); 3]);
        assert_eq!(inputs[1][0], Symbol(1));
    }

    #[test]
    fn random_inputs_are_seed_deterministic() {
        assert_eq!(random_inputs(2, 5, 3, 11), random_inputs(2, 5, 3, 11));
        assert_ne!(random_inputs(2, 5, 3, 11), random_inputs(2, 5, 3, 12));
    }
}
