//! MAP inference for pairwise graphical models over the fixed four-potential
//! class, on hub-path graphs.
//!
//! The potential class, identified with 2-bit codes in this order:
//!
//! | code | potential                                    | cost on (xa,xb)    |
//! |------|----------------------------------------------|--------------------|
//! | 0    | 1[xa != xb]                                  | 0 1 1 0            |
//! | 1    | 1[xa != 1 or xb != 1]  (zero only on (1,1))  | 1 1 1 0            |
//! | 2    | 1[xa != 0 or xb != 0]  (zero only on (0,0))  | 0 1 1 1            |
//! | 3    | zero function                                | 0 0 0 0            |
//!
//! All four potentials are symmetric in their arguments and submodular, so
//! the minimizers of any total energy form a lattice; the coordinate-wise
//! smallest minimizer exists and equals the lexicographically smallest one,
//! which is the fixed tie-break every evaluator here returns.

use crate::graph::Graph;
use crate::protocol::{BitState, EdgeProtocol, Symbol};
use crate::{Error, Result};

/// One of the four potentials, as a 2-bit code.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PotentialSymbol(u8);

impl PotentialSymbol {
    pub const NOT_EQUAL: PotentialSymbol = PotentialSymbol(0);
    pub const PIN_ONES: PotentialSymbol = PotentialSymbol(1);
    pub const PIN_ZEROS: PotentialSymbol = PotentialSymbol(2);
    pub const ZERO: PotentialSymbol = PotentialSymbol(3);

    pub fn new(code: u8) -> Result<Self> {
        if code < 4 {
            Ok(PotentialSymbol(code))
        } else {
            Err(Error::Format(format!(
                "potential code {code} out of range 0..4"
            )))
        }
    }

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn cost(self, xa: bool, xb: bool) -> u64 {
        match self.0 {
            0 => (xa != xb) as u64,
            1 => !(xa && xb) as u64,
            2 => (xa || xb) as u64,
            _ => 0,
        }
    }

    pub fn from_symbol(s: Symbol) -> Result<Self> {
        Self::new(u8::try_from(s.0).map_err(|_| Error::Format("symbol too large".into()))?)
    }

    pub fn to_symbol(self) -> Symbol {
        Symbol(self.0 as u32)
    }
}

/// Total energy of an assignment: the sum of per-edge potential costs. MAP
/// assignments are exactly the energy minimizers.
pub fn energy(g: &Graph, potentials: &[PotentialSymbol], x: &[bool]) -> Result<u64> {
    if potentials.len() != g.num_edges() {
        return Err(Error::ShapeMismatch(format!(
            "{} potentials for {} edges",
            potentials.len(),
            g.num_edges()
        )));
    }
    if x.len() != g.num_vertices() {
        return Err(Error::ShapeMismatch(format!(
            "assignment of {} bits for {} vertices",
            x.len(),
            g.num_vertices()
        )));
    }
    Ok(g.edges()
        .iter()
        .zip(potentials)
        .map(|(&(a, b), p)| p.cost(x[a], x[b]))
        .sum())
}

pub const BRUTE_FORCE_CAP: usize = 24;

/// Exhaustive MAP evaluator: the lexicographically smallest energy minimizer
/// (vertex 0 most significant). Works on any graph up to the cap.
pub fn brute_force_map(g: &Graph, potentials: &[PotentialSymbol]) -> Result<Vec<bool>> {
    let n = g.num_vertices();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::CapExceeded {
            size: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    if potentials.len() != g.num_edges() {
        return Err(Error::ShapeMismatch("potentials per edge".into()));
    }
    // Per-edge cost tables indexed by (xa, xb) bits.
    let tables: Vec<[u64; 4]> = potentials
        .iter()
        .map(|p| {
            [
                p.cost(false, false),
                p.cost(false, true),
                p.cost(true, false),
                p.cost(true, true),
            ]
        })
        .collect();

    let mut best_mask = 0u64;
    let mut best = u64::MAX;
    // Masks are ordered so that increasing mask = lexicographic order on
    // (x_0, ..., x_{n-1}); strict improvement keeps the smallest minimizer.
    for mask in 0..1u64 << n {
        let bit = |v: usize| mask >> (n - 1 - v) & 1;
        let mut total = 0;
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            total += tables[e][(bit(a) << 1 | bit(b)) as usize];
            if total >= best {
                break;
            }
        }
        if total < best {
            best = total;
            best_mask = mask;
        }
    }
    Ok((0..n).map(|v| best_mask >> (n - 1 - v) & 1 == 1).collect())
}

/// Vertex and edge indexing of hub-path graphs, shared by the DP, the edge
/// protocol and the lower-bound instance.
pub struct HubPathIndex {
    pub m: usize,
}

impl HubPathIndex {
    pub fn new(g: &Graph) -> Result<Self> {
        match *g.family() {
            crate::graph::GraphFamily::HubPath { m } => Ok(HubPathIndex { m }),
            _ => Err(Error::InvalidParameter("expected a hub_path graph".into())),
        }
    }

    /// Vertex (i, j), 1-based in both coordinates.
    pub fn vertex(&self, i: usize, j: usize) -> usize {
        1 + (j - 1) * self.m + (i - 1)
    }

    /// Edge {0, (i,j)}: the hub edges are the first m*m edges, sorted by the
    /// path vertex id.
    pub fn hub_edge(&self, i: usize, j: usize) -> usize {
        self.vertex(i, j) - 1
    }

    /// Edge {(i,j), (i+1,j)} for i < m.
    pub fn path_edge(&self, g: &Graph, i: usize, j: usize) -> usize {
        g.edge_id(self.vertex(i, j), self.vertex(i + 1, j))
            .expect("path edge exists for i < m")
    }
}

/// Exact MAP on a hub-path graph by dynamic programming, linear in |E|.
///
/// For each hub value c0, a forward scan over every path accumulates the
/// prefix optima given the last vertex's value; a reverse scan recovers the
/// per-path assignment, preferring 0 at every argmin tie; c0 = 0 is preferred
/// on a total-energy tie. With this potential class the result is the
/// lexicographically smallest minimizer, matching `brute_force_map` (asserted
/// exhaustively in the tests).
pub fn dp_map_hub_path(m: usize, potentials: &[PotentialSymbol]) -> Result<Vec<bool>> {
    let g = Graph::hub_path(m)?;
    if potentials.len() != g.num_edges() {
        return Err(Error::ShapeMismatch(format!(
            "{} potentials for {} edges",
            potentials.len(),
            g.num_edges()
        )));
    }
    let idx = HubPathIndex { m };

    let mut per_hub: Vec<(u64, Vec<bool>)> = Vec::with_capacity(2);
    for c0 in [false, true] {
        let mut total = 0u64;
        let mut assignment = vec![false; g.num_vertices()];
        assignment[0] = c0;
        for j in 1..=m {
            // prefix[i-1][c] = min energy of the first i path vertices (hub
            // edges included), given x_(i,j) = c and x_0 = c0.
            let mut prefix = vec![[0u64; 2]; m];
            for i in 1..=m {
                let hub = potentials[idx.hub_edge(i, j)];
                for c in 0..2 {
                    let own = hub.cost(c0, c == 1);
                    prefix[i - 1][c] = if i == 1 {
                        own
                    } else {
                        let step = potentials[idx.path_edge(&g, i - 1, j)];
                        let prev = prefix[i - 2];
                        let via = |cp: usize| prev[cp] + step.cost(cp == 1, c == 1);
                        own + via(0).min(via(1))
                    };
                }
            }
            total += prefix[m - 1][0].min(prefix[m - 1][1]);

            // Reverse scan: recover the argmin, preferring 0 on ties.
            let mut c = (prefix[m - 1][1] < prefix[m - 1][0]) as usize;
            assignment[idx.vertex(m, j)] = c == 1;
            for i in (1..m).rev() {
                let step = potentials[idx.path_edge(&g, i, j)];
                let via = |cp: usize| prefix[i - 1][cp] + step.cost(cp == 1, c == 1);
                c = (via(1) < via(0)) as usize;
                assignment[idx.vertex(i, j)] = c == 1;
            }
        }
        per_hub.push((total, assignment));
    }

    let pick = if per_hub[1].0 < per_hub[0].0 { 1 } else { 0 };
    Ok(per_hub.swap_remove(pick).1)
}

/// The 3-round, 4-bit edge protocol computing the hub-path MAP evaluator.
///
/// Round 1 loads the edge's own 2-bit potential code into the low bits. Round
/// 2 packs, on each hub edge {0,(i,j)}, the pair (code of the path edge
/// {(i,j),(i+1,j)}, own code) into bits 0..2 and 2..4; for i = m the path slot
/// packs the zero bit pattern, which round 3 never reads. Round 3, on every
/// hub edge (all hub edges are mutually adjacent), reconstructs the full input
/// from the packed states and evaluates the MAP assignment by the DP; the
/// state becomes (hub output, 0, own-vertex output, 0). Aggregation reads the
/// first half on the hub's lowest edge and the second half on {0,v} elsewhere.
/// Non-hub edges compute the all-zero function after round 1.
pub fn build_map_edge_protocol(m: usize) -> Result<EdgeProtocol> {
    if m < 2 {
        return Err(Error::InvalidParameter(
            "the MAP edge protocol needs m >= 2".into(),
        ));
    }
    let g = Graph::hub_path(m)?;
    let idx = HubPathIndex { m };

    // Edge classification tables, by edge id.
    let mut hub_coord: Vec<Option<(usize, usize)>> = vec![None; g.num_edges()];
    let mut right_path_edge: Vec<Option<usize>> = vec![None; g.num_edges()];
    for j in 1..=m {
        for i in 1..=m {
            let h = idx.hub_edge(i, j);
            hub_coord[h] = Some((i, j));
            if i < m {
                right_path_edge[h] = Some(idx.path_edge(&g, i, j));
            }
        }
    }
    let num_edges = g.num_edges();
    let first_hub_edge = idx.hub_edge(1, 1);

    let hub_coord_rule = hub_coord.clone();
    let rule = move |step: &crate::protocol::EdgeStep<'_>| -> BitState {
        let idx = HubPathIndex { m };
        match step.round {
            1 => BitState::from_uint(step.own_input().0 as u64, 2).padded(4),
            2 => match hub_coord_rule[step.edge] {
                Some(_) => {
                    let path_code = match right_path_edge[step.edge] {
                        Some(pe) => step.state(pe).uint(0, 2),
                        None => 0,
                    };
                    let own_code = step.own_state().uint(0, 2);
                    BitState::from_uint(path_code | own_code << 2, 4)
                }
                None => BitState::zeros(4),
            },
            3 => match hub_coord_rule[step.edge] {
                Some((i, j)) => {
                    // Every hub edge sees every other hub edge; unpack the
                    // whole input and evaluate the MAP assignment on it.
                    let mut input = vec![PotentialSymbol::ZERO; num_edges];
                    for l in 1..=m {
                        for k in 1..=m {
                            let packed = step.state(idx.hub_edge(k, l));
                            input[idx.hub_edge(k, l)] =
                                PotentialSymbol::new(packed.uint(2, 2) as u8).unwrap();
                            if k < m {
                                input[idx.path_edge(step.graph(), k, l)] =
                                    PotentialSymbol::new(packed.uint(0, 2) as u8).unwrap();
                            }
                        }
                    }
                    let map = dp_map_hub_path(m, &input).expect("reconstructed input is total");
                    let mut out = BitState::zeros(4);
                    out.set(0, map[0]);
                    out.set(2, map[idx.vertex(i, j)]);
                    out
                }
                None => BitState::zeros(4),
            },
            _ => unreachable!("protocol has 3 rounds"),
        }
    };

    let aggregate = move |readout: &crate::protocol::VertexReadout<'_>| -> bool {
        if readout.vertex == 0 {
            readout.state(first_hub_edge).bit(0)
        } else {
            // Vertex (i,j)'s own hub edge {0,(i,j)} has id vertex-1.
            let own_hub = readout.vertex - 1;
            debug_assert!(hub_coord[own_hub].is_some());
            readout.state(own_hub).bit(2)
        }
    };

    Ok(EdgeProtocol::new(3, 4, rule, aggregate))
}

/// The fixed near-S inputs of the hub-path lower-bound instance
/// (K = hub, S = left path endpoints, T = 1).
pub struct ProofInstance {
    pub k: Vec<usize>,
    pub s: Vec<usize>,
    /// I_F: zero on hub edges in F, the not-equal indicator on path edges in F.
    pub fixed: Vec<(usize, PotentialSymbol)>,
}

pub fn proof_lower_bound_instance(m: usize) -> Result<ProofInstance> {
    if m < 2 {
        return Err(Error::InvalidParameter("instance needs m >= 2".into()));
    }
    let g = Graph::hub_path(m)?;
    let idx = HubPathIndex { m };
    let mut fixed = Vec::new();
    let mut s = Vec::new();
    for j in 1..=m {
        s.push(idx.vertex(1, j));
        fixed.push((idx.hub_edge(1, j), PotentialSymbol::ZERO));
        fixed.push((idx.path_edge(&g, 1, j), PotentialSymbol::NOT_EQUAL));
    }
    fixed.sort_by_key(|&(e, _)| e);
    Ok(ProofInstance {
        k: vec![0],
        s,
        fixed,
    })
}

/// The completion that pins each path's right end to y_j.
///
/// For m >= 3 this is the lower-bound proof's construction: zero on the
/// remaining hub edges, the not-equal indicator along the paths, and the pin
/// potential (ones-pin for y_j = 1, zeros-pin for y_j = 0) on the last path
/// edge. At m = 2 the last path edge already lies inside F, so the pin moves
/// to the free hub edge {0,(2,j)}: ones-pin for y_j = 1 and the zero function
/// for y_j = 0 (the all-zeros tie-break then lands on 0). Either way the MAP
/// assignment restricted to S equals y; checked against brute force in tests.
pub fn proof_instance_completion(m: usize, y: &[bool]) -> Result<Vec<(usize, PotentialSymbol)>> {
    if m < 2 {
        return Err(Error::InvalidParameter("instance needs m >= 2".into()));
    }
    if y.len() != m {
        return Err(Error::ShapeMismatch(format!(
            "{} pins for m = {m}",
            y.len()
        )));
    }
    let g = Graph::hub_path(m)?;
    let idx = HubPathIndex { m };
    let mut completion = Vec::new();
    for j in 1..=m {
        if m == 2 {
            let pin = if y[j - 1] {
                PotentialSymbol::PIN_ONES
            } else {
                PotentialSymbol::ZERO
            };
            completion.push((idx.hub_edge(2, j), pin));
            continue;
        }
        for i in 2..=m {
            completion.push((idx.hub_edge(i, j), PotentialSymbol::ZERO));
        }
        for i in 2..m {
            let pin = if i == m - 1 {
                if y[j - 1] {
                    PotentialSymbol::PIN_ONES
                } else {
                    PotentialSymbol::PIN_ZEROS
                }
            } else {
                PotentialSymbol::NOT_EQUAL
            };
            completion.push((idx.path_edge(&g, i, j), pin));
        }
    }
    completion.sort_by_key(|&(e, _)| e);
    Ok(completion)
}

/// Converts engine symbols (2-bit codes) to potentials.
pub fn potentials_from_symbols(symbols: &[Symbol]) -> Result<Vec<PotentialSymbol>> {
    symbols
        .iter()
        .map(|&s| PotentialSymbol::from_symbol(s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{all_inputs, random_inputs, run_edge_protocol};

    fn symbols_to_potentials(input: &[Symbol]) -> Vec<PotentialSymbol> {
        potentials_from_symbols(input).unwrap()
    }

    #[test]
    fn energy_of_simple_cases() {
        let g = Graph::path(2).unwrap();
        let zero = vec![PotentialSymbol::ZERO];
        assert_eq!(energy(&g, &zero, &[false, true]).unwrap(), 0);
        assert_eq!(energy(&g, &zero, &[true, true]).unwrap(), 0);

        let ne = vec![PotentialSymbol::NOT_EQUAL];
        assert_eq!(energy(&g, &ne, &[false, true]).unwrap(), 1);
        assert_eq!(energy(&g, &ne, &[false, false]).unwrap(), 0);
    }

    #[test]
    fn energy_of_constant_per_path_assignment_is_zero() {
        // The proof's I_F at m=2: not-equal on path edges, zero on hub edges.
        let m = 2;
        let g = Graph::hub_path(m).unwrap();
        let inst = proof_lower_bound_instance(m).unwrap();
        let mut potentials = vec![PotentialSymbol::ZERO; g.num_edges()];
        for (e, p) in inst.fixed {
            potentials[e] = p;
        }
        let x = [false, true, true, false, false];
        assert_eq!(energy(&g, &potentials, &x).unwrap(), 0);
    }

    #[test]
    fn brute_force_tie_break_is_lexicographic() {
        let g = Graph::hub_path(2).unwrap();
        let potentials = vec![PotentialSymbol::ZERO; g.num_edges()];
        assert_eq!(brute_force_map(&g, &potentials).unwrap(), vec![false; 5]);
    }

    #[test]
    fn brute_force_pins_propagate() {
        // Path of 3 vertices, not-equal along the path, ones-pin on one end.
        let g = Graph::path(3).unwrap();
        let potentials = vec![PotentialSymbol::NOT_EQUAL, PotentialSymbol::PIN_ONES];
        assert_eq!(brute_force_map(&g, &potentials).unwrap(), vec![true; 3]);
    }

    #[test]
    fn dp_matches_brute_force_exhaustively_m2() {
        let m = 2;
        let g = Graph::hub_path(m).unwrap();
        for input in all_inputs(4, g.num_edges()) {
            let potentials = symbols_to_potentials(&input);
            let dp = dp_map_hub_path(m, &potentials).unwrap();
            let bf = brute_force_map(&g, &potentials).unwrap();
            assert_eq!(dp, bf, "input {input:?}");
        }
    }

    #[test]
    fn dp_matches_brute_force_sampled_m3() {
        let m = 3;
        let g = Graph::hub_path(m).unwrap();
        for input in random_inputs(4, g.num_edges(), 50, 31) {
            let potentials = symbols_to_potentials(&input);
            let dp = dp_map_hub_path(m, &potentials).unwrap();
            let bf = brute_force_map(&g, &potentials).unwrap();
            assert_eq!(
                energy(&g, &potentials, &dp).unwrap(),
                energy(&g, &potentials, &bf).unwrap()
            );
            assert_eq!(dp, bf, "input {input:?}");
        }
    }

    #[test]
    fn dp_all_zero_potentials() {
        let out = dp_map_hub_path(3, &[PotentialSymbol::ZERO; 15]).unwrap();
        assert_eq!(out, vec![false; 10]);
    }

    #[test]
    fn map_protocol_packs_round_two_states() {
        let m = 2;
        let g = Graph::hub_path(m).unwrap();
        let idx = HubPathIndex { m };
        let p = build_map_edge_protocol(m).unwrap();
        let input = random_inputs(4, g.num_edges(), 1, 5).remove(0);
        let trace = run_edge_protocol(&p, &g, &input).unwrap();
        for j in 1..=m {
            for i in 1..m {
                let h = idx.hub_edge(i, j);
                let pe = idx.path_edge(&g, i, j);
                let packed = &trace.states[2][h];
                assert_eq!(packed.uint(0, 2), input[pe].0 as u64);
                assert_eq!(packed.uint(2, 2), input[h].0 as u64);
            }
        }
        assert_eq!(trace.max_state_bits, 4);
        assert_eq!(trace.rounds(), 3);
    }

    #[test]
    fn map_protocol_equals_dp_exhaustively_m2() {
        let m = 2;
        let g = Graph::hub_path(m).unwrap();
        let p = build_map_edge_protocol(m).unwrap();
        for input in all_inputs(4, g.num_edges()) {
            let potentials = symbols_to_potentials(&input);
            let dp = dp_map_hub_path(m, &potentials).unwrap();
            let trace = run_edge_protocol(&p, &g, &input).unwrap();
            assert_eq!(trace.outputs, dp, "input {input:?}");
        }
    }

    #[test]
    fn map_evaluator_is_equivariant_but_the_rules_are_not() {
        // With the fixed lexicographic tie-break the evaluator returns the
        // coordinatewise-minimum minimizer (the potentials are submodular, so
        // minimizers form a lattice), and that commutes with automorphisms:
        // the input-output map of the protocol is equivariant. The protocol
        // is still non-symmetric at the rule level, which shows up in the
        // trace: on a uniform input, edges with identical neighborhoods end
        // round 2 in different states.
        use crate::protocol::{check_equivariance, run_edge_protocol, sample_automorphisms};
        let m = 2;
        let g = Graph::hub_path(m).unwrap();
        let p = build_map_edge_protocol(m).unwrap();
        let perms = sample_automorphisms(&g, 10, 3);
        let inputs = random_inputs(4, g.num_edges(), 60, 4);
        let report = check_equivariance(
            &g,
            |input| run_edge_protocol(&p, &g, input).unwrap().outputs,
            &perms,
            &inputs,
        )
        .unwrap();
        assert!(report.is_equivariant());

        // Rule-level asymmetry: with every edge carrying the same symbol, the
        // hub edges and path edges end round 2 in different states, so the
        // update rules cannot be a function of the neighborhood multiset.
        let uniform = vec![Symbol(3); g.num_edges()];
        let trace = run_edge_protocol(&p, &g, &uniform).unwrap();
        let idx = HubPathIndex { m };
        let hub_state = &trace.states[2][idx.hub_edge(1, 1)];
        let path_state = &trace.states[2][idx.path_edge(&g, 1, 1)];
        assert_ne!(hub_state, path_state);
    }

    #[test]
    fn proof_instance_realizes_every_pin_vector() {
        for m in [2usize, 3] {
            let g = Graph::hub_path(m).unwrap();
            let inst = proof_lower_bound_instance(m).unwrap();
            for mask in 0..1u32 << m {
                let y: Vec<bool> = (0..m).map(|j| mask >> j & 1 == 1).collect();
                let completion = proof_instance_completion(m, &y).unwrap();
                let mut potentials = vec![PotentialSymbol::ZERO; g.num_edges()];
                for &(e, p) in inst.fixed.iter().chain(&completion) {
                    potentials[e] = p;
                }
                let map = brute_force_map(&g, &potentials).unwrap();
                let restricted: Vec<bool> = inst.s.iter().map(|&v| map[v]).collect();
                assert_eq!(restricted, y, "m={m} y={y:?}");
            }
        }
    }
}
