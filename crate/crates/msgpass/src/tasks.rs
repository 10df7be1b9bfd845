//! The separation tasks and their protocols: the input-summation counting
//! task on depth-2 trees, the duplicate-detection task on stars (large
//! alphabet, plus the binary histogram counterexample), and the mirrored
//! set-disjointness task on complete graphs.

use crate::graph::Graph;
use crate::protocol::{
    BitState, EdgeProtocol, NodeProtocol, StructuredValue, Symbol, SymmetricEdgeProtocol,
};
use crate::{Error, Result};

fn require_binary(input: &[Symbol]) -> Result<()> {
    match input.iter().find(|s| s.0 > 1) {
        Some(s) => Err(Error::Format(format!(
            "expected a binary input, found {}",
            s.0
        ))),
        None => Ok(()),
    }
}

fn bits_for(max_value: usize) -> usize {
    (usize::BITS - max_value.leading_zeros()).max(1) as usize
}

// ---------------------------------------------------------------------------
// Counting task (depth-2 tree)
// ---------------------------------------------------------------------------

/// Input summation C(I)_e: the sum of the inputs over the closed edge
/// neighborhood M_G(e).
pub fn input_summation(g: &Graph, input: &[Symbol]) -> Vec<u64> {
    (0..g.num_edges())
        .map(|e| g.edge_neighbors(e).iter().map(|&f| input[f].0 as u64).sum())
        .collect()
}

/// The counting task on the depth-2 tree with branching m: a middle vertex u
/// outputs 1 iff strictly more than m+1 edges in M_G({0,u}) share the input
/// summation of {0,u}; leaves output 0; the root ORs the middle outputs.
pub fn counting_task_g(m: usize, input: &[Symbol]) -> Result<Vec<bool>> {
    let g = Graph::depth2_tree(m)?;
    if input.len() != g.num_edges() {
        return Err(Error::ShapeMismatch(format!(
            "{} inputs for {} edges",
            input.len(),
            g.num_edges()
        )));
    }
    require_binary(input)?;
    let c = input_summation(&g, input);
    let mut outputs = vec![false; g.num_vertices()];
    for (root_edge, out) in outputs[1..=m].iter_mut().enumerate() {
        // edges {0,u} are the first m ids, in middle-vertex order
        let matches = g
            .edge_neighbors(root_edge)
            .iter()
            .filter(|&&e| c[e] == c[root_edge])
            .count();
        *out = matches > m + 1;
    }
    outputs[0] = (1..=m).any(|u| outputs[u]);
    Ok(outputs)
}

/// The 3-round symmetric edge protocol for the counting task: load the input,
/// sum the neighborhood, then test whether more than m+1 neighbors (itself
/// included) share the sum; vertices OR their incident indicators. States are
/// integers at most 2m+1, within ceil(log2(2m+2)) bits.
pub fn build_counting_edge_protocol(m: usize) -> Result<SymmetricEdgeProtocol> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "counting protocol needs m >= 1".into(),
        ));
    }
    let threshold = (m + 1) as i64;
    let budget = bits_for(2 * m + 1);
    let rule = move |step: &crate::protocol::SymEdgeStep<'_>| -> StructuredValue {
        let int = |v: &StructuredValue| v.as_int().expect("integer states");
        let (side_a, side_b) = step.sides();
        match step.round {
            1 => StructuredValue::Int(step.own_input().0 as i64),
            2 => {
                // Sum over the set M_G(e): the edge itself sits in both sides.
                let total: i64 = side_a.iter().chain(side_b.iter()).map(|v| int(v)).sum();
                StructuredValue::Int(total - int(step.own_state()))
            }
            3 => {
                let own = int(step.own_state());
                let eq = |side: &[&StructuredValue]| {
                    side.iter().filter(|v| int(v) == own).count() as i64
                };
                let matches = eq(side_a) + eq(side_b) - 1;
                StructuredValue::Int((matches > threshold) as i64)
            }
            _ => unreachable!("protocol has 3 rounds"),
        }
    };
    let aggregate = |incident: &[&StructuredValue]| incident.iter().any(|v| v.as_int() == Some(1));
    Ok(SymmetricEdgeProtocol::new(3, Some(budget), rule, aggregate))
}

/// The counting task's light-cone instance: K = root, S = {1..m/2},
/// I_F with unary-coded subtree sums u on each kept subtree.
pub struct CountingInstance {
    pub k: Vec<usize>,
    pub s: Vec<usize>,
    pub fixed: Vec<(usize, Symbol)>,
}

pub fn counting_lower_bound_instance(m: usize) -> Result<CountingInstance> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::InvalidParameter(
            "counting instance needs even m >= 2".into(),
        ));
    }
    let g = Graph::depth2_tree(m)?;
    let leaf = |u: usize, j: usize| m + (u - 1) * m + j;
    let mut fixed = Vec::new();
    let mut s = Vec::new();
    for u in 1..=m / 2 {
        s.push(u);
        fixed.push((u - 1, Symbol(0))); // edge {0,u}
        for j in 1..=m {
            let e = g.edge_id(u, leaf(u, j)).expect("leaf edge");
            fixed.push((e, Symbol((j <= u) as u32)));
        }
    }
    fixed.sort_by_key(|&(e, _)| e);
    Ok(CountingInstance {
        k: vec![0],
        s,
        fixed,
    })
}

/// The completion that encodes x on the free subtrees: subtree v > m/2 gets
/// the unary sum (v - m/2) when x_{v - m/2} = 1 and the zero sum otherwise.
pub fn counting_instance_completion(m: usize, x: &[bool]) -> Result<Vec<(usize, Symbol)>> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::InvalidParameter(
            "counting instance needs even m >= 2".into(),
        ));
    }
    if x.len() != m / 2 {
        return Err(Error::ShapeMismatch(format!(
            "{} bits for m/2 = {}",
            x.len(),
            m / 2
        )));
    }
    let g = Graph::depth2_tree(m)?;
    let leaf = |u: usize, j: usize| m + (u - 1) * m + j;
    let mut completion = Vec::new();
    for v in m / 2 + 1..=m {
        completion.push((v - 1, Symbol(0))); // edge {0,v}
        let bit = x[v - m / 2 - 1];
        for j in 1..=m {
            let e = g.edge_id(v, leaf(v, j)).expect("leaf edge");
            completion.push((e, Symbol((bit && j <= v - m / 2) as u32)));
        }
    }
    completion.sort_by_key(|&(e, _)| e);
    Ok(completion)
}

// ---------------------------------------------------------------------------
// Duplicate detection on stars
// ---------------------------------------------------------------------------

/// Duplicate detection on the star with n leaves: leaf v outputs 1 iff some
/// other edge carries the same symbol as {0,v}; the center outputs the OR of
/// the leaf outputs.
pub fn duplicate_task_g(n: usize, input: &[Symbol]) -> Result<Vec<bool>> {
    let g = Graph::star(n)?;
    if input.len() != g.num_edges() {
        return Err(Error::ShapeMismatch(format!(
            "{} inputs for {} edges",
            input.len(),
            g.num_edges()
        )));
    }
    let mut outputs = vec![false; n + 1];
    for v in 1..=n {
        outputs[v] = (0..n).any(|e| e != v - 1 && input[e] == input[v - 1]);
    }
    outputs[0] = outputs[1..].iter().any(|&b| b);
    Ok(outputs)
}

/// The large-alphabet variant: symbols must lie in [n] = {1..n}.
pub fn large_alphabet_task_g(n: usize, input: &[Symbol]) -> Result<Vec<bool>> {
    if let Some(s) = input.iter().find(|s| s.0 < 1 || s.0 > n as u32) {
        return Err(Error::Format(format!(
            "symbol {} outside the alphabet [{n}]",
            s.0
        )));
    }
    duplicate_task_g(n, input)
}

/// The symmetric edge protocol for duplicate detection with O(log n)-bit
/// states: load the symbol, then flag whether any other adjacent edge loaded
/// the same one; vertices OR their incident flags.
///
/// Two rounds: edge rules see only their own input, and a leaf's aggregation
/// sees only its own edge's state, so the comparison must happen on the edges
/// in round 2 after round 1 exposes the symbols as states.
pub fn build_duplicate_edge_protocol(n: usize) -> Result<SymmetricEdgeProtocol> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "duplicate protocol needs n >= 1".into(),
        ));
    }
    let budget = bits_for(n);
    let rule = move |step: &crate::protocol::SymEdgeStep<'_>| -> StructuredValue {
        let int = |v: &StructuredValue| v.as_int().expect("integer states");
        match step.round {
            1 => StructuredValue::Int(step.own_input().0 as i64),
            2 => {
                let own = step.own_input().0 as i64;
                let (side_a, side_b) = step.sides();
                let eq = |side: &[&StructuredValue]| {
                    side.iter().filter(|v| int(v) == own).count() as i64
                };
                // Set count over M_G(e) (the edge itself sits in both sides),
                // minus the edge's own match.
                let others = eq(side_a) + eq(side_b) - 1 - 1;
                StructuredValue::Int((others > 0) as i64)
            }
            _ => unreachable!("protocol has 2 rounds"),
        }
    };
    let aggregate = |incident: &[&StructuredValue]| incident.iter().any(|v| v.as_int() == Some(1));
    Ok(SymmetricEdgeProtocol::new(2, Some(budget), rule, aggregate))
}

/// The binary-alphabet star task has no information bottleneck: the center
/// can summarize all inputs as a histogram. Two node rounds: the center
/// counts the ones (it sees every edge input), then each leaf combines the
/// count with its own input to decide whether a duplicate exists.
pub fn build_histogram_node_protocol(n: usize) -> Result<NodeProtocol> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "histogram protocol needs n >= 1".into(),
        ));
    }
    let width = bits_for(n);
    let rule = move |step: &crate::protocol::NodeStep<'_>| -> BitState {
        match (step.round, step.vertex) {
            (1, 0) => {
                let ones = step
                    .incident_edges()
                    .iter()
                    .filter(|&&e| step.input(e).as_bool())
                    .count() as u64;
                BitState::from_uint(ones, width)
            }
            (1, _) => BitState::zeros(width),
            (2, v) => {
                let ones = step.state(0).uint(0, width) as usize;
                let zeros = n - ones;
                let dup = if v == 0 {
                    ones >= 2 || zeros >= 2
                } else {
                    let own_edge = step.incident_edges()[0];
                    if step.input(own_edge).as_bool() {
                        ones >= 2
                    } else {
                        zeros >= 2
                    }
                };
                BitState::from_uint(dup as u64, 1).padded(width)
            }
            _ => unreachable!("protocol has 2 rounds"),
        }
    };
    Ok(NodeProtocol::new(2, width, rule))
}

// ---------------------------------------------------------------------------
// Mirrored set disjointness on complete graphs
// ---------------------------------------------------------------------------

/// Mirror of a 0-based vertex id on K_n: v goes to n-1-v (1-based i to n+1-i).
pub fn mirror_vertex(n: usize, v: usize) -> usize {
    n - 1 - v
}

/// The mirrored-pair intersection task on K_n (n even): every vertex outputs
/// 1 iff some edge {a,b} with both endpoints in the left half carries a 1
/// together with its mirror {n-1-a, n-1-b}.
pub fn disjointness_task_g(n: usize, input: &[Symbol]) -> Result<Vec<bool>> {
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(
            "disjointness task needs even n".into(),
        ));
    }
    let g = Graph::complete(n)?;
    if input.len() != g.num_edges() {
        return Err(Error::ShapeMismatch(format!(
            "{} inputs for {} edges",
            input.len(),
            g.num_edges()
        )));
    }
    require_binary(input)?;
    let mut hit = false;
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if b < n / 2 && input[e].as_bool() {
            let mirror = g
                .edge_id(mirror_vertex(n, a), mirror_vertex(n, b))
                .expect("mirror edge exists");
            if input[mirror].as_bool() {
                hit = true;
                break;
            }
        }
    }
    Ok(vec![hit; n])
}

/// The two-party set-disjointness function: 1 iff the supports never overlap.
pub fn set_disjointness(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| !(x && y))
}

/// Splits a K_n input into the two mirrored halves (Alice's left-half edges
/// and Bob's mirrored right-half edges, identically indexed), so that
/// g(I) = 1 - DISJ(x, y).
pub fn disjointness_split(n: usize, input: &[Symbol]) -> Result<(Vec<bool>, Vec<bool>)> {
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter("needs even n".into()));
    }
    let g = Graph::complete(n)?;
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if b < n / 2 {
            let mirror = g
                .edge_id(mirror_vertex(n, a), mirror_vertex(n, b))
                .expect("mirror edge exists");
            x.push(input[e].as_bool());
            y.push(input[mirror].as_bool());
        }
    }
    Ok((x, y))
}

/// The 6-round, 1-bit edge protocol for the mirrored-disjointness task.
///
/// Rounds: (1) load the input bit; (2) read the edge with the lower endpoint
/// mirrored; (3) read the edge with the higher endpoint mirrored, which now
/// holds the full mirror's input — correct on every edge with both endpoints
/// on one side, and in particular on the left half; anti-diagonal edges are
/// their own mirrors and keep their own state; (4) AND of the own input, the
/// mirror's input and the left-half indicator; (5)-(6) OR over the edge
/// neighborhood, which has diameter two on a complete graph's line graph.
/// Aggregation reads the lowest incident edge.
pub fn build_disjointness_edge_protocol(n: usize) -> Result<EdgeProtocol> {
    if !n.is_multiple_of(2) || n < 2 {
        return Err(Error::InvalidParameter(
            "disjointness protocol needs even n >= 2".into(),
        ));
    }
    let g = Graph::complete(n)?;
    let ne = g.num_edges();
    let mut flip_low = vec![None; ne];
    let mut flip_high = vec![None; ne];
    let mut is_left = vec![false; ne];
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let low = mirror_vertex(n, a);
        if low != b {
            flip_low[e] = Some(g.edge_id(low, b).expect("edge of K_n"));
        }
        let high = mirror_vertex(n, b);
        if high != a {
            flip_high[e] = Some(g.edge_id(a, high).expect("edge of K_n"));
        }
        is_left[e] = b < n / 2;
    }

    let rule = move |step: &crate::protocol::EdgeStep<'_>| -> BitState {
        let bit = |b: bool| BitState::from_uint(b as u64, 1);
        match step.round {
            1 => bit(step.own_input().as_bool()),
            2 => match flip_low[step.edge] {
                Some(f) => step.state(f).clone(),
                None => step.own_state().clone(),
            },
            3 => match flip_high[step.edge] {
                Some(f) => step.state(f).clone(),
                None => step.own_state().clone(),
            },
            4 => bit(is_left[step.edge] && step.own_input().as_bool() && step.own_state().bit(0)),
            5 | 6 => bit(step.adjacent_edges().iter().any(|&f| step.state(f).bit(0))),
            _ => unreachable!("protocol has 6 rounds"),
        }
    };
    let aggregate = |readout: &crate::protocol::VertexReadout<'_>| -> bool {
        readout.state(readout.incident_edges()[0]).bit(0)
    };
    Ok(EdgeProtocol::new(6, 1, rule, aggregate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{
        all_inputs, random_inputs, run_edge_protocol, run_node_protocol,
        run_symmetric_edge_protocol,
    };

    #[test]
    fn counting_all_zero_input_matches_everywhere() {
        // C is identically zero, so every {0,u} sees 2m matching edges > m+1.
        let m = 2;
        let out = counting_task_g(m, &[Symbol(0); 6]).unwrap();
        assert_eq!(out, vec![true, true, true, false, false, false, false]);
    }

    #[test]
    fn counting_distinct_subtree_sums() {
        // m=2, root edges 0; subtree sums (1, 2): no match across branches.
        let m = 2;
        let g = Graph::depth2_tree(m).unwrap();
        let mut input = vec![Symbol(0); 6];
        input[g.edge_id(1, 3).unwrap()] = Symbol(1); // subtree 1 sum 1
        input[g.edge_id(2, 5).unwrap()] = Symbol(1); // subtree 2 sum 2
        input[g.edge_id(2, 6).unwrap()] = Symbol(1);
        let out = counting_task_g(m, &input).unwrap();
        assert_eq!(&out[1..=2], &[false, false]);
        assert!(!out[0]);

        // Equal subtree sums (1, 1): both middles fire.
        let mut input = vec![Symbol(0); 6];
        input[g.edge_id(1, 3).unwrap()] = Symbol(1);
        input[g.edge_id(2, 5).unwrap()] = Symbol(1);
        let out = counting_task_g(m, &input).unwrap();
        assert_eq!(&out[1..=2], &[true, true]);
        assert!(out[0]);
    }

    #[test]
    fn counting_protocol_equals_task_exhaustively_m2() {
        let m = 2;
        let g = Graph::depth2_tree(m).unwrap();
        let p = build_counting_edge_protocol(m).unwrap();
        for input in all_inputs(2, g.num_edges()) {
            let direct = counting_task_g(m, &input).unwrap();
            let trace = run_symmetric_edge_protocol(&p, &g, &input).unwrap();
            assert_eq!(trace.outputs, direct, "input {input:?}");
            // Round-2 states are exactly the input summations.
            let c = input_summation(&g, &input);
            for (e, &ce) in c.iter().enumerate() {
                assert_eq!(trace.states[2][e].as_int(), Some(ce as i64));
            }
            // Leaf edges never fire in round 3.
            for u in 1..=m {
                for j in 1..=m {
                    let e = g.edge_id(u, m + (u - 1) * m + j).unwrap();
                    assert_eq!(trace.states[3][e].as_int(), Some(0));
                }
            }
        }
    }

    #[test]
    fn counting_instance_realizes_every_pattern() {
        for m in [2usize, 4] {
            let g = Graph::depth2_tree(m).unwrap();
            let inst = counting_lower_bound_instance(m).unwrap();
            let mut seen = std::collections::HashSet::new();
            for mask in 0..1u32 << (m / 2) {
                let x: Vec<bool> = (0..m / 2).map(|i| mask >> i & 1 == 1).collect();
                let completion = counting_instance_completion(m, &x).unwrap();
                let mut input = vec![Symbol(0); g.num_edges()];
                for &(e, sym) in inst.fixed.iter().chain(&completion) {
                    input[e] = sym;
                }
                let out = counting_task_g(m, &input).unwrap();
                let restricted: Vec<bool> = inst.s.iter().map(|&v| out[v]).collect();
                assert_eq!(restricted, x, "m={m}");
                seen.insert(restricted);
            }
            assert_eq!(seen.len(), 1 << (m / 2));
        }
    }

    #[test]
    fn duplicate_task_values() {
        let n = 4;
        let all_distinct = [Symbol(1), Symbol(2), Symbol(3), Symbol(4)];
        assert_eq!(
            large_alphabet_task_g(n, &all_distinct).unwrap(),
            vec![false; 5]
        );
        let all_equal = [Symbol(2); 4];
        assert_eq!(large_alphabet_task_g(n, &all_equal).unwrap(), vec![true; 5]);
        let mixed = [Symbol(1), Symbol(2), Symbol(2), Symbol(3)];
        assert_eq!(
            large_alphabet_task_g(n, &mixed).unwrap(),
            vec![true, false, true, true, false]
        );
        assert!(large_alphabet_task_g(n, &[Symbol(0); 4]).is_err());
        assert!(large_alphabet_task_g(n, &[Symbol(5); 4]).is_err());
    }

    #[test]
    fn duplicate_protocol_equals_task() {
        let n = 4;
        let g = Graph::star(n).unwrap();
        let p = build_duplicate_edge_protocol(n).unwrap();
        for input in all_inputs(n as u32, g.num_edges()) {
            // shift symbols into [n]
            let shifted: Vec<Symbol> = input.iter().map(|s| Symbol(s.0 + 1)).collect();
            let direct = large_alphabet_task_g(n, &shifted).unwrap();
            let trace = run_symmetric_edge_protocol(&p, &g, &shifted).unwrap();
            assert_eq!(trace.outputs, direct, "input {shifted:?}");
        }
    }

    #[test]
    fn histogram_protocol_solves_the_binary_star_task() {
        for n in [2usize, 3, 5] {
            let g = Graph::star(n).unwrap();
            let p = build_histogram_node_protocol(n).unwrap();
            for input in all_inputs(2, g.num_edges()) {
                let direct = duplicate_task_g(n, &input).unwrap();
                let trace = run_node_protocol(&p, &g, &input).unwrap();
                assert_eq!(trace.outputs, direct, "n={n} input {input:?}");
            }
        }
    }

    #[test]
    fn histogram_examples_from_small_cases() {
        // all zeros: every leaf has a duplicate
        let out = duplicate_task_g(3, &[Symbol(0); 3]).unwrap();
        assert_eq!(out, vec![true; 4]);
        // n=2, (0,1): no duplicates
        let out = duplicate_task_g(2, &[Symbol(0), Symbol(1)]).unwrap();
        assert_eq!(out, vec![false; 3]);
        // n=3, (1,1,0)
        let out = duplicate_task_g(3, &[Symbol(1), Symbol(1), Symbol(0)]).unwrap();
        assert_eq!(out, vec![true, true, true, false]);
    }

    #[test]
    fn disjointness_task_values() {
        let n = 4;
        let g = Graph::complete(n).unwrap();
        assert_eq!(
            disjointness_task_g(n, &[Symbol(0); 6]).unwrap(),
            vec![false; 4]
        );
        assert_eq!(
            disjointness_task_g(n, &[Symbol(1); 6]).unwrap(),
            vec![true; 4]
        );
        // I({0,1}) = I({2,3}) = 1: {2,3} mirrors {0,1}.
        let mut input = vec![Symbol(0); 6];
        input[g.edge_id(0, 1).unwrap()] = Symbol(1);
        input[g.edge_id(2, 3).unwrap()] = Symbol(1);
        assert_eq!(disjointness_task_g(n, &input).unwrap(), vec![true; 4]);
        assert!(disjointness_task_g(3, &[Symbol(0); 3]).is_err());
    }

    #[test]
    fn disjointness_protocol_equals_task_exhaustively_n4() {
        let n = 4;
        let g = Graph::complete(n).unwrap();
        let p = build_disjointness_edge_protocol(n).unwrap();
        assert_eq!(p.rounds, 6);
        assert_eq!(p.memory, 1);
        for input in all_inputs(2, g.num_edges()) {
            let direct = disjointness_task_g(n, &input).unwrap();
            let trace = run_edge_protocol(&p, &g, &input).unwrap();
            assert_eq!(trace.outputs, direct, "input {input:?}");
            // Round 6 states all equal g(I).
            for e in 0..g.num_edges() {
                assert_eq!(trace.states[6][e].bit(0), direct[0]);
            }
        }
    }

    #[test]
    fn sampled_equality_at_larger_sizes() {
        // Every shipped protocol/task pair, beyond the exhaustive small size.
        for n in [6usize, 8] {
            let g = Graph::star(n).unwrap();
            let p = build_duplicate_edge_protocol(n).unwrap();
            for input in random_inputs(n as u32, g.num_edges(), 200, 60 + n as u64) {
                let shifted: Vec<Symbol> = input.iter().map(|s| Symbol(s.0 + 1)).collect();
                let direct = large_alphabet_task_g(n, &shifted).unwrap();
                let trace = run_symmetric_edge_protocol(&p, &g, &shifted).unwrap();
                assert_eq!(trace.outputs, direct, "duplicate n={n}");
            }
        }
        for n in [8usize, 10] {
            let g = Graph::star(n).unwrap();
            let p = build_histogram_node_protocol(n).unwrap();
            for input in random_inputs(2, g.num_edges(), 200, 70 + n as u64) {
                let direct = duplicate_task_g(n, &input).unwrap();
                let trace = run_node_protocol(&p, &g, &input).unwrap();
                assert_eq!(trace.outputs, direct, "histogram n={n}");
            }
        }
        for n in [6usize, 8] {
            let g = Graph::complete(n).unwrap();
            let p = build_disjointness_edge_protocol(n).unwrap();
            for input in random_inputs(2, g.num_edges(), 200, 80 + n as u64) {
                let direct = disjointness_task_g(n, &input).unwrap();
                let trace = run_edge_protocol(&p, &g, &input).unwrap();
                assert_eq!(trace.outputs, direct, "disjointness n={n}");
            }
        }
        for m in [3usize, 4] {
            let g = Graph::depth2_tree(m).unwrap();
            let p = build_counting_edge_protocol(m).unwrap();
            for input in random_inputs(2, g.num_edges(), 200, 90 + m as u64) {
                let direct = counting_task_g(m, &input).unwrap();
                let trace = run_symmetric_edge_protocol(&p, &g, &input).unwrap();
                assert_eq!(trace.outputs, direct, "counting m={m}");
            }
        }
    }

    #[test]
    fn shipped_symmetric_protocols_are_equivariant() {
        use crate::protocol::{check_equivariance, sample_automorphisms};

        let m = 3;
        let g = Graph::depth2_tree(m).unwrap();
        let p = build_counting_edge_protocol(m).unwrap();
        let report = check_equivariance(
            &g,
            |input| run_symmetric_edge_protocol(&p, &g, input).unwrap().outputs,
            &sample_automorphisms(&g, 15, 1),
            &random_inputs(2, g.num_edges(), 15, 2),
        )
        .unwrap();
        assert!(report.is_equivariant());

        let n = 5;
        let g = Graph::star(n).unwrap();
        let p = build_duplicate_edge_protocol(n).unwrap();
        let inputs: Vec<Vec<Symbol>> = random_inputs(n as u32, g.num_edges(), 15, 3)
            .into_iter()
            .map(|input| input.into_iter().map(|s| Symbol(s.0 + 1)).collect())
            .collect();
        let report = check_equivariance(
            &g,
            |input| run_symmetric_edge_protocol(&p, &g, input).unwrap().outputs,
            &sample_automorphisms(&g, 15, 4),
            &inputs,
        )
        .unwrap();
        assert!(report.is_equivariant());
    }

    #[test]
    fn disjointness_cross_checks_against_disj() {
        let n = 6;
        let g = Graph::complete(n).unwrap();
        for input in random_inputs(2, g.num_edges(), 100, 17) {
            let direct = disjointness_task_g(n, &input).unwrap();
            let (x, y) = disjointness_split(n, &input).unwrap();
            assert_eq!(direct[0], !set_disjointness(&x, &y));
        }
    }
}
