//! Information-flow lower-bound certificates.
//!
//! For disjoint vertex sets K (the bottleneck) and S, a T-round node protocol
//! can move information from outside F = M_G(N_H^{T-1}(S)), H = G[V minus K],
//! into S only through K, so
//!
//! ```text
//! T * B >= log2( max over I_F of #{ g_S(I_F, I_Fbar) } ) / |K|
//! ```
//!
//! `certified_lower_bound` computes the inner count by enumerating the
//! completions I_Fbar for a fixed I_F (the proofs supply one), or searches
//! over I_F under an explicit evaluation budget. A report is a certificate
//! only when the completion enumeration was exhaustive; otherwise it is a
//! flagged lower bound on the lower bound.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{EdgeSet, Graph, VertexSet};
use crate::protocol::Symbol;
use crate::{Error, Result};

/// How to choose the fixed near-S inputs I_F.
#[derive(Debug, Clone)]
pub enum FixedInputs {
    /// Use exactly this assignment on F (must cover F and nothing else).
    Fixed(Vec<(usize, Symbol)>),
    /// Try all I_F within the budget and keep the best count.
    Search,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateReport {
    pub graph_family: String,
    pub num_vertices: usize,
    pub num_edges: usize,
    pub k: Vec<usize>,
    pub s: Vec<usize>,
    pub rounds: usize,
    pub alphabet: u32,
    /// Edge ids of F = M_G(N_H^{T-1}(S)).
    pub f: Vec<usize>,
    /// The I_F achieving the reported count, as (edge id, symbol) pairs.
    pub i_f: Vec<(usize, u32)>,
    /// M: the number of distinct restrictions g_S over the enumerated
    /// completions.
    pub distinct_outputs: u64,
    /// log2(M) / |K|, the certified lower bound on T*B.
    pub bound: f64,
    /// Completions (per I_F) actually evaluated.
    pub enumerated: u64,
    /// True iff every completion was enumerated; only then is this a
    /// certificate rather than an estimate.
    pub exhaustive: bool,
    /// True iff I_F was searched rather than supplied.
    pub searched: bool,
    /// True iff the I_F search itself covered all of Phi^F.
    pub search_exhaustive: bool,
}

pub struct CertificateTask<'a> {
    pub graph: &'a Graph,
    pub k: VertexSet,
    pub s: VertexSet,
    /// T, the round count being certified against; the light cone uses T-1.
    pub rounds: usize,
    pub alphabet: u32,
    /// Maximum number of task evaluations.
    pub budget: u64,
}

/// Computes the certificate by direct enumeration. `eval` is the task
/// evaluator g (an input -> per-vertex outputs function); it is called once
/// per enumerated completion.
pub fn certified_lower_bound(
    task: &CertificateTask<'_>,
    mode: FixedInputs,
    eval: impl Fn(&[Symbol]) -> Vec<bool> + Sync,
) -> Result<CertificateReport> {
    let g = task.graph;
    if task.k.is_empty() {
        return Err(Error::InvalidParameter(
            "the bottleneck set K must be nonempty".into(),
        ));
    }
    if task.rounds == 0 {
        return Err(Error::InvalidParameter("rounds must be >= 1".into()));
    }
    if task.alphabet < 1 {
        return Err(Error::InvalidParameter("alphabet must be nonempty".into()));
    }
    if task.s.len() > 63 {
        return Err(Error::InvalidParameter("S is too large to pack".into()));
    }

    let f = g.restricted_ball_edges(&task.k, &task.s, task.rounds - 1)?;
    let f_bar: Vec<usize> = (0..g.num_edges()).filter(|&e| !f.contains(e)).collect();

    let completions_total = count_inputs(task.alphabet, f_bar.len());
    let per_fixed = completions_total.min(task.budget.max(1) as u128);

    let fixed_assignments: Vec<Vec<(usize, Symbol)>>;
    let searched;
    let search_exhaustive;
    match mode {
        FixedInputs::Fixed(assignment) => {
            validate_fixed(&assignment, &f, task.alphabet)?;
            fixed_assignments = vec![assignment];
            searched = false;
            search_exhaustive = true;
        }
        FixedInputs::Search => {
            let total_f = count_inputs(task.alphabet, f.len());
            let budget_outer = (task.budget.max(1) as u128 / per_fixed).max(1);
            let tried = total_f.min(budget_outer);
            fixed_assignments = (0..tried)
                .map(|code| {
                    digits(code, task.alphabet, f.len())
                        .into_iter()
                        .zip(f.iter())
                        .map(|(sym, e)| (e, sym))
                        .collect()
                })
                .collect();
            searched = true;
            search_exhaustive = tried == total_f;
        }
    }

    let s_vertices: Vec<usize> = task.s.iter().collect();
    let mut best: Option<(u64, Vec<(usize, Symbol)>)> = None;
    for assignment in &fixed_assignments {
        let mut base = vec![Symbol(0); g.num_edges()];
        for &(e, sym) in assignment {
            base[e] = sym;
        }
        let distinct = (0..per_fixed as u64)
            .into_par_iter()
            .fold(HashSet::new, |mut acc: HashSet<u64>, code| {
                let mut input = base.clone();
                for (d, &e) in digits(code as u128, task.alphabet, f_bar.len())
                    .into_iter()
                    .zip(&f_bar)
                {
                    input[e] = d;
                }
                let outputs = eval(&input);
                let packed = s_vertices
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &v)| acc | (outputs[v] as u64) << i);
                acc.insert(packed);
                acc
            })
            .reduce(HashSet::new, |mut a, b| {
                a.extend(b);
                a
            });
        let m = distinct.len() as u64;
        if best.as_ref().is_none_or(|(bm, _)| m > *bm) {
            best = Some((m, assignment.clone()));
        }
    }
    let (m, i_f) = best.expect("at least one I_F was tried");

    Ok(CertificateReport {
        graph_family: g.family().name().to_string(),
        num_vertices: g.num_vertices(),
        num_edges: g.num_edges(),
        k: task.k.iter().collect(),
        s: s_vertices,
        rounds: task.rounds,
        alphabet: task.alphabet,
        f: f.iter().collect(),
        i_f: i_f.into_iter().map(|(e, sym)| (e, sym.0)).collect(),
        distinct_outputs: m,
        bound: (m as f64).log2() / task.k.len() as f64,
        enumerated: per_fixed as u64,
        exhaustive: per_fixed == completions_total,
        searched,
        search_exhaustive,
    })
}

fn validate_fixed(assignment: &[(usize, Symbol)], f: &EdgeSet, alphabet: u32) -> Result<()> {
    let mut covered = HashSet::new();
    for &(e, sym) in assignment {
        if !f.contains(e) {
            return Err(Error::InvalidParameter(format!(
                "fixed input on edge {e}, which is outside F"
            )));
        }
        if sym.0 >= alphabet {
            return Err(Error::InvalidParameter(format!(
                "fixed symbol {} out of alphabet",
                sym.0
            )));
        }
        if !covered.insert(e) {
            return Err(Error::InvalidParameter(format!("edge {e} fixed twice")));
        }
    }
    if covered.len() != f.len() {
        return Err(Error::InvalidParameter(format!(
            "I_F covers {} of {} edges in F",
            covered.len(),
            f.len()
        )));
    }
    Ok(())
}

fn count_inputs(alphabet: u32, len: usize) -> u128 {
    (alphabet as u128)
        .checked_pow(len as u32)
        .unwrap_or(u128::MAX)
}

fn digits(mut code: u128, alphabet: u32, len: usize) -> Vec<Symbol> {
    (0..len)
        .map(|_| {
            let d = (code % alphabet as u128) as u32;
            code /= alphabet as u128;
            Symbol(d)
        })
        .collect()
}

/// The hub-path MAP certificate with the proof's K, S and I_F at T = 1,
/// evaluated by the DP MAP evaluator.
pub fn map_certificate(m: usize, budget: u64, search: bool) -> Result<CertificateReport> {
    let g = Graph::hub_path(m)?;
    let inst = crate::map::proof_lower_bound_instance(m)?;
    let task = CertificateTask {
        graph: &g,
        k: VertexSet::new(inst.k.iter().copied()),
        s: VertexSet::new(inst.s.iter().copied()),
        rounds: 1,
        alphabet: 4,
        budget,
    };
    let mode = if search {
        FixedInputs::Search
    } else {
        FixedInputs::Fixed(
            inst.fixed
                .iter()
                .map(|&(e, p)| (e, p.to_symbol()))
                .collect(),
        )
    };
    certified_lower_bound(&task, mode, |input| {
        let potentials = crate::map::potentials_from_symbols(input).expect("codes in range");
        crate::map::dp_map_hub_path(m, &potentials).expect("total input")
    })
}

/// The counting-task certificate with the claim's K, S and I_F at T = 1.
pub fn counting_certificate(m: usize, budget: u64, search: bool) -> Result<CertificateReport> {
    let g = Graph::depth2_tree(m)?;
    let inst = crate::tasks::counting_lower_bound_instance(m)?;
    let task = CertificateTask {
        graph: &g,
        k: VertexSet::new(inst.k.iter().copied()),
        s: VertexSet::new(inst.s.iter().copied()),
        rounds: 1,
        alphabet: 2,
        budget,
    };
    let mode = if search {
        FixedInputs::Search
    } else {
        FixedInputs::Fixed(inst.fixed.clone())
    };
    certified_lower_bound(&task, mode, |input| {
        crate::tasks::counting_task_g(m, input).expect("binary input")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_certificate_m2_reaches_every_pattern() {
        let report = map_certificate(2, 1 << 20, false).unwrap();
        assert!(report.exhaustive);
        assert_eq!(report.distinct_outputs, 4);
        assert!((report.bound - 2.0).abs() < 1e-12);
        assert_eq!(report.enumerated, 16); // |Fbar| = 2, alphabet 4
    }

    #[test]
    fn empty_bottleneck_is_rejected() {
        let g = Graph::hub_path(2).unwrap();
        let task = CertificateTask {
            graph: &g,
            k: VertexSet::empty(),
            s: VertexSet::new([1]),
            rounds: 1,
            alphabet: 2,
            budget: 100,
        };
        assert!(matches!(
            certified_lower_bound(&task, FixedInputs::Search, |_| vec![false; 5]),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn budget_truncation_is_flagged() {
        let report = map_certificate(2, 7, false).unwrap();
        assert!(!report.exhaustive);
        assert_eq!(report.enumerated, 7);
        assert!(report.distinct_outputs <= 4);
    }

    #[test]
    fn search_mode_at_least_matches_the_fixed_instance() {
        // Tiny search over a star with the OR task: completions toggle the OR
        // unless I_F already pins it to 1.
        let g = Graph::star(3).unwrap();
        let task = CertificateTask {
            graph: &g,
            k: VertexSet::new([0]),
            s: VertexSet::new([1]),
            rounds: 1,
            alphabet: 2,
            budget: 1 << 12,
        };
        let report = certified_lower_bound(&task, FixedInputs::Search, |input| {
            let any = input.iter().any(|s| s.as_bool());
            vec![any; 4]
        })
        .unwrap();
        assert!(report.searched);
        assert_eq!(report.distinct_outputs, 2);
        assert!((report.bound - 1.0).abs() < 1e-12);
    }
}
