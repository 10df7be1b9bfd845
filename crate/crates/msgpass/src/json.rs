//! The on-disk JSON formats and their validating parsers.
//!
//! Every parser here accepts untrusted bytes and returns `Error::Format`
//! (never panics) on anything malformed: syntax errors, out-of-range ids,
//! duplicate or non-canonical edges, shape mismatches, non-finite numbers,
//! or family metadata that does not reproduce the stated edge list. These
//! functions are the fuzz-target entry points.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::gcn::{FeatureMap, GcnStack, StarDataset};
use crate::graph::{Graph, GraphFamily};
use crate::ising::{IsingDataset, IsingModel};
use crate::map::PotentialSymbol;
use crate::protocol::Symbol;
use crate::{Error, Result};

/// Caps on parsed sizes, so hostile inputs cannot request huge allocations.
pub const MAX_JSON_VERTICES: usize = 100_000;
pub const MAX_JSON_EDGES: usize = 1_000_000;
pub const MAX_JSON_SAMPLES: usize = 1_000_000;

fn syntax<E: std::fmt::Display>(err: E) -> Error {
    Error::Format(err.to_string())
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    family: String,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    params: serde_json::Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

pub fn graph_to_json(g: &Graph) -> Value {
    let mut params = serde_json::Map::new();
    let mut seed = None;
    match *g.family() {
        GraphFamily::HubPath { m } | GraphFamily::Depth2Tree { m } => {
            params.insert("m".into(), m.into());
        }
        GraphFamily::Star { n } | GraphFamily::Complete { n } => {
            params.insert("n".into(), n.into());
        }
        GraphFamily::RandomTree { n, seed: s } => {
            params.insert("n".into(), n.into());
            seed = Some(s);
        }
        GraphFamily::Custom => {}
    }
    serde_json::to_value(GraphJson {
        num_vertices: g.num_vertices(),
        edges: g.edges().to_vec(),
        family: g.family().name().to_string(),
        params,
        seed,
        labels: g.labels().map(|l| l.to_vec()),
    })
    .expect("graph serialization is infallible")
}

pub fn graph_to_json_string(g: &Graph) -> String {
    serde_json::to_string_pretty(&graph_to_json(g)).expect("valid json")
}

pub fn parse_graph(bytes: &[u8]) -> Result<Graph> {
    let raw: GraphJson = serde_json::from_slice(bytes).map_err(syntax)?;
    graph_from_raw(raw)
}

fn graph_from_raw(raw: GraphJson) -> Result<Graph> {
    if raw.num_vertices > MAX_JSON_VERTICES {
        return Err(Error::Format(format!(
            "vertex count {} exceeds the cap {MAX_JSON_VERTICES}",
            raw.num_vertices
        )));
    }
    if raw.edges.len() > MAX_JSON_EDGES {
        return Err(Error::Format(format!(
            "edge count {} exceeds the cap {MAX_JSON_EDGES}",
            raw.edges.len()
        )));
    }
    let param = |name: &str| -> Result<usize> {
        raw.params
            .get(name)
            .and_then(Value::as_u64)
            .and_then(|v| usize::try_from(v).ok())
            .ok_or_else(|| Error::Format(format!("missing or invalid family param '{name}'")))
    };

    // Rebuild the declared family and require the stated topology to match;
    // size equations are checked first so no oversized rebuild is attempted.
    let expected = match raw.family.as_str() {
        "hub_path" => {
            let m = param("m")?;
            check_family_size(
                m.checked_mul(m).and_then(|mm| mm.checked_add(1)),
                raw.num_vertices,
            )?;
            Some(Graph::hub_path(m).map_err(|e| Error::Format(e.to_string()))?)
        }
        "depth2_tree" => {
            let m = param("m")?;
            check_family_size(
                m.checked_mul(m)
                    .and_then(|mm| mm.checked_add(m))
                    .and_then(|s| s.checked_add(1)),
                raw.num_vertices,
            )?;
            Some(Graph::depth2_tree(m).map_err(|e| Error::Format(e.to_string()))?)
        }
        "star" => {
            let n = param("n")?;
            check_family_size(n.checked_add(1), raw.num_vertices)?;
            Some(Graph::star(n).map_err(|e| Error::Format(e.to_string()))?)
        }
        "complete" => {
            let n = param("n")?;
            check_family_size(Some(n), raw.num_vertices)?;
            Some(Graph::complete(n).map_err(|e| Error::Format(e.to_string()))?)
        }
        "random_tree" => {
            let n = param("n")?;
            let seed = raw
                .seed
                .ok_or_else(|| Error::Format("random_tree needs a seed".into()))?;
            check_family_size(Some(n), raw.num_vertices)?;
            Some(Graph::random_tree(n, seed).map_err(|e| Error::Format(e.to_string()))?)
        }
        "custom" => None,
        other => return Err(Error::Format(format!("unknown family '{other}'"))),
    };

    let mut graph = match expected {
        Some(built) => {
            let declared = Graph::new(raw.num_vertices, raw.edges)
                .map_err(|e| Error::Format(e.to_string()))?;
            if declared.edges() != built.edges() {
                return Err(Error::Format(format!(
                    "edge list does not match the declared {} family",
                    raw.family
                )));
            }
            built
        }
        None => {
            Graph::new(raw.num_vertices, raw.edges).map_err(|e| Error::Format(e.to_string()))?
        }
    };
    if let Some(labels) = raw.labels {
        graph
            .set_labels(labels)
            .map_err(|e| Error::Format(e.to_string()))?;
    }
    Ok(graph)
}

fn check_family_size(computed: Option<usize>, declared: usize) -> Result<()> {
    match computed {
        Some(n) if n == declared => Ok(()),
        _ => Err(Error::Format(
            "family parameters do not match the declared vertex count".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Potential assignments
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct PotentialAssignmentJson {
    graph: Value,
    symbols: Vec<u8>,
}

pub fn potential_assignment_to_json_string(g: &Graph, symbols: &[PotentialSymbol]) -> String {
    serde_json::to_string_pretty(&PotentialAssignmentJson {
        graph: graph_to_json(g),
        symbols: symbols.iter().map(|p| p.code()).collect(),
    })
    .expect("valid json")
}

pub fn parse_potential_assignment(bytes: &[u8]) -> Result<(Graph, Vec<PotentialSymbol>)> {
    let raw: PotentialAssignmentJson = serde_json::from_slice(bytes).map_err(syntax)?;
    let graph = parse_graph(&serde_json::to_vec(&raw.graph).map_err(syntax)?)?;
    if raw.symbols.len() != graph.num_edges() {
        return Err(Error::Format(format!(
            "{} symbols for {} edges",
            raw.symbols.len(),
            graph.num_edges()
        )));
    }
    let symbols = raw
        .symbols
        .into_iter()
        .map(PotentialSymbol::new)
        .collect::<Result<Vec<_>>>()?;
    Ok((graph, symbols))
}

// ---------------------------------------------------------------------------
// Ising models and datasets
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct IsingModelJson {
    graph: Value,
    j: Vec<f64>,
    h: Vec<f64>,
}

pub fn ising_model_to_json_string(model: &IsingModel) -> String {
    serde_json::to_string_pretty(&IsingModelJson {
        graph: graph_to_json(model.graph()),
        j: model.couplings().to_vec(),
        h: model.fields().to_vec(),
    })
    .expect("valid json")
}

pub fn parse_ising_model(bytes: &[u8]) -> Result<IsingModel> {
    let raw: IsingModelJson = serde_json::from_slice(bytes).map_err(syntax)?;
    let graph = parse_graph(&serde_json::to_vec(&raw.graph).map_err(syntax)?)?;
    IsingModel::new(graph, raw.j, raw.h)
}

pub fn parse_ising_dataset(bytes: &[u8]) -> Result<IsingDataset> {
    let ds: IsingDataset = serde_json::from_slice(bytes).map_err(syntax)?;
    if ds.samples.len() > MAX_JSON_SAMPLES {
        return Err(Error::Format("too many samples".into()));
    }
    // The stored edge list must be a valid graph of the stated size.
    let graph =
        Graph::new(ds.num_vertices, ds.edges.clone()).map_err(|e| Error::Format(e.to_string()))?;
    for sample in &ds.samples {
        if sample.h.len() != graph.num_vertices() || sample.marginals.len() != graph.num_vertices()
        {
            return Err(Error::Format("sample shape mismatch".into()));
        }
        if sample
            .h
            .iter()
            .chain(&sample.marginals)
            .any(|v| !v.is_finite())
        {
            return Err(Error::Format("non-finite sample values".into()));
        }
        if sample.marginals.iter().any(|m| m.abs() > 1.0) {
            return Err(Error::Format("marginal outside [-1, 1]".into()));
        }
    }
    Ok(ds)
}

// ---------------------------------------------------------------------------
// Star datasets, GCN stacks, feature maps
// ---------------------------------------------------------------------------

pub fn parse_star_dataset(bytes: &[u8]) -> Result<StarDataset> {
    let ds: StarDataset = serde_json::from_slice(bytes).map_err(syntax)?;
    if ds.samples.len() > MAX_JSON_SAMPLES || ds.n_leaves > MAX_JSON_VERTICES {
        return Err(Error::Format("dataset too large".into()));
    }
    let width = ds.planted.width;
    if ds.planted.weights.len() != ds.planted.depth {
        return Err(Error::Format("planted depth/weights mismatch".into()));
    }
    for w in &ds.planted.weights {
        if w.len() != width * width || w.iter().any(|x| !x.is_finite()) {
            return Err(Error::Format("malformed planted weights".into()));
        }
    }
    for sample in &ds.samples {
        if sample.x.len() != ds.n_leaves || sample.y.len() != ds.n_leaves {
            return Err(Error::Format("sample leaf count mismatch".into()));
        }
        for v in sample.x.iter().chain(&sample.y) {
            if v.len() != width || v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Format("malformed sample vector".into()));
            }
        }
    }
    Ok(ds)
}

pub fn parse_gcn_stack(bytes: &[u8]) -> Result<GcnStack> {
    let raw: GcnStack = serde_json::from_slice(bytes).map_err(syntax)?;
    if raw.width > 4096 {
        return Err(Error::Format("stack width too large".into()));
    }
    GcnStack::new(raw.width, raw.sigma, raw.weights)
}

#[derive(Debug, Serialize, Deserialize)]
struct FeatureMapJson {
    width: usize,
    features: FeatureMap,
}

pub fn feature_map_to_json_string(width: usize, features: &FeatureMap) -> String {
    serde_json::to_string_pretty(&FeatureMapJson {
        width,
        features: features.clone(),
    })
    .expect("valid json")
}

pub fn parse_feature_map(bytes: &[u8]) -> Result<(usize, FeatureMap)> {
    let raw: FeatureMapJson = serde_json::from_slice(bytes).map_err(syntax)?;
    if raw.features.len() > MAX_JSON_VERTICES {
        return Err(Error::Format("too many feature vectors".into()));
    }
    for f in &raw.features {
        if f.len() != raw.width || f.iter().any(|x| !x.is_finite()) {
            return Err(Error::Format("malformed feature vector".into()));
        }
    }
    Ok((raw.width, raw.features))
}

// ---------------------------------------------------------------------------
// Task inputs
// ---------------------------------------------------------------------------

/// Input file for `task eval`: the task's size parameter plus one symbol per
/// edge of the task's graph family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaskInput {
    pub size: usize,
    pub symbols: Vec<u32>,
}

pub fn parse_task_input(bytes: &[u8]) -> Result<TaskInput> {
    let raw: TaskInput = serde_json::from_slice(bytes).map_err(syntax)?;
    if raw.size > MAX_JSON_VERTICES || raw.symbols.len() > MAX_JSON_EDGES {
        return Err(Error::Format("task input too large".into()));
    }
    Ok(raw)
}

impl TaskInput {
    pub fn symbols(&self) -> Vec<Symbol> {
        self.symbols.iter().map(|&s| Symbol(s)).collect()
    }
}
