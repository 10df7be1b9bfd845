//! `msgpass` command-line interface.
//!
//! Every artifact-producing command writes its JSON output plus a
//! `<output>.manifest.json` run manifest (command, parameters, seeds, file
//! digests); rerunning the recorded command reproduces the output byte for
//! byte. Exit codes: 0 on success, 1 on runtime or verification failure,
//! 2 on usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use msgpass::certify::{counting_certificate, map_certificate};
use msgpass::gcn::{edge_gcn_forward, generate_star_dataset, node_gcn_forward};
use msgpass::graph::{Graph, VertexSet};
use msgpass::ising::{
    bp_marginals, bp_run, directed_node_dp, exact_marginals_bruteforce, generate_ising_dataset,
    marginals_from_messages, IsingModel, Topology,
};
use msgpass::json;
use msgpass::manifest::RunManifest;
use msgpass::map::{
    brute_force_map, build_map_edge_protocol, dp_map_hub_path, energy, PotentialSymbol,
};
use msgpass::protocol::{
    check_equivariance, random_inputs, run_edge_protocol, run_node_protocol,
    run_symmetric_edge_protocol, run_symmetric_node_protocol, sample_automorphisms,
    simulate_edge_with_node, symmetric_edge_to_node, StateMode, Symbol,
};
use msgpass::tasks::{
    build_counting_edge_protocol, build_disjointness_edge_protocol, build_duplicate_edge_protocol,
    build_histogram_node_protocol, counting_task_g, disjointness_task_g, large_alphabet_task_g,
};
use msgpass::verify;

#[derive(Parser)]
#[command(
    name = "msgpass",
    version,
    about = "Memory-constrained message-passing protocols on graphs"
)]
struct Cli {
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Construct and inspect graphs.
    Graph {
        #[command(subcommand)]
        command: GraphCommand,
    },
    /// Run, simulate and probe the named protocols.
    Protocol {
        #[command(subcommand)]
        command: ProtocolCommand,
    },
    /// Solve hub-path MAP instances.
    Map {
        #[command(subcommand)]
        command: MapCommand,
    },
    /// Compute an information-flow lower-bound certificate.
    Certify(CertifyArgs),
    /// Evaluate the separation tasks on explicit inputs.
    Task {
        #[command(subcommand)]
        command: TaskCommand,
    },
    /// Ising marginals and dataset generation.
    Ising {
        #[command(subcommand)]
        command: IsingCommand,
    },
    /// Planted star-graph regression datasets.
    StarDataset {
        #[command(subcommand)]
        command: StarDatasetCommand,
    },
    /// GCN forward passes.
    Gcn {
        #[command(subcommand)]
        command: GcnCommand,
    },
    /// Run the acceptance suites.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Generate a graph from one of the built-in families.
    Gen(GraphGenArgs),
    /// Line graph of a graph file.
    Line {
        #[arg(long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Closed neighborhoods of a vertex or an edge.
    Neighborhood {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, conflicts_with = "edge")]
        vertex: Option<usize>,
        #[arg(long)]
        edge: Option<usize>,
    },
    /// Restricted ball N_H^r(S) in H = G[V minus K] and its edge closure F.
    Ball {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated vertex ids of K.
        #[arg(long, value_delimiter = ',', default_value = "")]
        k: Vec<usize>,
        /// Comma-separated vertex ids of S.
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<usize>,
        #[arg(long)]
        radius: usize,
    },
}

#[derive(Args)]
struct GraphGenArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Size parameter for hub_path and depth2_tree.
    #[arg(long)]
    m: Option<usize>,
    /// Size parameter for star, complete and random_tree.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    #[value(name = "hub_path")]
    HubPath,
    #[value(name = "depth2_tree")]
    Depth2Tree,
    Star,
    Complete,
    #[value(name = "random_tree")]
    RandomTree,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProtocolName {
    Map,
    Counting,
    Duplicate,
    Histogram,
    Disjointness,
}

#[derive(Subcommand)]
enum ProtocolCommand {
    /// Run a named protocol on an input file and dump the trace.
    Run(ProtocolRunArgs),
    /// Run a protocol and its node simulation, comparing outputs.
    Simulate(ProtocolRunArgs),
    /// Probe a protocol for equivariance under sampled automorphisms.
    CheckEquivariance {
        #[arg(long, value_enum)]
        name: ProtocolName,
        /// Family size (m for map/counting, n for the star/complete tasks).
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct ProtocolRunArgs {
    #[arg(long, value_enum)]
    name: ProtocolName,
    /// Family size (m for map/counting, n for the star/complete tasks).
    #[arg(long)]
    size: usize,
    /// Task input JSON ({"size": .., "symbols": [..]}); random when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Seed for the random input when no file is given.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MapCommand {
    /// Solve a MAP instance with the chosen evaluator.
    Solve {
        #[arg(long, value_enum)]
        method: MapMethod,
        #[arg(long)]
        m: usize,
        /// Potential assignment JSON; random when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapMethod {
    Dp,
    Brute,
    EdgeProtocol,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long, value_enum)]
    task: CertifyTask,
    #[arg(long)]
    m: usize,
    /// Round count T being certified against.
    #[arg(long, alias = "T", default_value_t = 1)]
    rounds: usize,
    /// Search over I_F instead of using the proof's fixed choice.
    #[arg(long)]
    search_if: bool,
    /// Evaluation budget.
    #[arg(long, default_value_t = 1 << 22)]
    budget: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CertifyTask {
    Map,
    Counting,
}

#[derive(Subcommand)]
enum TaskCommand {
    /// Evaluate a task on an explicit input file.
    Eval {
        #[arg(long, value_enum)]
        task: TaskName,
        #[arg(long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaskName {
    Counting,
    LargeAlphabet,
    Disjointness,
}

#[derive(Subcommand)]
enum IsingCommand {
    /// Marginals of a model file by the chosen method.
    Marginals {
        #[arg(long, value_enum)]
        method: MarginalMethod,
        #[arg(long)]
        input: PathBuf,
        /// Root vertex for the directed node DP.
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Iteration override for plain BP (default: 2 * diameter).
        #[arg(long)]
        iters: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a marginal-regression dataset.
    Dataset {
        #[arg(long, value_enum)]
        topology: TopologyName,
        /// Depth for binary_tree (default 4, size 31).
        #[arg(long)]
        depth: Option<usize>,
        /// Size for path / random_tree (default 30).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MarginalMethod {
    Bp,
    Brute,
    NodeDp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TopologyName {
    #[value(name = "binary_tree")]
    BinaryTree,
    Path,
    #[value(name = "random_tree")]
    RandomTree,
}

#[derive(Subcommand)]
enum StarDatasetCommand {
    /// Generate a planted star-graph dataset.
    Gen {
        #[arg(long)]
        leaves: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 10)]
        width: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GcnCommand {
    /// Forward pass over nodes or edges.
    Forward {
        #[arg(long, value_enum)]
        mode: GcnMode,
        #[arg(long)]
        graph: PathBuf,
        /// Feature map JSON ({"width": d, "features": [[..], ..]}).
        #[arg(long)]
        features: PathBuf,
        /// Stack JSON ({"width": d, "sigma": "tanh", "weights": [[..], ..]}).
        #[arg(long)]
        stack: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GcnMode {
    Node,
    Edge,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run a single suite instead of all of them.
    #[arg(long)]
    suite: Option<String>,
    /// Narrow size-swept suites to one size.
    #[arg(long)]
    m: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match dispatch(cli.command, cli.format) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

type AnyError = Box<dyn std::error::Error>;
type RunFn = Box<dyn Fn(&[Symbol]) -> Vec<bool>>;

fn dispatch(command: Command, format: Format) -> Result<ExitCode, AnyError> {
    match command {
        Command::Graph { command } => graph_command(command)?,
        Command::Protocol { command } => protocol_command(command)?,
        Command::Map { command } => map_command(command)?,
        Command::Certify(args) => certify_command(args)?,
        Command::Task { command } => task_command(command)?,
        Command::Ising { command } => ising_command(command)?,
        Command::StarDataset { command } => star_dataset_command(command)?,
        Command::Gcn { command } => gcn_command(command)?,
        Command::Verify(args) => return verify_command(args, format),
    }
    Ok(ExitCode::SUCCESS)
}

/// Writes the artifact and its manifest, or prints to stdout when no output
/// path was given.
fn emit(output: Option<&Path>, content: &str, mut manifest: RunManifest) -> Result<(), AnyError> {
    match output {
        Some(path) => {
            let content = format!("{content}\n");
            std::fs::write(path, &content)?;
            manifest.record_output(path.display().to_string(), content.as_bytes());
            let manifest_path = manifest_path(path);
            std::fs::write(&manifest_path, format!("{}\n", manifest.to_json_string()))?;
            eprintln!("wrote {} (+ {})", path.display(), manifest_path.display());
        }
        None => println!("{content}"),
    }
    Ok(())
}

fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

fn read_input(manifest: &mut RunManifest, path: &Path) -> Result<Vec<u8>, AnyError> {
    let bytes = std::fs::read(path)?;
    manifest.record_input(path.display().to_string(), &bytes);
    Ok(bytes)
}

fn graph_command(command: GraphCommand) -> Result<(), AnyError> {
    match command {
        GraphCommand::Gen(args) => {
            let (graph, params, seed) = match args.family {
                Family::HubPath => {
                    let m = args.m.ok_or("--m is required for hub_path")?;
                    (
                        Graph::hub_path(m)?,
                        serde_json::json!({"family": "hub_path", "m": m}),
                        None,
                    )
                }
                Family::Depth2Tree => {
                    let m = args.m.ok_or("--m is required for depth2_tree")?;
                    (
                        Graph::depth2_tree(m)?,
                        serde_json::json!({"family": "depth2_tree", "m": m}),
                        None,
                    )
                }
                Family::Star => {
                    let n = args.n.ok_or("--n is required for star")?;
                    (
                        Graph::star(n)?,
                        serde_json::json!({"family": "star", "n": n}),
                        None,
                    )
                }
                Family::Complete => {
                    let n = args.n.ok_or("--n is required for complete")?;
                    (
                        Graph::complete(n)?,
                        serde_json::json!({"family": "complete", "n": n}),
                        None,
                    )
                }
                Family::RandomTree => {
                    let n = args.n.ok_or("--n is required for random_tree")?;
                    let seed = args.seed.unwrap_or(0);
                    (
                        Graph::random_tree(n, seed)?,
                        serde_json::json!({"family": "random_tree", "n": n}),
                        Some(seed),
                    )
                }
            };
            let manifest = RunManifest::new("graph gen", params, seed);
            emit(
                args.output.as_deref(),
                &json::graph_to_json_string(&graph),
                manifest,
            )
        }
        GraphCommand::Line { input, output } => {
            let mut manifest = RunManifest::new(
                "graph line",
                serde_json::json!({"input": input.display().to_string()}),
                None,
            );
            let bytes = read_input(&mut manifest, &input)?;
            let graph = json::parse_graph(&bytes)?;
            emit(
                output.as_deref(),
                &json::graph_to_json_string(&graph.line_graph()),
                manifest,
            )
        }
        GraphCommand::Neighborhood {
            input,
            vertex,
            edge,
        } => {
            let graph = json::parse_graph(&std::fs::read(input)?)?;
            let report = match (vertex, edge) {
                (Some(v), None) => {
                    if v >= graph.num_vertices() {
                        return Err("vertex out of range".into());
                    }
                    serde_json::json!({
                        "vertex": v,
                        "vertex_neighborhood": graph.neighbors(v),
                        "incident_edges": graph.incident_edges(v),
                    })
                }
                (None, Some(e)) => {
                    if e >= graph.num_edges() {
                        return Err("edge out of range".into());
                    }
                    serde_json::json!({
                        "edge": e,
                        "endpoints": graph.endpoints(e),
                        "edge_neighborhood": graph.edge_neighbors(e),
                    })
                }
                _ => return Err("pass exactly one of --vertex or --edge".into()),
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
        GraphCommand::Ball {
            input,
            k,
            s,
            radius,
        } => {
            let graph = json::parse_graph(&std::fs::read(input)?)?;
            let k = VertexSet::new(k);
            let s = VertexSet::new(s);
            let ball = graph.restricted_ball(&k, &s, radius)?;
            let f = graph.restricted_ball_edges(&k, &s, radius)?;
            let report = serde_json::json!({
                "radius": radius,
                "ball": ball.as_slice(),
                "edge_closure": f.as_slice(),
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
    }
}

/// Family graph, input alphabet and a symbol-range check for a named protocol.
fn protocol_family(name: ProtocolName, size: usize) -> Result<(Graph, u32, u32), AnyError> {
    Ok(match name {
        ProtocolName::Map => (Graph::hub_path(size)?, 4, 0),
        ProtocolName::Counting => (Graph::depth2_tree(size)?, 2, 0),
        // Duplicate symbols live in [n] = {1..n}: alphabet size n, offset 1.
        ProtocolName::Duplicate => (Graph::star(size)?, size as u32, 1),
        ProtocolName::Histogram => (Graph::star(size)?, 2, 0),
        ProtocolName::Disjointness => (Graph::complete(size)?, 2, 0),
    })
}

fn load_or_sample_input(
    manifest: &mut RunManifest,
    args: &ProtocolRunArgs,
    graph: &Graph,
    alphabet: u32,
    offset: u32,
) -> Result<Vec<Symbol>, AnyError> {
    let symbols = match &args.input {
        Some(path) => {
            let bytes = read_input(manifest, path)?;
            let task_input = json::parse_task_input(&bytes)?;
            if task_input.size != args.size {
                return Err(format!(
                    "input file is for size {}, command asked for {}",
                    task_input.size, args.size
                )
                .into());
            }
            task_input.symbols()
        }
        None => random_inputs(alphabet, graph.num_edges(), 1, args.seed)
            .remove(0)
            .into_iter()
            .map(|s| Symbol(s.0 + offset))
            .collect(),
    };
    if symbols.len() != graph.num_edges() {
        return Err(format!("{} symbols for {} edges", symbols.len(), graph.num_edges()).into());
    }
    Ok(symbols)
}

fn protocol_command(command: ProtocolCommand) -> Result<(), AnyError> {
    match command {
        ProtocolCommand::Run(args) => {
            let (graph, alphabet, offset) = protocol_family(args.name, args.size)?;
            let mut manifest = RunManifest::new(
                "protocol run",
                serde_json::json!({"name": name_str(args.name), "size": args.size}),
                args.input.is_none().then_some(args.seed),
            );
            let input = load_or_sample_input(&mut manifest, &args, &graph, alphabet, offset)?;
            let trace = match args.name {
                ProtocolName::Map => {
                    run_edge_protocol(&build_map_edge_protocol(args.size)?, &graph, &input)?
                        .to_json()
                }
                ProtocolName::Disjointness => run_edge_protocol(
                    &build_disjointness_edge_protocol(args.size)?,
                    &graph,
                    &input,
                )?
                .to_json(),
                ProtocolName::Histogram => {
                    run_node_protocol(&build_histogram_node_protocol(args.size)?, &graph, &input)?
                        .to_json()
                }
                ProtocolName::Counting => run_symmetric_edge_protocol(
                    &build_counting_edge_protocol(args.size)?,
                    &graph,
                    &input,
                )?
                .to_json(),
                ProtocolName::Duplicate => run_symmetric_edge_protocol(
                    &build_duplicate_edge_protocol(args.size)?,
                    &graph,
                    &input,
                )?
                .to_json(),
            };
            let body = serde_json::json!({
                "protocol": name_str(args.name),
                "size": args.size,
                "input": input.iter().map(|s| s.0).collect::<Vec<_>>(),
                "trace": trace,
            });
            emit(
                args.output.as_deref(),
                &serde_json::to_string_pretty(&body)?,
                manifest,
            )
        }
        ProtocolCommand::Simulate(args) => {
            let (graph, alphabet, offset) = protocol_family(args.name, args.size)?;
            let mut manifest = RunManifest::new(
                "protocol simulate",
                serde_json::json!({"name": name_str(args.name), "size": args.size}),
                args.input.is_none().then_some(args.seed),
            );
            let input = load_or_sample_input(&mut manifest, &args, &graph, alphabet, offset)?;
            let (original, simulated, rounds, memory): (Vec<bool>, Vec<bool>, usize, String) =
                match args.name {
                    ProtocolName::Map | ProtocolName::Disjointness => {
                        let p = match args.name {
                            ProtocolName::Map => build_map_edge_protocol(args.size)?,
                            _ => build_disjointness_edge_protocol(args.size)?,
                        };
                        let sim = simulate_edge_with_node(&p, &graph);
                        let direct = run_edge_protocol(&p, &graph, &input)?;
                        let node = run_node_protocol(&sim, &graph, &input)?;
                        (
                            direct.outputs,
                            node.outputs,
                            sim.rounds,
                            format!("{} bits", sim.memory),
                        )
                    }
                    ProtocolName::Counting | ProtocolName::Duplicate => {
                        let p = match args.name {
                            ProtocolName::Counting => build_counting_edge_protocol(args.size)?,
                            _ => build_duplicate_edge_protocol(args.size)?,
                        };
                        let sim = symmetric_edge_to_node(&p, StateMode::Unbounded)?;
                        let direct = run_symmetric_edge_protocol(&p, &graph, &input)?;
                        let node = run_symmetric_node_protocol(&sim, &graph, &input)?;
                        (direct.outputs, node.outputs, sim.rounds, "unbounded".into())
                    }
                    ProtocolName::Histogram => {
                        return Err("histogram is already a node protocol".into())
                    }
                };
            let body = serde_json::json!({
                "protocol": name_str(args.name),
                "size": args.size,
                "simulated_rounds": rounds,
                "simulated_memory": memory,
                "outputs": original.iter().map(|&b| b as u8).collect::<Vec<_>>(),
                "simulated_outputs": simulated.iter().map(|&b| b as u8).collect::<Vec<_>>(),
                "equal": original == simulated,
            });
            emit(
                args.output.as_deref(),
                &serde_json::to_string_pretty(&body)?,
                manifest,
            )
        }
        ProtocolCommand::CheckEquivariance {
            name,
            size,
            trials,
            seed,
        } => {
            let (graph, alphabet, offset) = protocol_family(name, size)?;
            let perms = sample_automorphisms(&graph, trials, seed);
            let inputs: Vec<Vec<Symbol>> = random_inputs(alphabet, graph.num_edges(), trials, seed)
                .into_iter()
                .map(|input| input.into_iter().map(|s| Symbol(s.0 + offset)).collect())
                .collect();
            let run: RunFn = match name {
                ProtocolName::Map => {
                    let p = build_map_edge_protocol(size)?;
                    let g = graph.clone();
                    Box::new(move |input| run_edge_protocol(&p, &g, input).unwrap().outputs)
                }
                ProtocolName::Disjointness => {
                    let p = build_disjointness_edge_protocol(size)?;
                    let g = graph.clone();
                    Box::new(move |input| run_edge_protocol(&p, &g, input).unwrap().outputs)
                }
                ProtocolName::Histogram => {
                    let p = build_histogram_node_protocol(size)?;
                    let g = graph.clone();
                    Box::new(move |input| run_node_protocol(&p, &g, input).unwrap().outputs)
                }
                ProtocolName::Counting => {
                    let p = build_counting_edge_protocol(size)?;
                    let g = graph.clone();
                    Box::new(move |input| {
                        run_symmetric_edge_protocol(&p, &g, input).unwrap().outputs
                    })
                }
                ProtocolName::Duplicate => {
                    let p = build_duplicate_edge_protocol(size)?;
                    let g = graph.clone();
                    Box::new(move |input| {
                        run_symmetric_edge_protocol(&p, &g, input).unwrap().outputs
                    })
                }
            };
            let report = check_equivariance(&graph, run, &perms, &inputs)?;
            match &report.counterexample {
                None => println!("equivariant over {} trials", report.trials),
                Some(cx) => println!(
                    "NOT equivariant (trial {}): vertex {} under permutation {:?} on input {:?}",
                    report.trials,
                    cx.vertex,
                    cx.permutation,
                    cx.input.iter().map(|s| s.0).collect::<Vec<_>>()
                ),
            }
            Ok(())
        }
    }
}

fn name_str(name: ProtocolName) -> &'static str {
    match name {
        ProtocolName::Map => "map",
        ProtocolName::Counting => "counting",
        ProtocolName::Duplicate => "duplicate",
        ProtocolName::Histogram => "histogram",
        ProtocolName::Disjointness => "disjointness",
    }
}

fn map_command(command: MapCommand) -> Result<(), AnyError> {
    let MapCommand::Solve {
        method,
        m,
        input,
        seed,
        output,
    } = command;
    let graph = Graph::hub_path(m)?;
    let mut manifest = RunManifest::new(
        "map solve",
        serde_json::json!({"method": match method {
            MapMethod::Dp => "dp",
            MapMethod::Brute => "brute",
            MapMethod::EdgeProtocol => "edge-protocol",
        }, "m": m}),
        input.is_none().then_some(seed),
    );
    let potentials: Vec<PotentialSymbol> = match &input {
        Some(path) => {
            let bytes = read_input(&mut manifest, path)?;
            let (file_graph, symbols) = json::parse_potential_assignment(&bytes)?;
            if file_graph.edges() != graph.edges() {
                return Err("input graph is not the requested hub_path".into());
            }
            symbols
        }
        None => random_inputs(4, graph.num_edges(), 1, seed)
            .remove(0)
            .iter()
            .map(|&s| PotentialSymbol::new(s.0 as u8).expect("in range"))
            .collect(),
    };
    let assignment = match method {
        MapMethod::Dp => dp_map_hub_path(m, &potentials)?,
        MapMethod::Brute => brute_force_map(&graph, &potentials)?,
        MapMethod::EdgeProtocol => {
            let p = build_map_edge_protocol(m)?;
            let symbols: Vec<Symbol> = potentials.iter().map(|p| p.to_symbol()).collect();
            run_edge_protocol(&p, &graph, &symbols)?.outputs
        }
    };
    let body = serde_json::json!({
        "m": m,
        "symbols": potentials.iter().map(|p| p.code()).collect::<Vec<_>>(),
        "assignment": assignment.iter().map(|&b| b as u8).collect::<Vec<_>>(),
        "energy": energy(&graph, &potentials, &assignment)?,
    });
    emit(
        output.as_deref(),
        &serde_json::to_string_pretty(&body)?,
        manifest,
    )
}

fn certify_command(args: CertifyArgs) -> Result<(), AnyError> {
    if args.rounds != 1 {
        return Err("only the proofs' T = 1 instances ship with fixed K, S and I_F".into());
    }
    let report = match args.task {
        CertifyTask::Map => map_certificate(args.m, args.budget, args.search_if)?,
        CertifyTask::Counting => counting_certificate(args.m, args.budget, args.search_if)?,
    };
    let manifest = RunManifest::new(
        "certify",
        serde_json::json!({
            "task": match args.task { CertifyTask::Map => "map", CertifyTask::Counting => "counting" },
            "m": args.m,
            "rounds": args.rounds,
            "search_if": args.search_if,
            "budget": args.budget,
        }),
        None,
    );
    emit(
        args.output.as_deref(),
        &serde_json::to_string_pretty(&report)?,
        manifest,
    )
}

fn task_command(command: TaskCommand) -> Result<(), AnyError> {
    let TaskCommand::Eval {
        task,
        input,
        output,
    } = command;
    let mut manifest = RunManifest::new(
        "task eval",
        serde_json::json!({"task": match task {
            TaskName::Counting => "counting",
            TaskName::LargeAlphabet => "large-alphabet",
            TaskName::Disjointness => "disjointness",
        }}),
        None,
    );
    let bytes = read_input(&mut manifest, &input)?;
    let task_input = json::parse_task_input(&bytes)?;
    let symbols = task_input.symbols();
    let outputs = match task {
        TaskName::Counting => counting_task_g(task_input.size, &symbols)?,
        TaskName::LargeAlphabet => large_alphabet_task_g(task_input.size, &symbols)?,
        TaskName::Disjointness => disjointness_task_g(task_input.size, &symbols)?,
    };
    let body = serde_json::json!({
        "size": task_input.size,
        "outputs": outputs.iter().map(|&b| b as u8).collect::<Vec<_>>(),
    });
    emit(
        output.as_deref(),
        &serde_json::to_string_pretty(&body)?,
        manifest,
    )
}

fn ising_command(command: IsingCommand) -> Result<(), AnyError> {
    match command {
        IsingCommand::Marginals {
            method,
            input,
            root,
            iters,
            output,
        } => {
            let mut manifest = RunManifest::new(
                "ising marginals",
                serde_json::json!({"method": match method {
                    MarginalMethod::Bp => "bp",
                    MarginalMethod::Brute => "brute",
                    MarginalMethod::NodeDp => "node-dp",
                }, "root": root}),
                None,
            );
            let bytes = read_input(&mut manifest, &input)?;
            let model: IsingModel = json::parse_ising_model(&bytes)?;
            let marginals = match method {
                MarginalMethod::Brute => exact_marginals_bruteforce(&model)?,
                MarginalMethod::NodeDp => directed_node_dp(&model, root)?,
                MarginalMethod::Bp => match iters {
                    Some(k) => marginals_from_messages(&model, &bp_run(&model, k)?),
                    None => bp_marginals(&model)?,
                },
            };
            let body = serde_json::json!({"marginals": marginals});
            emit(
                output.as_deref(),
                &serde_json::to_string_pretty(&body)?,
                manifest,
            )
        }
        IsingCommand::Dataset {
            topology,
            depth,
            n,
            samples,
            seed,
            output,
        } => {
            let topology = match topology {
                TopologyName::BinaryTree => Topology::BinaryTree {
                    depth: depth.unwrap_or(4),
                },
                TopologyName::Path => Topology::Path { n: n.unwrap_or(30) },
                TopologyName::RandomTree => Topology::RandomTree { n: n.unwrap_or(30) },
            };
            let manifest = RunManifest::new(
                "ising dataset",
                serde_json::json!({"topology": topology, "samples": samples}),
                Some(seed),
            );
            let dataset = generate_ising_dataset(topology, samples, seed)?;
            emit(
                output.as_deref(),
                &serde_json::to_string_pretty(&dataset)?,
                manifest,
            )
        }
    }
}

fn star_dataset_command(command: StarDatasetCommand) -> Result<(), AnyError> {
    let StarDatasetCommand::Gen {
        leaves,
        depth,
        width,
        samples,
        seed,
        output,
    } = command;
    let manifest = RunManifest::new(
        "star-dataset gen",
        serde_json::json!({"leaves": leaves, "depth": depth, "width": width, "samples": samples}),
        Some(seed),
    );
    let dataset = generate_star_dataset(leaves, depth, width, samples, seed)?;
    emit(
        output.as_deref(),
        &serde_json::to_string_pretty(&dataset)?,
        manifest,
    )
}

fn gcn_command(command: GcnCommand) -> Result<(), AnyError> {
    let GcnCommand::Forward {
        mode,
        graph,
        features,
        stack,
        output,
    } = command;
    let mut manifest = RunManifest::new(
        "gcn forward",
        serde_json::json!({"mode": match mode { GcnMode::Node => "node", GcnMode::Edge => "edge" }}),
        None,
    );
    let g = json::parse_graph(&read_input(&mut manifest, &graph)?)?;
    let (width, h0) = json::parse_feature_map(&read_input(&mut manifest, &features)?)?;
    let gcn_stack = json::parse_gcn_stack(&read_input(&mut manifest, &stack)?)?;
    if gcn_stack.width != width {
        return Err("feature width does not match stack width".into());
    }
    let out = match mode {
        GcnMode::Node => node_gcn_forward(&g, &gcn_stack, &h0)?,
        GcnMode::Edge => edge_gcn_forward(&g, &gcn_stack, &h0)?,
    };
    emit(
        output.as_deref(),
        &json::feature_map_to_json_string(width, &out),
        manifest,
    )
}

fn verify_command(args: VerifyArgs, format: Format) -> Result<ExitCode, AnyError> {
    let results = match &args.suite {
        Some(name) => vec![verify::run_suite(name, args.m)?],
        None => verify::run_all(),
    };
    match format {
        Format::Json => {
            let body: Vec<serde_json::Value> = results
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "suite": r.id,
                        "passed": r.passed,
                        "details": r.details,
                        "elapsed_ms": r.elapsed_ms,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&body)?);
        }
        Format::Text => {
            for r in &results {
                println!("{}", r.line());
            }
            let passed = results.iter().filter(|r| r.passed).count();
            println!("{passed}/{} suites passed", results.len());
        }
    }
    Ok(if results.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
