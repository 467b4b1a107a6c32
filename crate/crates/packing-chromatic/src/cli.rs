//! The `pcn` command line.
//!
//! Every subcommand takes a graph either from a named family (`--family`)
//! or from a DIMACS file (`--input`), runs one of the library pipelines,
//! and prints a deterministic result on stdout. Diagnostics go to stderr.
//!
//! Exit codes: 0 on success, 1 on bad input or an internal error, 2 when a
//! solve stopped at bounds because its budget ran out, 3 when `verify`
//! rejects a coloring.

use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::families;
use crate::graph::{all_pairs_distances, DistanceMatrix, Graph};
use crate::hamming::{self, HammingParams, DEFAULT_VERTEX_BUDGET};
use crate::io::{dimacs, lp, sets, table};
use crate::mss::{clique_cover_for_layer, CliqueCover, SolveBudget};
use crate::pcn::{self, PcnOptions, PcnResult, PcnStatus};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_BUDGET_EXHAUSTED: i32 = 2;
pub const EXIT_INVALID_COLORING: i32 = 3;

/// Node budget a `table` run uses per solve when none is given, so the
/// command always terminates.
const TABLE_DEFAULT_NODES: u64 = 50_000;

/// Node budget for the heuristic phase of `bounds` when none is given.
const BOUNDS_DEFAULT_HEURISTIC_NODES: u64 = 10_000;

#[derive(Parser, Debug)]
#[command(name = "pcn", version, about = "Packing chromatic numbers via stable-set solves")]
pub struct Cli {
    /// Solver worker threads; 1 keeps the search fully deterministic.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,

    /// Largest vertex count the tool will materialize.
    #[arg(long, global = true, env = "PCN_VERTEX_BUDGET", default_value_t = DEFAULT_VERTEX_BUDGET)]
    pub vertex_budget: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Hamming,
    Path,
    Cycle,
    Complete,
    Star,
    Petersen,
    Random,
}

/// Where the graph comes from. Exactly one of `--family` and `--input`.
#[derive(Args, Debug)]
pub struct GraphSource {
    /// Named family; sized with --q/--m (hamming) or --n (the rest).
    #[arg(long, value_enum, conflicts_with = "input")]
    pub family: Option<Family>,

    /// Alphabet size for --family hamming.
    #[arg(long)]
    pub q: Option<u32>,

    /// Word length for --family hamming.
    #[arg(long)]
    pub m: Option<u32>,

    /// Vertex count (leaf count for star).
    #[arg(long)]
    pub n: Option<usize>,

    /// Edge probability for --family random.
    #[arg(long)]
    pub edge_prob: Option<f64>,

    /// Seed for --family random.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Read the graph from a DIMACS file instead.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

/// A resolved graph plus the name used in output files. Hamming parameters
/// are kept so downstream commands can use the coordinate-based distance
/// routine and the family-specific warm starts.
pub struct NamedGraph {
    pub name: String,
    pub graph: Graph,
    pub hamming: Option<HammingParams>,
}

impl GraphSource {
    pub fn resolve(&self, vertex_budget: u64) -> Result<NamedGraph> {
        if let Some(path) = &self.input {
            let graph = dimacs::read_dimacs(path)?;
            check_vertex_budget(graph.n(), vertex_budget)?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "input".to_string());
            return Ok(NamedGraph { name, graph, hamming: None });
        }
        let Some(family) = self.family else {
            return Err(usage("a graph is required: pass --family or --input"));
        };
        if family != Family::Hamming && (self.q.is_some() || self.m.is_some()) {
            return Err(usage("--q and --m apply to --family hamming only"));
        }
        if family == Family::Random && self.edge_prob.is_none() {
            return Err(usage("--family random needs --edge-prob"));
        }
        if family != Family::Random && self.edge_prob.is_some() {
            return Err(usage("--edge-prob applies to --family random only"));
        }
        match family {
            Family::Hamming => {
                let (Some(q), Some(m)) = (self.q, self.m) else {
                    return Err(usage("--family hamming needs --q and --m"));
                };
                if self.n.is_some() {
                    return Err(usage("--n does not apply to --family hamming"));
                }
                let params = HammingParams::new(q, m)?;
                let graph = hamming::generate(&params, vertex_budget)?;
                Ok(NamedGraph {
                    name: format!("hamming_q{q}_m{m}"),
                    graph,
                    hamming: Some(params),
                })
            }
            Family::Petersen => {
                if self.n.is_some() {
                    return Err(usage("--n does not apply to --family petersen"));
                }
                check_vertex_budget(10, vertex_budget)?;
                Ok(NamedGraph {
                    name: "petersen".to_string(),
                    graph: families::petersen(),
                    hamming: None,
                })
            }
            Family::Path | Family::Cycle | Family::Complete | Family::Star | Family::Random => {
                let Some(n) = self.n else {
                    return Err(usage("this family needs --n"));
                };
                let (name, graph) = match family {
                    Family::Path => {
                        check_vertex_budget(n, vertex_budget)?;
                        (format!("path_{n}"), families::path(n)?)
                    }
                    Family::Cycle => {
                        check_vertex_budget(n, vertex_budget)?;
                        (format!("cycle_{n}"), families::cycle(n)?)
                    }
                    Family::Complete => {
                        check_vertex_budget(n, vertex_budget)?;
                        (format!("complete_{n}"), families::complete(n)?)
                    }
                    Family::Star => {
                        check_vertex_budget(n + 1, vertex_budget)?;
                        (format!("star_{n}"), families::star(n)?)
                    }
                    Family::Random => {
                        let p = self.edge_prob.unwrap();
                        if !(0.0..=1.0).contains(&p) {
                            return Err(usage("--edge-prob must lie in [0, 1]"));
                        }
                        check_vertex_budget(n, vertex_budget)?;
                        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                        let name = format!("random_n{n}_p{p}_s{}", self.seed);
                        (name, families::random_connected_graph(n, p, &mut rng))
                    }
                    _ => unreachable!(),
                };
                Ok(NamedGraph { name, graph, hamming: None })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    /// Grow the layer window until the stable set covers every vertex.
    Iterative,
    /// One solve on the star-augmented layered graph.
    Starred,
    /// Star-augmented solve truncated at a proven upper bound.
    StarredCapped,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a graph and write it in DIMACS format.
    Gen {
        #[command(flatten)]
        source: GraphSource,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute the packing chromatic number; exits 2 if the budget ran out
    /// with only bounds.
    Exact {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_enum, default_value_t = Strategy::Iterative)]
        strategy: Strategy,
        /// Stop each solve after this many search nodes.
        #[arg(long)]
        budget_nodes: Option<u64>,
        /// Stop each solve after this many seconds.
        #[arg(long)]
        budget_seconds: Option<u64>,
        /// Write the witness coloring here.
        #[arg(long)]
        witness_out: Option<PathBuf>,
        /// Skip family-specific warm starts and caps.
        #[arg(long)]
        no_hints: bool,
        /// Coloring file proving an upper bound; required by starred-capped.
        #[arg(long)]
        upper_bound_file: Option<PathBuf>,
    },
    /// Layer-by-layer stable-set construction for Hamming graphs. Always
    /// exits 0 when a set was built, even if the bounds stay open.
    Heuristic {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_seconds: Option<u64>,
        /// Write the constructed layered set here.
        #[arg(long)]
        set_out: Option<PathBuf>,
    },
    /// Heuristic pass plus a warm-started exact solve on a Hamming graph;
    /// exits 2 if the result is still only a bracket.
    Bounds {
        #[command(flatten)]
        source: GraphSource,
        /// Node budget for the heuristic phase (default 10000).
        #[arg(long)]
        heuristic_nodes: Option<u64>,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_seconds: Option<u64>,
        #[arg(long)]
        set_out: Option<PathBuf>,
    },
    /// Check a coloring file against the packing condition; exits 3 with
    /// the first violation when it fails.
    Verify {
        #[command(flatten)]
        source: GraphSource,
        /// Coloring file to check.
        #[arg(long)]
        coloring: PathBuf,
    },
    /// Write the layered stable-set program in LP format.
    ExportLp {
        #[command(flatten)]
        source: GraphSource,
        /// Layers to model, e.g. --layers 1,2,3.
        #[arg(long, value_delimiter = ',', required = true)]
        layers: Vec<usize>,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bounds table for Hamming graphs over a range of alphabet sizes.
    /// Rows whose graphs exceed the vertex budget are marked skipped.
    Table {
        /// Word length shared by every row.
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 3)]
        q_min: u32,
        #[arg(long, default_value_t = 10)]
        q_max: u32,
        /// Node budget per solve (default 50000).
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_seconds: Option<u64>,
        /// Also write the table as CSV.
        #[arg(long)]
        csv_out: Option<PathBuf>,
    },
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_ERROR,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn execute(cli: &Cli) -> Result<i32> {
    let workers = cli.workers.max(1);
    let vb = cli.vertex_budget;
    match &cli.command {
        Command::Gen { source, output } => {
            let named = source.resolve(vb)?;
            emit(output.as_deref(), &dimacs::format_dimacs(&named.graph))?;
            Ok(EXIT_OK)
        }
        Command::Exact {
            source,
            strategy,
            budget_nodes,
            budget_seconds,
            witness_out,
            no_hints,
            upper_bound_file,
        } => {
            let named = source.resolve(vb)?;
            let dm = distances(&named, vb)?;
            let budget = solve_budget(*budget_nodes, *budget_seconds);
            let res = match strategy {
                Strategy::Iterative | Strategy::Starred => {
                    let mut opts = PcnOptions { workers, ..PcnOptions::default() };
                    if !no_hints {
                        if let Some(params) = named.hamming {
                            let hints = pcn::hamming_solver_hints(&params, vb)?;
                            opts.warm_start = hints.warm_start;
                            opts.alpha_cap = hints.alpha_cap;
                        }
                    }
                    if *strategy == Strategy::Iterative {
                        pcn::pcn_exact_iterative_with(&named.graph, &dm, budget, &opts)?
                    } else {
                        pcn::pcn_exact_starred_with(&named.graph, &dm, budget, &opts)?
                    }
                }
                Strategy::StarredCapped => {
                    let Some(path) = upper_bound_file else {
                        return Err(usage(
                            "--strategy starred-capped needs --upper-bound-file",
                        ));
                    };
                    let (_, witness) = sets::read_coloring(path)?;
                    let t = witness.k() as usize;
                    pcn::pcn_exact_starred_capped(&named.graph, &dm, t, &witness, budget, workers)?
                }
            };
            if let Some(path) = witness_out {
                write_witness(path, &named.name, &res)?;
            }
            print_bound(&res);
            Ok(exit_for(&res))
        }
        Command::Heuristic { source, budget_nodes, budget_seconds, set_out } => {
            let params = hamming_source(source)?;
            let budget = solve_budget(*budget_nodes, *budget_seconds);
            let (res, set) = pcn::hamming_heuristic(&params, vb, budget, workers)?;
            if let Some(path) = set_out {
                sets::write_layered_set(path, &set)?;
            }
            println!("layered set size = {}", set.len());
            print_bound(&res);
            Ok(EXIT_OK)
        }
        Command::Bounds {
            source,
            heuristic_nodes,
            budget_nodes,
            budget_seconds,
            set_out,
        } => {
            let params = hamming_source(source)?;
            let heuristic_budget =
                SolveBudget::nodes(heuristic_nodes.unwrap_or(BOUNDS_DEFAULT_HEURISTIC_NODES));
            let exact_budget = solve_budget(*budget_nodes, *budget_seconds);
            let (res, set) =
                pcn::hamming_bounds(&params, vb, heuristic_budget, exact_budget, workers)?;
            if let Some(path) = set_out {
                sets::write_layered_set(path, &set)?;
            }
            print_bound(&res);
            Ok(exit_for(&res))
        }
        Command::Verify { source, coloring } => {
            let named = source.resolve(vb)?;
            let dm = distances(&named, vb)?;
            let (_, coloring) = sets::read_coloring(coloring)?;
            match pcn::verify_packing_coloring(&named.graph, &dm, &coloring) {
                Ok(()) => {
                    println!("valid packing coloring with largest color {}", coloring.k());
                    Ok(EXIT_OK)
                }
                Err(violation) => {
                    println!("invalid: {violation}");
                    Ok(EXIT_INVALID_COLORING)
                }
            }
        }
        Command::ExportLp { source, layers, output } => {
            let named = source.resolve(vb)?;
            let dm = distances(&named, vb)?;
            let mut sorted = layers.clone();
            sorted.sort_unstable();
            sorted.dedup();
            let covers: Vec<CliqueCover> = sorted
                .iter()
                .map(|&k| clique_cover_for_layer(&named.graph, &dm, k))
                .collect();
            let model = lp::export_ilp(&named.graph, &dm, &sorted, &covers, &named.name)?;
            emit(output.as_deref(), &model.to_lp_string())?;
            Ok(EXIT_OK)
        }
        Command::Table { m, q_min, q_max, budget_nodes, budget_seconds, csv_out } => {
            if *q_min < 2 {
                return Err(usage("--q-min must be at least 2"));
            }
            if q_min > q_max {
                return Err(usage("--q-min must not exceed --q-max"));
            }
            let budget = solve_budget(
                Some(budget_nodes.unwrap_or(TABLE_DEFAULT_NODES)),
                *budget_seconds,
            );
            let mut rows = Vec::new();
            for q in *q_min..=*q_max {
                let params = HammingParams::new(q, *m)?;
                let row = match pcn::hamming_bounds(&params, vb, budget, budget, workers) {
                    Ok((res, _)) => table::TableRow {
                        q,
                        m: *m,
                        lower: Some(res.lower),
                        upper: Some(res.upper),
                        status: match res.status {
                            PcnStatus::Exact => table::RowStatus::Exact,
                            PcnStatus::Bounds => table::RowStatus::Bounds,
                        },
                    },
                    Err(Error::VertexBudgetExceeded { .. }) => table::TableRow {
                        q,
                        m: *m,
                        lower: None,
                        upper: None,
                        status: table::RowStatus::Skipped,
                    },
                    Err(e) => return Err(e),
                };
                rows.push(row);
            }
            print!("{}", table::render_bounds_table(&rows));
            if let Some(path) = csv_out {
                fs::write(path, table::render_bounds_csv(&rows))?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn usage(message: &str) -> Error {
    Error::InvalidArguments(message.to_string())
}

fn check_vertex_budget(n: usize, budget: u64) -> Result<()> {
    if n as u64 > budget {
        return Err(Error::VertexBudgetExceeded { requested: n as u64, budget });
    }
    Ok(())
}

fn solve_budget(nodes: Option<u64>, seconds: Option<u64>) -> SolveBudget {
    SolveBudget { node_limit: nodes, time_limit: seconds.map(Duration::from_secs) }
}

fn distances(named: &NamedGraph, vertex_budget: u64) -> Result<DistanceMatrix> {
    match &named.hamming {
        Some(params) => hamming::hamming_distance_matrix(params, vertex_budget),
        None => all_pairs_distances(&named.graph),
    }
}

fn hamming_source(source: &GraphSource) -> Result<HammingParams> {
    if source.input.is_some() || source.family != Some(Family::Hamming) {
        return Err(usage("this command works on --family hamming only"));
    }
    let (Some(q), Some(m)) = (source.q, source.m) else {
        return Err(usage("--family hamming needs --q and --m"));
    };
    HammingParams::new(q, m)
}

fn emit(path: Option<&std::path::Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_witness(path: &std::path::Path, name: &str, res: &PcnResult) -> Result<()> {
    match &res.witness {
        Some(w) => sets::write_coloring(path, name, w),
        None => Err(usage("no witness coloring is available for this result")),
    }
}

fn print_bound(res: &PcnResult) {
    match res.status {
        PcnStatus::Exact => println!("chi_rho = {}", res.upper),
        PcnStatus::Bounds => println!("chi_rho in [{}, {}]", res.lower, res.upper),
    }
}

fn exit_for(res: &PcnResult) -> i32 {
    match res.status {
        PcnStatus::Exact => EXIT_OK,
        PcnStatus::Bounds => EXIT_BUDGET_EXHAUSTED,
    }
}
