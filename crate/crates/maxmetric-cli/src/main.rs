//! Command-line interface: validation, certification, curvature reports,
//! flows, graph utilities, direction sweeps and batch runs over a corpus.
//!
//! Exit codes: 0 success/MAXIMAL, 1 validation failure, 2 I/O-parse failure,
//! 3 INCONCLUSIVE, 4 internal limit exceeded.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use maxmetric::error::Error;
use maxmetric::graph::GraphLimits;
use maxmetric::pipeline::Limits;

use commands::{FlowArgs, GroupFlags};
use input::{load_family, load_path, LoadedInput};

#[derive(Parser)]
#[command(
    name = "maxmetric",
    version,
    about = "Exact certification of maximal left-invariant metrics on Lie groups"
)]
struct Cli {
    /// Write the primary report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format for tabular commands (batch): json or csv
    #[arg(long, global = true, default_value = "csv")]
    format: String,

    /// Worker threads for batch runs
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Cap on enumerated graph automorphisms
    #[arg(long, global = true, default_value_t = 1_000_000)]
    limit_aut: usize,

    /// Cap on enumerated symmetry-group elements
    #[arg(long, global = true, default_value_t = 1_000_000)]
    limit_group: usize,

    /// Vertex limit for graph searches
    #[arg(long, global = true, default_value_t = 12)]
    limit_vertices: usize,

    /// Eigenvalue-ratio drift threshold reported by `flow`
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol_flow: f64,

    #[command(subcommand)]
    command: Command,
}

/// Input selection shared by the algebra-level subcommands.
#[derive(Args)]
struct InputArgs {
    /// Lie algebra JSON, graph JSON, or graph text file
    path: Option<PathBuf>,

    /// Built-in family: abelian, heisenberg-sum, almost-abelian,
    /// borel-hyperbolic, motion-group-r2, complex-hyperbolic, graph
    #[arg(long)]
    family: Option<String>,

    /// Weights for --family almost-abelian, e.g. "1,2" or "1/2,-3"
    #[arg(long)]
    w: Option<String>,

    /// Dimension parameter for families that take one
    #[arg(long)]
    n: Option<usize>,

    /// Graph file input (or the graph for --family graph)
    #[arg(long)]
    graph: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self) -> Result<LoadedInput, Error> {
        if let Some(family) = &self.family {
            return load_family(family, self.w.as_deref(), self.n, self.graph.as_deref());
        }
        if let Some(graph) = &self.graph {
            return load_path(graph);
        }
        match &self.path {
            Some(path) => load_path(path),
            None => Err(Error::Parse(
                "no input: give a file path, --family, or --graph".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the Lie algebra identities (or graph well-formedness) of a file
    Validate { path: PathBuf },

    /// Certify the orthonormal-basis metric as maximal
    Certify {
        #[command(flatten)]
        input: InputArgs,
        /// Skip graph-automorphism lifts
        #[arg(long)]
        no_lifts: bool,
        /// JSON file with extra exact orthogonal automorphism generators
        #[arg(long)]
        generators: Option<PathBuf>,
    },

    /// Exact Ricci operator, scalar curvature, and Einstein check
    Ricci {
        #[command(flatten)]
        input: InputArgs,
    },

    /// Exact algebraic Ricci-soliton decomposition
    Soliton {
        #[command(flatten)]
        input: InputArgs,
    },

    /// Transitivity of the scaling-automorphism action on inner products
    Transitivity {
        #[command(flatten)]
        input: InputArgs,
    },

    /// Integrate the curvature flow d/dt g = -a Ric - b scal g
    Flow {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 2.0)]
        a: f64,
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// none, unit-bracket-norm, or unit-determinant
        #[arg(long, default_value = "none")]
        normalize: String,
    },

    /// Graph utilities
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },

    /// Compare all edge directions of a graph
    Directions {
        path: PathBuf,
        /// Also compare certificates per direction
        #[arg(long)]
        certify: bool,
    },

    /// Run the full pipeline over every .json/.txt file in a directory
    Batch {
        dir: PathBuf,
        /// Write one JSON report per input here
        #[arg(long)]
        report_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphAction {
    /// Enumerate graph automorphisms
    Auts { path: PathBuf },
    /// Test edge-transitivity
    EdgeTransitive { path: PathBuf },
    /// Test isomorphism of two graphs
    Isomorphic { path1: PathBuf, path2: PathBuf },
}

fn run(cli: &Cli) -> Result<i32, Error> {
    let limits = Limits {
        graph: GraphLimits {
            max_vertices: cli.limit_vertices,
            max_automorphisms: cli.limit_aut,
        },
        group_cap: cli.limit_group,
        max_direction_edges: 8,
    };
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Validate { path } => commands::cmd_validate(path, out),
        Command::Certify {
            input,
            no_lifts,
            generators,
        } => {
            let loaded = input.load()?;
            let flags = GroupFlags {
                no_lifts: *no_lifts,
                generators_file: generators.clone(),
            };
            commands::cmd_certify(&loaded, &flags, &limits, out)
        }
        Command::Ricci { input } => commands::cmd_ricci(&input.load()?, out),
        Command::Soliton { input } => commands::cmd_soliton(&input.load()?, out),
        Command::Transitivity { input } => commands::cmd_transitivity(&input.load()?, out),
        Command::Flow {
            input,
            a,
            b,
            t_end,
            step,
            normalize,
        } => {
            let loaded = input.load()?;
            let args = FlowArgs {
                a: *a,
                b: *b,
                t_end: *t_end,
                step: *step,
                normalize: normalize.clone(),
                tol: cli.tol_flow,
            };
            commands::cmd_flow(&loaded, &args, out)
        }
        Command::Graph { action } => match action {
            GraphAction::Auts { path } => commands::cmd_graph_auts(path, &limits, out),
            GraphAction::EdgeTransitive { path } => {
                commands::cmd_graph_edge_transitive(path, &limits, out)
            }
            GraphAction::Isomorphic { path1, path2 } => {
                commands::cmd_graph_isomorphic(path1, path2, &limits, out)
            }
        },
        Command::Directions { path, certify } => {
            commands::cmd_directions(path, *certify, &limits, out)
        }
        Command::Batch { dir, report_dir } => commands::cmd_batch(
            dir,
            cli.jobs,
            &cli.format,
            report_dir.as_deref(),
            &limits,
            out,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => ExitCode::from(commands::error_exit(&err) as u8),
    }
}
