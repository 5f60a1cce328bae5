#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use distance_eigen::Error;
use serde_json::{json, Value};

mod continuum;
mod graph;
mod oned;
mod output;

use output::Output;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
    #[error(transparent)]
    Library(#[from] Error),
}

impl CliError {
    fn is_numerical(&self) -> bool {
        matches!(
            self,
            CliError::Numerical(_)
                | CliError::Library(
                    Error::NonconvergedAfterMaxIters { .. }
                        | Error::Integration(_)
                        | Error::DegenerateProfile(_)
                )
        )
    }

    fn exit_code(&self) -> u8 {
        if self.is_numerical() {
            3
        } else {
            2
        }
    }

    fn kind(&self) -> &'static str {
        if self.is_numerical() {
            "numerical"
        } else {
            "input"
        }
    }

    /// Name of the library error variant, e.g. `DisconnectedGraph`.
    fn cause(&self) -> Option<String> {
        match self {
            CliError::Library(e) => {
                let debug = format!("{e:?}");
                let end = debug.find(['(', ' ', '{']).unwrap_or(debug.len());
                Some(debug[..end].to_string())
            }
            _ => None,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "distance-eigen",
    version,
    about = "Distance functions as eigenfunctions: graph, continuum and 1D experiments"
)]
pub struct Cli {
    /// Directory receiving CSV/JSON outputs.
    #[arg(
        long,
        global = true,
        env = "DISTANCE_EIGEN_OUT",
        default_value = "distance-eigen-out"
    )]
    out: PathBuf,
    /// Seed for randomized generators, recorded in run.json.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BoundaryKind {
    Ring,
    Corners,
}

/// Exactly one graph source.
#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct GraphSource {
    /// Graph JSON file `{"vertices", "edges", "boundary"}`.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Path graph on N vertices with both ends as boundary.
    #[arg(long, value_name = "N")]
    path: Option<usize>,
    /// W x H grid graph.
    #[arg(long, num_args = 2, value_names = ["W", "H"])]
    grid: Option<Vec<usize>>,
    /// Random connected graph with N vertices and M extra edges, drawn from --seed.
    #[arg(long, num_args = 2, value_names = ["N", "M"])]
    random: Option<Vec<usize>>,
    /// Edge-list CSV `source,target[,weight]` with string vertex ids.
    #[arg(long)]
    mesh: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Boundary of generated grids.
    #[arg(long, value_enum, default_value = "ring")]
    boundary: BoundaryKind,
    /// Comma-separated boundary ids for --mesh.
    #[arg(long, value_delimiter = ',')]
    mesh_boundary: Vec<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProfileKind {
    Interval,
    Disk,
    Square,
    Lshape,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    G,
    Flow,
    Vartime,
    Levelsets,
    Calibration,
    Bound,
}

#[derive(Debug, Args)]
pub struct ContinuumArgs {
    #[arg(long, value_enum, default_value = "interval")]
    profile: ProfileKind,
    #[arg(long, value_enum)]
    demo: Demo,
    /// Interval end points.
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    b: f64,
    /// Disk radius.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Side length of the square or L-shape.
    #[arg(long = "L", default_value_t = 1.0)]
    side: f64,
    /// Arm thickness of the L-shape.
    #[arg(long, default_value_t = 0.4)]
    delta: f64,
    /// Tabulated `tau,perimeter` profile for --profile csv.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Dimension of the tabulated domain.
    #[arg(long, default_value_t = 2)]
    dimension: usize,
    /// Perimeter-bound parameters for tabulated profiles.
    #[arg(long)]
    r_tilde: Option<f64>,
    #[arg(long)]
    tau_tilde: Option<f64>,
    /// ODE tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Number of sample rows.
    #[arg(long, default_value_t = 101)]
    samples: usize,
    /// Largest ball dimension for the calibration demo.
    #[arg(long, default_value_t = 5)]
    max_dim: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance to the boundary with per-edge saturation flags.
    GraphDistance(GraphArgs),
    /// Implicit-Euler gradient flow with trajectory and asymptotic profile.
    Flow {
        #[command(flatten)]
        graph: GraphArgs,
        /// `const`, `const:C`, `distance`, or a vertex-value CSV file.
        #[arg(long, default_value = "const")]
        f: String,
        /// Time step (default 0.01 ||f||² / J_w(f)).
        #[arg(long)]
        step: Option<f64>,
        /// Extinction tolerance on ||u||_2.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Prox primal-dual gap tolerance.
        #[arg(long, default_value_t = 1e-12)]
        prox_tol: f64,
        /// Times at which full states are written to snapshots.csv.
        #[arg(long, value_delimiter = ',')]
        snapshot: Vec<f64>,
    },
    /// Eigenfunction certificate and extreme-point check for a vertex function.
    Certify {
        #[command(flatten)]
        graph: GraphArgs,
        /// `distance` or a vertex-value CSV file.
        #[arg(long, default_value = "distance")]
        u: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Continuum model domains described by their perimeter profiles.
    Continuum(ContinuumArgs),
    /// First K one-dimensional basis eigenfunctions with a Rayleigh table.
    Basis {
        #[arg(long = "n", default_value_t = 4)]
        count: usize,
    },
    /// Extreme-point check of a piecewise-linear function read from CSV.
    #[command(name = "extreme-1d")]
    Extreme1d {
        file: PathBuf,
        /// Slope tolerance; 0 means exact.
        #[arg(long, default_value = "0")]
        tol: String,
    },
    /// Exact eigenfunction check of a piecewise-linear function read from CSV.
    #[command(name = "eigen-1d")]
    Eigen1d {
        file: PathBuf,
        #[arg(long, default_value = "0")]
        tol: String,
    },
    /// Level-N Smith–Volterra–Cantor approximation and its distance function.
    Svc {
        #[arg(long, default_value_t = 6)]
        level: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::GraphDistance(_) => "graph-distance",
            Command::Flow { .. } => "flow",
            Command::Certify { .. } => "certify",
            Command::Continuum(_) => "continuum",
            Command::Basis { .. } => "basis",
            Command::Extreme1d { .. } => "extreme-1d",
            Command::Eigen1d { .. } => "eigen-1d",
            Command::Svc { .. } => "svc",
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let mut out = Output::new(&cli.out)?;
    let summary: Value = match &cli.command {
        Command::GraphDistance(args) => graph::distance(args, cli.seed, &mut out)?,
        Command::Flow {
            graph: args,
            f,
            step,
            tol,
            prox_tol,
            snapshot,
        } => graph::flow(
            args, cli.seed, f, *step, *tol, *prox_tol, snapshot, &mut out,
        )?,
        Command::Certify {
            graph: args,
            u,
            tol,
        } => graph::certify(args, cli.seed, u, *tol, &mut out)?,
        Command::Continuum(args) => continuum::run(args, &mut out)?,
        Command::Basis { count } => oned::basis(*count, &mut out)?,
        Command::Extreme1d { file, tol } => oned::extreme(file, tol, &mut out)?,
        Command::Eigen1d { file, tol } => oned::eigen(file, tol, &mut out)?,
        Command::Svc { level } => oned::svc(*level, &mut out)?,
    };
    let mut files = out.written().to_vec();
    files.push("run.json".into());
    let record = json!({
        "command": cli.command.name(),
        "args": std::env::args().skip(1).collect::<Vec<_>>(),
        "seed": cli.seed,
        "version": env!("CARGO_PKG_VERSION"),
        "outputs": files,
        "summary": summary,
    });
    out.json("run.json", &record)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).expect("json value serializes")
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut report = json!({
                "error": e.kind(),
                "exit_code": e.exit_code(),
                "message": e.to_string(),
            });
            if let Some(cause) = e.cause() {
                report["cause"] = json!(cause);
            }
            eprintln!("{report}");
            ExitCode::from(e.exit_code())
        }
    }
}
