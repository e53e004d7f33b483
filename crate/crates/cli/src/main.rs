mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Virtual element solver for -Δu = f on polygonal meshes.
#[derive(Debug, Parser)]
#[command(name = "polyvem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct MeshSource {
    /// POLY2D mesh file.
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Generated unit-square mesh, `<family>:<n>` (quads, triangles, distortedQuads).
    #[arg(long = "gen", value_name = "FAMILY:N")]
    generate: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one problem and report its errors.
    Solve {
        #[command(flatten)]
        source: MeshSource,
        #[arg(long, short = 'k', default_value_t = 1)]
        degree: usize,
        /// sinsin, polyK or file:<path>.
        #[arg(long, default_value = "sinsin")]
        problem: String,
        /// VTK output file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Error CSV (standard output when omitted).
        #[arg(long)]
        errors: Option<PathBuf>,
        /// Relative residual of the CG solve.
        #[arg(long, default_value_t = polyvem::system::DEFAULT_TOLERANCE)]
        tol: f64,
        /// Write the local matrices of this element as CSV files.
        #[arg(long, value_name = "ELEMENT")]
        dump_matrices: Option<usize>,
        /// Directory for the matrix dumps.
        #[arg(long, default_value = ".")]
        dump_dir: PathBuf,
    },
    /// h-refinement study on a generated mesh family.
    Convergence {
        #[arg(long, default_value = "quads")]
        family: polyvem::mesh::MeshKind,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, short = 'k', default_value_t = 1)]
        degree: usize,
        #[arg(long, default_value = "sinsin")]
        problem: String,
        /// Divisions per side on the coarsest level.
        #[arg(long, default_value_t = 4)]
        coarsest: usize,
        #[arg(long, default_value_t = polyvem::system::DEFAULT_TOLERANCE)]
        tol: f64,
        /// CSV output (standard output when omitted).
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Mesh tools.
    Mesh {
        #[command(subcommand)]
        command: MeshCommand,
    },
    /// Quadrature rules per element, optionally compressed.
    Quad {
        #[command(flatten)]
        source: MeshSource,
        /// Polynomial exactness of the rules.
        #[arg(long, short = 'd', default_value_t = 2)]
        degree: usize,
        #[arg(long)]
        compress: bool,
        /// CSV table of the rules (standard output when omitted).
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum MeshCommand {
    /// Generate a unit-square mesh, `<family>:<n>`.
    Gen {
        spec: String,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Split the elements crossed by the line a x + b y = c.
    Cut {
        input: PathBuf,
        #[arg(long, value_name = "A,B,C", allow_hyphen_values = true)]
        line: String,
        /// Only split elements whose centroid lies in `xmin,xmax,ymin,ymax`;
        /// their neighbors receive hanging nodes.
        #[arg(long, value_name = "XMIN,XMAX,YMIN,YMAX", allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Join two meshes that share boundary segments.
    Merge {
        first: PathBuf,
        second: PathBuf,
        /// Vertex coincidence tolerance relative to the domain diameter.
        #[arg(long, default_value_t = polyvem::mesh::DEFAULT_MERGE_TOL)]
        merge_tol: f64,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Print counts, area and the conformity verdict.
    Info { input: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
