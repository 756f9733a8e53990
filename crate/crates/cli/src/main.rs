//! `ribbon`: topology, rosette phases, multiscale power counting and slice
//! numerics for ribbon graphs stored as JSON.

mod commands;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::Rational64;
use ribbon_core::ModelParams;

use commands::{Construction, Format, Render};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "ribbon",
    version,
    about = "Ribbon-graph analysis for the degenerate Moyal scalar model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for random assignments and Monte Carlo.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct ParamArgs {
    /// Noncommutativity θ.
    #[arg(long, global = true, default_value_t = ModelParams::default().theta)]
    theta: f64,
    /// Oscillator frequency Ω.
    #[arg(long, global = true, default_value_t = ModelParams::default().omega)]
    omega: f64,
    #[arg(long, global = true, default_value_t = ModelParams::default().mass)]
    mass: f64,
    /// Slicing ratio M.
    #[arg(long = "bigM", global = true, default_value_t = ModelParams::default().big_m)]
    big_m: f64,
    /// Insertion coupling κ.
    #[arg(long, global = true, default_value_t = ModelParams::default().kappa)]
    kappa: f64,
    /// Quartic coupling λ.
    #[arg(long, global = true, default_value_t = ModelParams::default().lambda)]
    lambda: f64,
}

impl ParamArgs {
    fn params(&self) -> ModelParams {
        ModelParams {
            theta: self.theta,
            omega: self.omega,
            mass: self.mass,
            kappa: self.kappa,
            lambda: self.lambda,
            big_m: self.big_m,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Vertices, lines, faces, genus, broken faces and tree-likeness.
    Analyze {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Rosette phase of a connected graph after contracting a spanning tree.
    Rosette {
        #[arg(long)]
        graph: PathBuf,
        /// Root vertex id; the first vertex by default.
        #[arg(long)]
        root: Option<String>,
        #[arg(long, value_enum, default_value_t = Construction::ClosedForm)]
        construction: Construction,
    },
    /// Inclusion tree of quasi-local subgraphs under a scale attribution.
    GnTree {
        #[arg(long)]
        graph: PathBuf,
        /// Attribution file; every segment at scale 1 when omitted.
        #[arg(long)]
        scales: Option<PathBuf>,
    },
    /// Degree-of-convergence bounds, divergences and counterterms per node.
    Classify {
        #[arg(long)]
        graph: PathBuf,
        /// Attribution file; every segment at scale 1 when omitted.
        #[arg(long, conflicts_with = "enumerate_scales")]
        scales: Option<PathBuf>,
        /// Classify every attribution with scales in 0..=S.
        #[arg(long, value_name = "S")]
        enumerate_scales: Option<u32>,
        /// Exit with status 1 when a node is divergent.
        #[arg(long)]
        fail_on_divergent: bool,
    },
    /// Fits the constant of the Gaussian slice bound on a 5×5×5 grid.
    VerifyBounds {
        /// Slices 1..=IMAX.
        #[arg(long, default_value_t = 6)]
        imax: u32,
    },
    /// Growth of a tadpole amplitude or a chain-of-insertions line with the slice.
    ScaleScan {
        #[arg(long)]
        graph: PathBuf,
        /// Slices 1..=IMAX; slopes are fitted over 2..=min(IMAX, 6).
        #[arg(long, default_value_t = 6)]
        imax: u32,
        /// Monte Carlo samples per slice.
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
    },
    /// Checks both rosette constructions against the vertex phases.
    OracleCheck {
        #[arg(long)]
        graph: PathBuf,
        /// Random rational assignments per rooted tree.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1000)]
        max_trees: usize,
        /// Adds a fraction to one closed-form coefficient.
        #[arg(long, hide = true)]
        perturb_coefficient: Option<Rational64>,
    },
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let params = cli.params.params();
    let format = cli.format;
    match &cli.command {
        Command::Analyze { graph } => {
            let g = commands::load_graph(graph)?;
            Ok(commands::analyze(&g)?.render(format))
        }
        Command::Rosette {
            graph,
            root,
            construction,
        } => {
            let g = commands::load_graph(graph)?;
            Ok(commands::rosette(&g, root.as_deref(), *construction)?.render(format))
        }
        Command::GnTree { graph, scales } => {
            let g = commands::load_graph(graph)?;
            let mu = commands::load_scales(&g, scales.as_deref())?;
            Ok(commands::gn_view(&g, &mu)?.render(format))
        }
        Command::Classify {
            graph,
            scales,
            enumerate_scales,
            fail_on_divergent,
        } => {
            let g = commands::load_graph(graph)?;
            let (out, divergent) = match enumerate_scales {
                Some(max) => {
                    let r = commands::enumerate(&g, *max)?;
                    (r.render(format), r.any_divergent())
                }
                None => {
                    let mu = commands::load_scales(&g, scales.as_deref())?;
                    let r = commands::classify(&g, &mu)?;
                    (r.render(format), r.0.any_divergent())
                }
            };
            if *fail_on_divergent && divergent {
                print!("{out}");
                return Err(CliError::Divergent);
            }
            Ok(out)
        }
        Command::VerifyBounds { imax } => {
            params.validate()?;
            Ok(commands::verify_bounds(&params, *imax)?.render(format))
        }
        Command::ScaleScan {
            graph,
            imax,
            samples,
        } => {
            params.validate()?;
            let g = commands::load_graph(graph)?;
            Ok(commands::scale_scan(&params, &g, *imax, *samples, cli.seed)?.render(format))
        }
        Command::OracleCheck {
            graph,
            trials,
            max_trees,
            perturb_coefficient,
        } => {
            let g = commands::load_graph(graph)?;
            let r = commands::oracle(&g, *trials, *max_trees, cli.seed, *perturb_coefficient)?;
            let out = r.render(format);
            if !r.0.passed() {
                print!("{out}");
                let first = &r.0.mismatches[0];
                return Err(CliError::OracleMismatch(format!(
                    "{} of {} checks differ; first: {} at root {} with tree [{}]",
                    r.0.mismatches.len(),
                    r.0.checks,
                    first.construction,
                    first.root,
                    first.tree_edges.join(",")
                )));
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = std::io::stdout().flush();
            if !matches!(e, CliError::Divergent) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
