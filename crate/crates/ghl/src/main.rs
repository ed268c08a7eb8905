use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ghl::commands;
use ghl::config::{self, CountingAlloc, OutputFormat, RunConfig};
use ghl::CliResult;

#[global_allocator]
static ALLOC: CountingAlloc = CountingAlloc;

/// Exact computation in the forested-graph chain complex: Morita cycles,
/// the stabilized bounding chain, pairings, and small-rank Betti numbers.
#[derive(Parser)]
#[command(name = "ghl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct RunArgs {
    /// Worker threads for the parallel drivers.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed recorded in the configuration (reserved for randomized tooling).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Abort with exit code 3 when live memory exceeds this many MiB;
    /// also read from GHL_MEMORY_CAP_MB.
    #[arg(long, global = true)]
    memory_cap_mb: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a vertex-oriented graph file.
    Gamma {
        #[command(subcommand)]
        cmd: GammaCmd,
    },
    /// Build and certify the cycle of a vertex-oriented graph.
    Cycle {
        #[command(subcommand)]
        cmd: CycleCmd,
    },
    /// Check the pairing constant against a cell basis.
    Pairing {
        #[command(subcommand)]
        cmd: PairingCmd,
    },
    /// Certify that the stabilized cycle bounds.
    Stab {
        #[command(subcommand)]
        cmd: StabCmd,
    },
    /// Exact homology of the quotient complex.
    Homology {
        #[command(subcommand)]
        cmd: HomologyCmd,
    },
    /// Operations on chain files.
    Chain {
        #[command(subcommand)]
        cmd: ChainCmd,
    },
}

#[derive(Subcommand)]
enum GammaCmd {
    /// Print admissibility, valences, and automorphism data.
    Check { path: PathBuf },
}

#[derive(Subcommand)]
enum CycleCmd {
    /// Build z(gamma) and optionally write it to a chain file.
    Build {
        path: PathBuf,
        /// Build the basepointed variant.
        #[arg(long)]
        basepointed: bool,
        /// Base vertex overriding the file's `base` line.
        #[arg(long)]
        base: Option<u32>,
        /// Output chain file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also certify d_R = d_C = 0.
        #[arg(long)]
        verify: bool,
    },
    /// Build z(gamma) and certify both differentials vanish.
    Verify {
        path: PathBuf,
        #[arg(long)]
        basepointed: bool,
        #[arg(long)]
        base: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PairingCmd {
    /// Verify the pairing identity over the matching cell basis.
    Verify { path: PathBuf },
}

#[derive(Subcommand)]
enum StabCmd {
    /// Build Z+ and W and certify boundary(W) = Z+.
    Verify {
        path: PathBuf,
        /// Base vertex overriding the file's `base` line.
        #[arg(long)]
        base: Option<u32>,
        /// Directory receiving the Z+ and W chain files.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Corrupt one coefficient of W first (negative control).
        #[arg(long)]
        perturb: bool,
    },
}

#[derive(Subcommand)]
enum HomologyCmd {
    /// Betti numbers b_k over a dimension range.
    Betti {
        #[arg(long)]
        rank: u32,
        #[arg(long, default_value = "out")]
        variant: String,
        /// Inclusive range, e.g. 0..3
        #[arg(long)]
        dims: String,
    },
}

#[derive(Subcommand)]
enum ChainCmd {
    /// Apply the boundary operator to a chain file.
    Boundary {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve boundary(x) = c exactly over the enumerated basis.
    IsBoundary {
        path: PathBuf,
        /// Witness chain file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two chain files term by term.
    Diff { a: PathBuf, b: PathBuf },
}

fn run(cli: Cli) -> CliResult<String> {
    let workers = cli
        .run
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let cap_env = std::env::var(config::MEMORY_CAP_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    let cfg = RunConfig {
        workers,
        memory_cap_mb: cli.run.memory_cap_mb.or(cap_env).unwrap_or(16 * 1024),
        output_format: match cli.run.format {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
        },
        seed: cli.run.seed,
    };
    cfg.validate()?;
    config::set_memory_cap_mb(cfg.memory_cap_mb);

    match cli.command {
        Command::Gamma {
            cmd: GammaCmd::Check { path },
        } => commands::gamma_check(&cfg, &path),
        Command::Cycle { cmd } => match cmd {
            CycleCmd::Build {
                path,
                basepointed,
                base,
                out,
                verify,
            } => commands::cycle_build(&cfg, &path, basepointed, base, out.as_deref(), verify),
            CycleCmd::Verify {
                path,
                basepointed,
                base,
                out,
            } => commands::cycle_build(&cfg, &path, basepointed, base, out.as_deref(), true),
        },
        Command::Pairing {
            cmd: PairingCmd::Verify { path },
        } => commands::pairing_verify(&cfg, &path),
        Command::Stab {
            cmd:
                StabCmd::Verify {
                    path,
                    base,
                    out,
                    perturb,
                },
        } => commands::stab_verify(&cfg, &path, base, out.as_deref(), perturb),
        Command::Homology {
            cmd: HomologyCmd::Betti {
                rank,
                variant,
                dims,
            },
        } => {
            let variant = ghl::chain_file::variant_from_str(&variant)?;
            let dims = commands::parse_dims(&dims)?;
            commands::homology_betti(&cfg, rank, variant, dims)
        }
        Command::Chain { cmd } => match cmd {
            ChainCmd::Boundary { path, out } => {
                commands::chain_boundary(&cfg, &path, out.as_deref())
            }
            ChainCmd::IsBoundary { path, out } => {
                commands::chain_is_boundary(&cfg, &path, out.as_deref())
            }
            ChainCmd::Diff { a, b } => commands::chain_diff(&cfg, &a, &b),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
