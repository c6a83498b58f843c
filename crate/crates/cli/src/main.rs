use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pfspace::{
    cmd_analyze, cmd_certify, cmd_classical, cmd_qec, cmd_structure, load, text, to_json, CliError, Settings,
};
use pfspace_core::Tolerances;

#[derive(Parser)]
#[command(name = "pfspace", version, about = "Perron-Frobenius analysis of completely positive maps")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Relative residual accepted for operator equations.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_residual: f64,
    /// Allowed negative eigenvalue (relative) in PSD tests.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_psd: f64,
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_rank: f64,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Random test points per sampled check.
    #[arg(long, global = true, default_value_t = 64)]
    samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Refuse inputs with a larger matrix dimension.
    #[arg(long, global = true, default_value_t = 8)]
    max_dim: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral radius, PF eigenvectors, p_max, zeta and irreducibility.
    Analyze { channel: PathBuf },
    /// Recovery channel, corrected block and Knill-Laflamme data for a code.
    Qec { errors: PathBuf, code: PathBuf },
    /// Exchange-algebra checks on the PF eigenspace.
    Structure { channel: PathBuf },
    /// PF data and Collatz-Wielandt bounds of a nonnegative matrix.
    Classical { matrix: PathBuf },
    /// Collatz-Wielandt certificate; uses the left eigenvector without --z.
    Certify {
        channel: PathBuf,
        #[arg(long)]
        z: Option<PathBuf>,
    },
}

fn settings(o: &Opts) -> Result<Settings, CliError> {
    let tol = Tolerances { residual: o.tol_residual, psd_floor: o.tol_psd, rank_cut: o.tol_rank, ..Tolerances::default() };
    if !tol.is_valid() {
        return Err(CliError::Invalid("tolerances must be finite and positive".into()));
    }
    Ok(Settings { tol, seed: o.seed, samples: o.samples, max_dim: o.max_dim })
}

fn run(cli: &Cli) -> Result<serde_json::Value, CliError> {
    let s = settings(&cli.opts)?;
    match &cli.command {
        Command::Analyze { channel } => cmd_analyze(&load(channel)?, &s),
        Command::Qec { errors, code } => cmd_qec(&load(errors)?, &load(code)?, &s),
        Command::Structure { channel } => cmd_structure(&load(channel)?, &s),
        Command::Classical { matrix } => cmd_classical(&load(matrix)?, &s),
        Command::Certify { channel, z } => {
            let z = z.as_deref().map(load).transpose()?;
            cmd_certify(&load(channel)?, z.as_ref(), &s)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            let out = match cli.opts.format {
                Format::Json => to_json(&report),
                Format::Text => text::render(&report),
            };
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
