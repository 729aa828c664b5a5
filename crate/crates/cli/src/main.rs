use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use foliation_core::report::{cmd_bounds, cmd_hopf, cmd_verify, BoundTheorem, RunConfig, RunReport};
use foliation_core::Error;

/// Checks O'Neill-tensor identities and bounds for Riemannian foliations.
#[derive(Debug, Parser)]
#[command(name = "foliate", version)]
struct Cli {
    /// Write the JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Suppress the human-readable summary.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run the exterior, curvature and O'Neill identity suites.
    Verify {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to one codimension (all degrees 1..q−1).
        #[arg(long)]
        q: Option<usize>,
        /// Override every identity tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Flip the sign of one term in the master identity.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Sample points of a weighted Hopf foliation and report its O'Neill data.
    Hopf {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate a theorem's bound at sampled points.
    Bounds {
        /// One of 3.1, 3.2, 4.1, sandwich, cor3.1.
        #[arg(long)]
        theorem: String,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Random 1-forms per point for cor3.1.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long)]
    m: Option<usize>,
    /// Comma-separated weights, starting with 1.
    #[arg(long, value_delimiter = ',')]
    theta: Option<Vec<f64>>,
}

fn config(cmd: Cmd) -> Result<RunConfig, Error> {
    Ok(match cmd {
        Cmd::Verify {
            trials,
            seed,
            q,
            tol,
            inject_fault,
        } => RunConfig {
            trials,
            seed,
            q,
            tol,
            inject_fault,
            ..RunConfig::verify()
        },
        Cmd::Hopf { model, samples, seed } => RunConfig {
            m: model.m,
            theta: model.theta,
            samples,
            seed,
            ..RunConfig::hopf(Vec::new())
        },
        Cmd::Bounds {
            theorem,
            model,
            p,
            samples,
            trials,
            seed,
            tol,
        } => RunConfig {
            m: model.m,
            theta: model.theta,
            samples,
            trials,
            seed,
            tol,
            ..RunConfig::bounds(theorem.parse::<BoundTheorem>()?, Vec::new(), p)
        },
    })
}

fn run(cli: Cli) -> Result<RunReport, Error> {
    let cfg = config(cli.command)?;
    let report = match cfg.command {
        foliation_core::report::Command::Verify => cmd_verify(&cfg)?,
        foliation_core::report::Command::Hopf => cmd_hopf(&cfg)?,
        foliation_core::report::Command::Bounds => cmd_bounds(&cfg)?,
    };
    if let Some(path) = &cli.out {
        std::fs::write(path, report.to_json()? + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    if !cli.quiet {
        print!("{}", report.render_text());
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => ExitCode::from(report.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
