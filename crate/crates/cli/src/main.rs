use std::path::PathBuf;
use std::process::ExitCode;

use anisoreg_cli::commands;
use anisoreg_cli::config::{Settings, SimulateSettings, VerifySettings};
use anisoreg_cli::{CliError, Result};
use anisoreg_core::Exponent;
use clap::{Args, Parser, Subcommand};

/// Pseudo-spectral Navier-Stokes runs with anisotropic regularity diagnostics.
#[derive(Debug, Parser)]
#[command(name = "anisoreg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate a periodic flow and record the regularity diagnostics.
    Simulate(SimulateArgs),
    /// Evaluate an interpolation inequality on a family of test functions.
    Verify(VerifyArgs),
    /// Print the mixed norm of a field file.
    Norm(NormArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// key=value file applied before the flags (a run manifest works).
    #[arg(long)]
    config: Option<PathBuf>,
    /// N for an N³ grid, or N1xN2xN3.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    t_end: Option<String>,
    /// Kinematic viscosity.
    #[arg(long)]
    nu: Option<String>,
    /// taylor-green, random, single-mode or file.
    #[arg(long)]
    init: Option<String>,
    /// Velocity file for --init file.
    #[arg(long)]
    init_file: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    amplitude: Option<String>,
    /// Spectral slope of the random initial field.
    #[arg(long, allow_hyphen_values = true)]
    slope: Option<String>,
    /// true or false.
    #[arg(long)]
    dealias: Option<String>,
    /// Record every STRIDE steps.
    #[arg(long)]
    stride: Option<String>,
    /// Exponent along x1 (a number in (2, inf], or inf).
    #[arg(long)]
    p: Option<String>,
    /// Exponent along x2.
    #[arg(long)]
    q: Option<String>,
    /// Exponent along x3.
    #[arg(long)]
    r: Option<String>,
    /// Trajectory CSV; the summary and manifest go next to it.
    #[arg(long)]
    out: Option<String>,
    /// Directory for velocity dumps at every recorded sample.
    #[arg(long)]
    save_fields: Option<String>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// lemma1 or lemma2.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    kappa: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// Grid size; repeat or separate with commas for a refinement study.
    #[arg(long)]
    grid: Vec<String>,
    #[arg(long)]
    seed: Option<String>,
    /// gaussian-bump, polynomial-bump, separable or random-bump.
    #[arg(long)]
    kind: Option<String>,
    /// Support radius, below pi.
    #[arg(long)]
    radius: Option<String>,
    #[arg(long)]
    amplitude: Option<String>,
    /// Per-sample CSV; the summary and manifest go next to it.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct NormArgs {
    /// Field file with a .meta sidecar.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    #[arg(long)]
    r: String,
}

fn flags<'a>(pairs: impl IntoIterator<Item = (&'static str, &'a Option<String>)>) -> Vec<(&'static str, String)> {
    pairs
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v.clone())))
        .collect()
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let flags = flags([
        ("grid", &a.grid),
        ("dt", &a.dt),
        ("t_end", &a.t_end),
        ("nu", &a.nu),
        ("init", &a.init),
        ("init_file", &a.init_file),
        ("seed", &a.seed),
        ("amplitude", &a.amplitude),
        ("slope", &a.slope),
        ("dealias", &a.dealias),
        ("stride", &a.stride),
        ("p", &a.p),
        ("q", &a.q),
        ("r", &a.r),
        ("out", &a.out),
        ("save_fields", &a.save_fields),
    ]);
    let settings = SimulateSettings::resolve(a.config.as_deref(), &flags)?;
    let outcome = commands::simulate(&settings)?;
    let s = &outcome.summary;
    println!(
        "{} steps, {} samples, t = {}, {} = {:.6e}",
        s.steps, s.samples, s.t_final, s.mode, s.final_cumulative
    );
    println!("wrote {}", outcome.outputs.csv.display());
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<()> {
    let grid = (!a.grid.is_empty()).then(|| a.grid.join(","));
    let flags = flags([
        ("suite", &a.suite),
        ("p", &a.p),
        ("q", &a.q),
        ("r", &a.r),
        ("theta", &a.theta),
        ("lambda", &a.lambda),
        ("kappa", &a.kappa),
        ("samples", &a.samples),
        ("grid", &grid),
        ("seed", &a.seed),
        ("kind", &a.kind),
        ("radius", &a.radius),
        ("amplitude", &a.amplitude),
        ("out", &a.out),
    ]);
    let settings = VerifySettings::resolve(a.config.as_deref(), &flags)?;
    let outcome = commands::verify(&settings)?;
    let s = &outcome.summary;
    print!("{}: empirical constant {:.6e}", s.family, s.empirical_constant);
    match s.drift {
        Some(d) => println!(", drift {:.3e}", d),
        None => println!(),
    }
    println!("wrote {}", outcome.outputs.csv.display());
    Ok(())
}

fn norm(a: NormArgs) -> Result<()> {
    let parse = |key: &str, v: &str| -> Result<Exponent> {
        v.parse().map_err(|e| CliError::invalid(format!("{key}: {e}")))
    };
    let value = commands::norm(&a.input, parse("p", &a.p)?, parse("q", &a.q)?, parse("r", &a.r)?)?;
    println!("{value:.16e}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Verify(a) => verify(a),
        Command::Norm(a) => norm(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
