//! Command-line front end. All real work lives in the library; this binary
//! only maps arguments onto a job configuration and exit codes.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use casimir::cli::{
    resolve_system, run, CliError, CommandKind, JobConfig, MaterialSpec, OutputFormat, SigmaSpec,
};

#[derive(Parser)]
#[command(
    name = "casimir",
    about = "Casimir energies of quasiperiodic delta-plate stacks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Named substitution system (fibonacci, thue-morse, period-doubling,
    /// silver-mean, bronze-mean, copper-mean, nickel-mean, triadic-cantor).
    #[arg(long)]
    preset: Option<String>,
    /// Rule file in the DSL, e.g. "axiom D; D -> D N; N -> D;".
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Iteration or inclusive range, e.g. 3 or 1..25.
    #[arg(long, default_value = "1")]
    iters: String,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
}

#[derive(Args)]
struct PhysicsOpts {
    /// Conductivity: a single value or a log-spaced grid lo:hi:npoints.
    #[arg(long)]
    sigma: Option<String>,
    /// Plate material; inferred from --sigma when omitted.
    #[arg(long, value_parser = ["ideal", "finite"])]
    material: Option<String>,
    /// Plate spacing.
    #[arg(long, default_value_t = 1.0)]
    spacing: f64,
    /// Append the raw per-area energy column.
    #[arg(long)]
    raw: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Write words and their neighbourhood statistics per iteration.
    Sequence {
        #[command(flatten)]
        common: CommonOpts,
        /// Also write the system back out as a rule file.
        #[arg(long)]
        emit_rules: Option<PathBuf>,
    },
    /// Scaled Casimir energy per iteration.
    Energy {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        physics: PhysicsOpts,
    },
    /// Scaled energy over a conductivity grid, per iteration.
    Sweep {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        physics: PhysicsOpts,
    },
    /// Exponential growth fit of the energy ladder.
    Fit {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        physics: PhysicsOpts,
    },
    /// Run the Green's-function invariant suite and report counts.
    GreensCheck {
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format.
        #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
        format: String,
    },
}

fn parse_iters(text: &str) -> Result<(u32, u32), CliError> {
    let bad = || CliError::Config(format!("invalid iteration spec '{text}'; use A or A..B"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        Ok((lo, hi))
    } else {
        let v: u32 = text.trim().parse().map_err(|_| bad())?;
        Ok((v, v))
    }
}

fn parse_format(text: &str) -> OutputFormat {
    match text {
        "json" => OutputFormat::Json,
        _ => OutputFormat::Csv,
    }
}

fn material_and_sigma(
    physics: &PhysicsOpts,
    command: CommandKind,
) -> Result<(MaterialSpec, SigmaSpec), CliError> {
    let sigma = match &physics.sigma {
        Some(text) => SigmaSpec::parse(text)?,
        // Sweeps default to the standard grid; everything else to none.
        None if command == CommandKind::Sweep => SigmaSpec::Grid {
            lo: 1e-2,
            hi: 1e4,
            n: 60,
        },
        None => SigmaSpec::None,
    };
    let material = match physics.material.as_deref() {
        Some("ideal") => MaterialSpec::Ideal,
        Some("finite") => MaterialSpec::Finite,
        Some(other) => return Err(CliError::Config(format!("unknown material '{other}'"))),
        None => match sigma {
            SigmaSpec::None => MaterialSpec::Ideal,
            _ => MaterialSpec::Finite,
        },
    };
    Ok((material, sigma))
}

fn sequence_config(common: CommonOpts, emit_rules: Option<PathBuf>) -> Result<JobConfig, CliError> {
    let (sequence_name, system) = resolve_system(common.preset.as_deref(), common.rules.as_ref())?;
    Ok(JobConfig {
        command: CommandKind::Sequence,
        sequence_name,
        system: Some(system),
        iters: parse_iters(&common.iters)?,
        sigma: SigmaSpec::None,
        material: MaterialSpec::Ideal,
        spacing: 1.0,
        out: common.out,
        format: parse_format(&common.format),
        emit_rules,
        raw: false,
    })
}

fn physics_config(
    kind: CommandKind,
    common: CommonOpts,
    physics: PhysicsOpts,
) -> Result<JobConfig, CliError> {
    let (sequence_name, system) = resolve_system(common.preset.as_deref(), common.rules.as_ref())?;
    let (material, sigma) = material_and_sigma(&physics, kind)?;
    Ok(JobConfig {
        command: kind,
        sequence_name,
        system: Some(system),
        iters: parse_iters(&common.iters)?,
        sigma,
        material,
        spacing: physics.spacing,
        out: common.out,
        format: parse_format(&common.format),
        emit_rules: None,
        raw: physics.raw,
    })
}

fn greens_check_config(out: Option<PathBuf>, format: String) -> JobConfig {
    JobConfig {
        command: CommandKind::GreensCheck,
        sequence_name: String::new(),
        system: None,
        iters: (0, 0),
        sigma: SigmaSpec::None,
        material: MaterialSpec::Ideal,
        spacing: 1.0,
        out,
        format: parse_format(&format),
        emit_rules: None,
        raw: false,
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let config = match cli.command {
        Command::Sequence { common, emit_rules } => sequence_config(common, emit_rules)?,
        Command::Energy { common, physics } => {
            physics_config(CommandKind::Energy, common, physics)?
        }
        Command::Sweep { common, physics } => physics_config(CommandKind::Sweep, common, physics)?,
        Command::Fit { common, physics } => physics_config(CommandKind::Fit, common, physics)?,
        Command::GreensCheck { out, format } => greens_check_config(out, format),
    };
    run(&config)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let payload = serde_json::json!({
                "error": err.to_string(),
                "kind": err.kind(),
            });
            eprintln!("{payload}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
