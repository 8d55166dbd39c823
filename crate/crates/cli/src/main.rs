//! `nefsphere` command-line interface.
//!
//! Exit codes: 0 when every check passes, 2 for invalid input, 3 when a
//! check fails, 4 for internal errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nefsphere::pipeline::{self, InputSpec, Options, Stage, Verify, WeightSpec};
use nefsphere::Error;

#[derive(Parser)]
#[command(name = "nefsphere", version, about = "Spheres, tropical complexes and monodromy of nef-partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the input is a nef-partition and test irreducibility.
    Validate(Common),
    /// Compute the dual nef-partition.
    Dualize(Common),
    /// Build the subdivisions, transversal posets and the sphere complex.
    Complex(Common),
    /// Build the tropical complexes of both sides.
    Tropical(Common),
    /// Compute the discriminant and its complement.
    Discriminant(Common),
    /// Compute primary loops and the monodromy groups.
    Monodromy(Common),
    /// Run every stage.
    Report(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    Fast,
    Full,
}

#[derive(Args)]
struct Common {
    /// Input JSON file.
    input: PathBuf,
    /// Also run the role-swapped pipeline and the duality check.
    #[arg(long)]
    dual: bool,
    /// Weight function on the M side: a JSON file or `all-ones`.
    #[arg(long, value_name = "FILE|all-ones")]
    omega: Option<String>,
    /// Weight function on the N side: a JSON file or `all-ones`.
    #[arg(long, value_name = "FILE|all-ones")]
    nu: Option<String>,
    /// Write Σ, ∇_ω, D and the loop data as JSON into this directory.
    #[arg(long, value_name = "DIR")]
    emit_complexes: Option<PathBuf>,
    #[arg(long, value_enum)]
    verify: Option<VerifyArg>,
    /// Reject reducible nef-partitions.
    #[arg(long)]
    require_irreducible: bool,
}

enum Failure {
    Input(String),
    Falsified(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(_)
            | Error::InvalidNefPartition(_)
            | Error::Weight(_)
            | Error::NotCentral
            | Error::EmptyPointSet
            | Error::DimensionMismatch
            | Error::PolarUndefined
            | Error::OriginNotInterior => Failure::Input(e.to_string()),
            Error::Falsified(_) => Failure::Falsified(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn weight_arg(arg: &str) -> Result<WeightSpec, Failure> {
    if arg == "all-ones" || arg == "all_ones" {
        return Ok(WeightSpec::Named("all_ones".into()));
    }
    let text = fs::read_to_string(arg).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{arg}: {e}")))
}

fn load(args: &Common) -> Result<(InputSpec, Options), Failure> {
    let text = fs::read_to_string(&args.input).map_err(|e| Failure::Input(format!("{}: {e}", args.input.display())))?;
    let mut spec = InputSpec::from_json(&text)?;
    if let Some(w) = &args.omega {
        spec.omega = weight_arg(w)?;
    }
    if let Some(w) = &args.nu {
        spec.nu = weight_arg(w)?;
    }
    let mut opts = Options::from_flags(&spec.flags);
    opts.dual |= args.dual;
    opts.require_irreducible |= args.require_irreducible;
    if let Some(v) = args.verify {
        opts.verify = match v {
            VerifyArg::Fast => Verify::Fast,
            VerifyArg::Full => Verify::Full,
        };
    }
    Ok((spec, opts))
}

fn emit(dir: &Path, art: &pipeline::Artifacts) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Internal(format!("{}: {e}", dir.display())))?;
    for (name, value) in pipeline::export_complexes(art) {
        let path = dir.join(name);
        let mut text = serde_json::to_string_pretty(&value).expect("json");
        text.push('\n');
        fs::write(&path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn execute(stage: Stage, args: &Common) -> Result<(), Failure> {
    let (spec, opts) = load(args)?;
    if stage == Stage::Validate {
        // an invalid partition still gets its check list on stdout
        let (_, section, _) = pipeline::validation_section(&spec)?;
        if !section.valid {
            println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "validation": section })).expect("json"));
            return Err(Failure::Input("not a valid nef-partition".into()));
        }
    }
    let (report, art) = pipeline::run(&spec, opts, stage)?;
    print!("{}", report.to_json());
    if let (Some(dir), Some(art)) = (&args.emit_complexes, &art) {
        emit(dir, art)?;
    }
    let failures = report.failures();
    if failures.is_empty() {
        Ok(())
    } else {
        let names: Vec<String> = failures.iter().map(|c| format!("{}/{}", c.stage, c.name)).collect();
        Err(Failure::Falsified(format!("failed checks: {}", names.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stage, args) = match &cli.command {
        Command::Validate(a) => (Stage::Validate, a),
        Command::Dualize(a) => (Stage::Dualize, a),
        Command::Complex(a) => (Stage::Complex, a),
        Command::Tropical(a) => (Stage::Tropical, a),
        Command::Discriminant(a) => (Stage::Discriminant, a),
        Command::Monodromy(a) => (Stage::Monodromy, a),
        Command::Report(a) => (Stage::Report, a),
    };
    match execute(stage, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Falsified(msg)) => {
            eprintln!("falsified: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(4)
        }
    }
}
