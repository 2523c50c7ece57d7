//! `racah`: build DAHA and Racah modules, verify relations, compute submodule
//! lattices and run randomized sweeps.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use racah_core::algebra::{check_racah_relations, verify_h_module};
use racah_core::catalog::{build_h, build_racah, irreducibility_criterion};
use racah_core::lattice::{
    compare_with_prediction, predicted_lattice, submodule_lattice, LatticeError, LatticeReport,
};
use racah_core::sweep::{run_sweep, SweepConfig};
use racah_core::{Family, HRep, ModuleSpec, RacahRep, Twist};

#[derive(Parser, Debug)]
#[command(
    name = "racah",
    version,
    about = "Exact computations with DAHA and Racah algebra modules"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file.
    #[arg(short = 'o', long = "out", global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a module from a spec such as `E:d=3,a=2,b=3,c=7,eps=+-` and write it as JSON.
    Build { spec: String },
    /// Check the defining relations of a module stored as JSON.
    Verify { path: PathBuf },
    /// Compute the Racah submodule lattice of an E or O module.
    Lattice {
        spec: String,
        /// Compare with the predicted lattice and fail on any difference.
        #[arg(long)]
        expect: bool,
    },
    /// Run a deterministic randomized sweep.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "E,O")]
    families: Vec<Family>,
    /// Twists for family E, e.g. `--twists=++,--`.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "++,+-,-+,--"
    )]
    twists: Vec<Twist>,
    #[arg(long = "dmax", default_value_t = 9)]
    d_max: u32,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 6)]
    denominator_bound: i64,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Reducible(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Reducible(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Catalog(_)
            | LatticeError::NotAnHModule
            | LatticeError::NoPrediction(_) => CliError::Usage(e.to_string()),
            LatticeError::Reducible(_) => CliError::Reducible(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))
}

/// Writes to the output file when one was given, otherwise to stdout.
fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n"))
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => match writeln!(io::stdout(), "{text}") {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                Err(CliError::Internal(e.to_string()))
            }
            _ => Ok(()),
        },
    }
}

fn parse_spec(s: &str) -> Result<ModuleSpec, CliError> {
    s.parse()
        .map_err(|e: racah_core::catalog::CatalogError| CliError::Usage(e.to_string()))
}

fn cmd_build(cli: &Cli, spec: &str) -> Result<(), CliError> {
    let spec = parse_spec(spec)?;
    let json = if spec.family == Family::R {
        to_json(&build_racah(&spec).map_err(|e| CliError::Usage(e.to_string()))?)?
    } else {
        to_json(&build_h(&spec).map_err(|e| CliError::Usage(e.to_string()))?)?
    };
    emit(cli.out.as_deref(), &json)?;
    if let Some(p) = &cli.out {
        eprintln!("wrote {spec} ({0}x{0}) to {1}", spec.dim(), p.display());
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, path: &Path) -> Result<(), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let malformed = |e: serde_json::Error| CliError::Usage(format!("{}: {e}", path.display()));
    let report = if value.get("t0").is_some() {
        let h: HRep = serde_json::from_value(value).map_err(malformed)?;
        verify_h_module(&h)
    } else if value.get("A").is_some() {
        let r: RacahRep = serde_json::from_value(value).map_err(malformed)?;
        check_racah_relations(&r)
    } else {
        return Err(CliError::Usage(format!(
            "{}: expected an H module (t0, t1, t0v, t1v) or a Racah module (A, B, C)",
            path.display()
        )));
    };
    emit(cli.out.as_deref(), &to_json(&report)?)?;
    if report.ok {
        Ok(())
    } else {
        let names: Vec<&str> = report.violations.iter().map(|v| v.name.as_str()).collect();
        Err(CliError::Verification(format!(
            "relations violated: {}",
            names.join(", ")
        )))
    }
}

fn describe(report: &LatticeReport) -> String {
    let mut lines = vec![format!(
        "shape {}, t0 {}diagonalizable",
        report.shape,
        if report.t0_diagonalizable { "" } else { "not " }
    )];
    for (i, n) in report.nodes.iter().enumerate() {
        let label = n
            .eigenvalue
            .as_ref()
            .map(|t| format!(" V({t})"))
            .unwrap_or_default();
        lines.push(format!("  node {i}: dim {}{label}", n.dim));
    }
    for s in &report.subquotients {
        let p = &s.tag.params;
        lines.push(format!(
            "  {} / {}: R_{}({}, {}, {}){}",
            s.node,
            s.lower,
            p.d,
            p.a,
            p.b,
            p.c,
            if s.tag.verified { "" } else { " (unverified)" }
        ));
    }
    lines.join("\n")
}

fn cmd_lattice(cli: &Cli, spec: &str, expect: bool) -> Result<(), CliError> {
    let spec = parse_spec(spec)?;
    if spec.family == Family::R {
        return Err(CliError::Usage(
            "the lattice command requires family E or O".into(),
        ));
    }
    if !irreducibility_criterion(&spec) {
        return Err(CliError::Reducible(format!(
            "{spec} is reducible as an H-module"
        )));
    }
    let h = build_h(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = submodule_lattice(&h)?;
    let text = if cli.json {
        to_json(&report)?
    } else {
        describe(&report)
    };
    emit(cli.out.as_deref(), &text)?;
    if expect {
        let predicted = predicted_lattice(&spec)?;
        let cmp = compare_with_prediction(&report, &predicted);
        if !cmp.matches {
            return Err(CliError::Verification(format!(
                "lattice differs from prediction: {}",
                cmp.mismatches.join("; ")
            )));
        }
        if !report.all_subquotients_verified() {
            return Err(CliError::Verification(
                "a subquotient tag did not verify".into(),
            ));
        }
        eprintln!("matches predicted {} lattice", predicted.shape);
    }
    Ok(())
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> Result<(), CliError> {
    let cfg = SweepConfig {
        families: args.families.clone(),
        twists: args.twists.clone(),
        d_max: args.d_max,
        trials: args.trials,
        seed: cli.seed,
        denominator_bound: args.denominator_bound,
    };
    let summary = run_sweep(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    for s in &summary.skipped_trials {
        eprintln!("skipped trial {}: {}", s.trial, s.reason);
    }
    emit(cli.out.as_deref(), &to_json(&summary)?)?;
    if summary.ok() {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{} of {} trials failed",
            summary.failures.len(),
            summary.trials
        )))
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Build { spec } => cmd_build(cli, spec),
        Command::Verify { path } => cmd_verify(cli, path),
        Command::Lattice { spec, expect } => cmd_lattice(cli, spec, *expect),
        Command::Sweep(args) => cmd_sweep(cli, args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
