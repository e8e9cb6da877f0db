//! Command-line definition and dispatch.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use ybgate::baxterize::{ybe_residual, Kind};
use ybgate::braid::{braid_residual, build_braid, Family};
use ybgate::synth::{synth_general, synth_riv, verify_circuit, SYNTH_TOL};

use crate::input::{Angle, GateSpecFile, Source};
use crate::report::{analyze, AnalyzeOptions};
use crate::sweep::{parse_grid, sweep, to_csv};
use crate::{exit, CliError};

/// Environment variable holding the default Monte-Carlo seed.
pub const SEED_ENV: &str = "GATE_TOOL_SEED";

#[derive(Debug, Parser)]
#[command(name = "gate-tool", version, about = "Braid and Yang-Baxter two-qubit gate analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nonlocal point, entangling power and classification as JSON.
    Analyze(AnalyzeArgs),
    /// Braid and Yang-Baxter residuals; exit 1 above the threshold.
    Verify(VerifyArgs),
    /// Emit a minimal-CNOT circuit.
    Synth(SynthArgs),
    /// Entangling-power landscape of a Yang-Baxter family as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// Gate specification JSON file; stdin when omitted or `-`.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArg,
    /// Seed for the Monte-Carlo entangling power (default from GATE_TOOL_SEED).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Spectral parameters at which the Yang-Baxter equation is probed.
    #[arg(long, default_value = "0.4", allow_hyphen_values = true)]
    pub mu: Angle,
    #[arg(long, default_value = "-0.9", allow_hyphen_values = true)]
    pub nu: Angle,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArg,
    #[arg(long, default_value = "0.4", allow_hyphen_values = true)]
    pub mu: Angle,
    #[arg(long, default_value = "-0.9", allow_hyphen_values = true)]
    pub nu: Angle,
    #[arg(long, default_value_t = 1e-8)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub input: InputArg,
    /// Circuit output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub family: Family,
    #[arg(long, default_value_t = 1)]
    pub kind: u8,
    /// Comma list of angles or `start:stop:n`.
    #[arg(long, allow_hyphen_values = true)]
    pub phi_grid: String,
    /// Spectral parameter grid (`χ` for family IV), same syntax.
    #[arg(long, allow_hyphen_values = true)]
    pub mu_grid: String,
    /// CSV output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn read_spec(arg: &InputArg, stdin: &mut dyn Read) -> Result<GateSpecFile, CliError> {
    let text = match &arg.input {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            s
        }
    };
    GateSpecFile::parse(&text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub braid_residual: Option<f64>,
    pub ybe_residual: Option<f64>,
    pub unitarity_residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthOutput {
    pub cnot_count: usize,
    pub gate_count: usize,
    pub residual: f64,
}

fn seed_from_env() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Input(format!("{SEED_ENV} must be an unsigned integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))?;
    writeln!(out, "{s}")?;
    Ok(())
}

/// Run one command, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, stdin, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze(a) => {
            let gate = read_spec(&a.input, stdin)?.resolve()?;
            let seed = match a.seed {
                Some(s) => Some(s),
                None => seed_from_env()?,
            };
            let opts = AnalyzeOptions { seed, samples: a.samples, mu: a.mu.0, nu: a.nu.0 };
            write_json(out, &analyze(&gate, &opts)?)?;
            Ok(exit::OK)
        }
        Command::Verify(v) => {
            let gate = read_spec(&v.input, stdin)?.resolve()?;
            let (braid, ybe) = match &gate.source {
                Source::Braid(b) => (Some(braid_residual(&build_braid(b))), None),
                Source::Yb(y) => (
                    Some(braid_residual(&build_braid(&y.braid_spec()))),
                    Some(ybe_residual(y, v.mu.0, v.nu.0)?),
                ),
                Source::Matrix | Source::Named(_) => (Some(braid_residual(&gate.matrix)), None),
            };
            let pass = [braid, ybe].iter().flatten().all(|r| *r < v.threshold);
            let report = VerifyOutput {
                braid_residual: braid,
                ybe_residual: ybe,
                unitarity_residual: gate.matrix.unitarity_residual(),
                threshold: v.threshold,
                pass,
            };
            write_json(out, &report)?;
            Ok(if pass { exit::OK } else { exit::VERIFY_FAILED })
        }
        Command::Synth(s) => {
            let gate = read_spec(&s.input, stdin)?.resolve()?;
            let circuit = match &gate.source {
                Source::Yb(y) if y.family() == Family::IV => synth_riv(y.phi()[0], y.spectral()),
                _ => synth_general(&gate.matrix)?,
            };
            let residual = verify_circuit(&circuit, &gate.matrix)?;
            if residual > SYNTH_TOL {
                return Err(CliError::Synthesis(residual));
            }
            let summary = SynthOutput { cnot_count: circuit.cnot_count(), gate_count: circuit.gates.len(), residual };
            match &s.out {
                Some(path) => {
                    std::fs::write(path, circuit.to_text())?;
                    write_json(out, &summary)?;
                }
                None => {
                    out.write_all(circuit.to_text().as_bytes())?;
                    write_json(err, &summary)?;
                }
            }
            Ok(exit::OK)
        }
        Command::Sweep(s) => {
            let kind = Kind::from_number(s.kind)?;
            let phis = parse_grid(&s.phi_grid)?;
            let mus = parse_grid(&s.mu_grid)?;
            let rows = sweep(s.family, kind, &phis, &mus)?;
            let csv = to_csv(s.family, kind, &rows);
            match &s.out {
                Some(path) => std::fs::write(path, csv)?,
                None => out.write_all(csv.as_bytes())?,
            }
            Ok(exit::OK)
        }
    }
}

