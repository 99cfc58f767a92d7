//! `fluxknit` command-line front end.
//!
//! Exit status: 0 on success, 1 for diagnostics (bad input, parse or
//! protocol errors), 2 when an internal invariant or the verify suite fails.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fluxknit::chain::{QubitRef, SweepDirection};
use fluxknit::compiler::{compile_controlled_v, EulerAngles};
use fluxknit::qec::{self, ErrorModel, ErrorSource, LogicalBlock, QecReport};
use fluxknit::rng::SimRng;
use fluxknit::runner::{self, RunOptions, FORMAT_VERSION};
use fluxknit::script::{parse_program, Script};
use fluxknit::sweep::qec_sweep;
use fluxknit::verify::{verify_with, GateSet};
use fluxknit::{Amplitude, Error};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "fluxknit", version, about = "Fluxon-controlled flux-qubit chain simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Ltr,
    Rtl,
}

impl From<Direction> for SweepDirection {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Ltr => SweepDirection::Ltr,
            Direction::Rtl => SweepDirection::Rtl,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a .fknit script and print the result as JSON.
    Run {
        file: PathBuf,
        #[arg(long, env = "FLUXKNIT_SEED", default_value_t = 0)]
        seed: u64,
        /// Include the final register amplitudes.
        #[arg(long)]
        dump: bool,
        /// Include wall-clock time (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Compile a controlled single-qubit unitary to a sweep program for the
    /// chain declared in FILE; prints .fknit text.
    Compile {
        file: PathBuf,
        #[arg(long, value_parser = parse_data)]
        control: usize,
        #[arg(long, value_parser = parse_data)]
        target: usize,
        /// ZYZ angles "δ α θ β" with V = e^{iδ} Rz(α) Ry(θ) Rz(β).
        #[arg(long, allow_hyphen_values = true)]
        unitary: String,
    },
    /// Monte Carlo logical error rate over a list of flip probabilities.
    QecSweep {
        #[arg(long = "p", value_delimiter = ',', required = true, allow_hyphen_values = true)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, env = "FLUXKNIT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        out: TableFormat,
    },
    /// One QEC cycle on a logical block, reported as JSON.
    QecCycle {
        #[arg(long, default_value_t = 3)]
        chain: usize,
        #[arg(long, default_value_t = 1)]
        block: usize,
        /// Data qubits to flip, e.g. `d1,d3`.
        #[arg(long, value_delimiter = ',', value_parser = parse_data, conflicts_with = "p")]
        flips: Vec<usize>,
        /// Flip each block qubit independently with this probability instead.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value = "(1,0)", value_parser = parse_complex)]
        amp0: Amplitude,
        #[arg(long, default_value = "(0,0)", value_parser = parse_complex)]
        amp1: Amplitude,
        #[arg(long, value_enum, default_value = "ltr")]
        direction: Direction,
        #[arg(long, env = "FLUXKNIT_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Run the self-check suite.
    Verify {
        #[arg(long)]
        json: bool,
        /// Corrupt a gate constant before checking (fault-injection fixture).
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
}

fn parse_data(s: &str) -> Result<usize, String> {
    match s.parse::<QubitRef>() {
        Ok(QubitRef::Data(k)) => Ok(k),
        _ => Err(format!("expected a data qubit like d2, found `{s}`")),
    }
}

fn parse_complex(s: &str) -> Result<Amplitude, String> {
    let bad = || format!("expected (re,im), found `{s}`");
    let inner = s.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
    let (re, im) = inner.split_once(',').ok_or_else(bad)?;
    Ok(Amplitude::new(
        re.trim().parse().map_err(|_| bad())?,
        im.trim().parse().map_err(|_| bad())?,
    ))
}

enum Failure {
    Diagnostic(String),
    Invariant(String),
}

impl Failure {
    fn from_core(e: Error) -> Self {
        match e {
            Error::NondeterministicSyndrome(_)
            | Error::NoRecoveryWord(_)
            | Error::SyndromeCollision(..)
            | Error::DressingNotFound => Failure::Invariant(e.to_string()),
            other => Failure::Diagnostic(other.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read_script(path: &Path) -> Result<Script, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Diagnostic(format!("{}: {e}", path.display())))?;
    parse_program(&text).map_err(|d| Failure::Diagnostic(format!("{}: {d}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn cmd_run(file: &Path, seed: u64, dump: bool, timing: bool) -> Outcome {
    let script = read_script(file)?;
    let options = RunOptions {
        seed,
        final_amplitudes: dump,
        timing,
    };
    let result = runner::run(&script, options).map_err(|e| match Failure::from_core(e.source.clone()) {
        Failure::Invariant(_) => Failure::Invariant(format!("{}: {e}", file.display())),
        Failure::Diagnostic(_) => Failure::Diagnostic(format!("{}: {e}", file.display())),
    })?;
    Ok(result.to_json())
}

fn cmd_compile(file: &Path, control: usize, target: usize, unitary: &str) -> Outcome {
    let script = read_script(file)?;
    let angles: Vec<f64> = unitary
        .split_whitespace()
        .map(|t| t.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Diagnostic(format!("--unitary: expected four numbers, found `{unitary}`")))?;
    let [delta, alpha, theta, beta] = angles[..] else {
        return Err(Failure::Diagnostic(format!(
            "--unitary: expected four angles δ α θ β, found {}",
            angles.len()
        )));
    };
    let v = EulerAngles::new(delta, alpha, theta, beta).to_matrix();
    let program = compile_controlled_v(script.num_data(), control, target, &v).map_err(Failure::from_core)?;
    let out = Script::from_program(script.num_data(), script.coupling(), &program)
        .map_err(|d| Failure::Invariant(format!("compiled program does not reparse: {d}")))?;
    Ok(format!(
        "# controlled-V, control d{control}, target d{target}, angles {delta} {alpha} {theta} {beta}\n{out}"
    ))
}

fn cmd_sweep(p: &[f64], trials: u64, seed: u64, out: TableFormat) -> Outcome {
    let table = qec_sweep(p, trials, seed).map_err(Failure::from_core)?;
    Ok(match out {
        TableFormat::Csv => table.to_csv(),
        TableFormat::Json => table.to_json(),
    })
}

#[derive(Serialize)]
struct CycleOutput {
    format: u32,
    #[serde(flatten)]
    report: QecReport,
}

#[allow(clippy::too_many_arguments)]
fn cmd_cycle(
    chain: usize,
    block: usize,
    flips: Vec<usize>,
    p: Option<f64>,
    amp0: Amplitude,
    amp1: Amplitude,
    direction: Direction,
    seed: u64,
) -> Outcome {
    let block = LogicalBlock::new(chain, block).map_err(Failure::from_core)?;
    let errors = match p {
        Some(p) => ErrorSource::Model(ErrorModel::new(p).map_err(Failure::from_core)?),
        None => ErrorSource::Locations(flips),
    };
    let report = qec::qec_cycle(&block, amp0, amp1, &errors, direction.into(), &mut SimRng::new(seed))
        .map_err(Failure::from_core)?;
    Ok(to_json(&CycleOutput {
        format: FORMAT_VERSION,
        report,
    }))
}

fn corrupted(name: &str) -> Result<GateSet, Failure> {
    let mut g = GateSet::standard();
    let m = match name {
        "u0" => &mut g.u0,
        "u1" => &mut g.u1,
        "cns" => &mut g.cns,
        "jp" => &mut g.jp,
        "swap" => &mut g.swap,
        other => return Err(Failure::Diagnostic(format!("unknown gate `{other}`"))),
    };
    m[(0, 0)] = -m[(0, 0)] + Amplitude::new(0.25, 0.0);
    Ok(g)
}

fn cmd_verify(json: bool, corrupt: Option<&str>) -> Outcome {
    let gates = match corrupt {
        Some(name) => corrupted(name)?,
        None => GateSet::standard(),
    };
    let report = verify_with(&gates);
    let text = if json { report.to_json() } else { report.to_text() };
    if report.all_passed {
        Ok(text)
    } else {
        emit(&text);
        let names: Vec<&str> = report.failed().map(|c| c.name).collect();
        Err(Failure::Invariant(format!("failed checks: {}", names.join(", "))))
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
    let _ = out.flush();
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Run {
            file,
            seed,
            dump,
            timing,
        } => cmd_run(&file, seed, dump, timing),
        Command::Compile {
            file,
            control,
            target,
            unitary,
        } => cmd_compile(&file, control, target, &unitary),
        Command::QecSweep { p, trials, seed, out } => cmd_sweep(&p, trials, seed, out),
        Command::QecCycle {
            chain,
            block,
            flips,
            p,
            amp0,
            amp1,
            direction,
            seed,
        } => cmd_cycle(chain, block, flips, p, amp0, amp1, direction, seed),
        Command::Verify { json, corrupt } => cmd_verify(json, corrupt.as_deref()),
    };
    match outcome {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(Failure::Diagnostic(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violation: {msg}");
            ExitCode::from(2)
        }
    }
}
