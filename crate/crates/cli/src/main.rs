use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clonecheck_core::frames::{audit, Event, EventLabel, ScenarioReport, Verdict};
use clonecheck_core::nocloning::run_batch;
use clonecheck_core::states::DensityOperator;
use clonecheck_core::teleport::{run_teleport, teleport_channel, TeleportReport};
use clonecheck_core::Execution;
use serde::Serialize;

mod document;
mod render;

use document::{named_state, read_channel, read_state};

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_BOUNDARY: u8 = 2;

const BOUNDARY_NOTE: &str =
    "boundary case: the input is the maximally mixed state, the only input for which \
(T rho)_C equals rho_C; teleportation still reproduces it on B";

#[derive(Parser, Debug)]
#[command(
    name = "clonecheck",
    version,
    about = "Teleportation, no-cloning and frame-ordering checks"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized commands; required by `noclone`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct StateArgs {
    /// zero, one, plus, minus, plus_i, minus_i or mixed.
    #[arg(long, conflicts_with = "state_file")]
    state: Option<String>,

    /// JSON state document.
    #[arg(long)]
    state_file: Option<PathBuf>,
}

impl StateArgs {
    fn load(&self) -> Result<DensityOperator, String> {
        match (&self.state, &self.state_file) {
            (Some(name), None) => named_state(name),
            (None, Some(path)) => read_state(path),
            _ => Err("give exactly one of --state or --state-file".into()),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Teleport a qubit state and report both output marginals.
    Teleport {
        #[command(flatten)]
        state: StateArgs,
    },
    /// Search witnesses against cloning for random structured channels.
    Noclone {
        #[arg(long)]
        instances: usize,
        /// Haar-random probes added to the six Pauli eigenstates.
        #[arg(long, default_value_t = 16)]
        random_probes: usize,
    },
    /// Audit the frame-ordering argument for a state and an event pair.
    Audit {
        #[command(flatten)]
        state: StateArgs,
        /// Event I as `t,x`.
        #[arg(long = "eI", value_name = "T,X", allow_hyphen_values = true)]
        event_i: Option<String>,
        /// Event II as `t,x`.
        #[arg(long = "eII", value_name = "T,X", allow_hyphen_values = true)]
        event_ii: Option<String>,
    },
    /// Certify a structured Kraus channel document.
    ChannelCheck {
        /// JSON channel document.
        file: PathBuf,
    },
    /// Print the teleportation channel as a channel document.
    ExportChannel,
}

#[derive(Serialize)]
struct TeleportOutput<'a> {
    #[serde(flatten)]
    report: &'a TeleportReport,
    expected_outcome: bool,
    boundary_case: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn emit<T: Serialize>(
    format: Format,
    value: &T,
    text: impl FnOnce(&T) -> String,
) -> Result<(), String> {
    match format {
        Format::Json => {
            let s = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
            println!("{s}");
        }
        Format::Text => print!("{}", text(value)),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8, String> {
    match &cli.command {
        Command::Teleport { state } => {
            let rho = state.load()?;
            let report = run_teleport(&rho).map_err(|e| e.to_string())?;
            let out = TeleportOutput {
                report: &report,
                expected_outcome: report.expected_outcome(),
                boundary_case: report.boundary_case(),
                note: report.boundary_case().then_some(BOUNDARY_NOTE),
            };
            emit(cli.format, &out, |o| {
                let mut s = render::teleport(o.report);
                if let Some(n) = o.note {
                    s.push_str(&format!("note: {n}\n"));
                }
                s
            })?;
            Ok(if report.expected_outcome() {
                EXIT_OK
            } else if report.boundary_case() {
                EXIT_BOUNDARY
            } else {
                EXIT_INPUT
            })
        }
        Command::Noclone {
            instances,
            random_probes,
        } => {
            if *instances == 0 {
                return Err("--instances must be at least 1".into());
            }
            let seed = cli.seed.ok_or("noclone requires an explicit --seed")?;
            let summary = run_batch(*instances, seed, *random_probes, Execution::default())
                .map_err(|e| e.to_string())?;
            emit(cli.format, &summary, render::noclone)?;
            Ok(if summary.all_fail_to_clone {
                EXIT_OK
            } else {
                EXIT_BOUNDARY
            })
        }
        Command::Audit {
            state,
            event_i,
            event_ii,
        } => {
            let rho = state.load()?;
            let (default_i, default_ii) = Event::default_pair();
            let e_i = match event_i {
                Some(s) => parse_event(EventLabel::EventI, s)?,
                None => default_i,
            };
            let e_ii = match event_ii {
                Some(s) => parse_event(EventLabel::EventII, s)?,
                None => default_ii,
            };
            let report: ScenarioReport = audit(&rho, &e_i, &e_ii).map_err(|e| e.to_string())?;
            emit(cli.format, &report, render::audit)?;
            Ok(match report.verdict {
                Verdict::NoContradiction => EXIT_OK,
                Verdict::ForbiddenPattern => EXIT_BOUNDARY,
            })
        }
        Command::ChannelCheck { file } => {
            let doc = read_channel(file)?;
            let channel = doc
                .into_channel()
                .map_err(|e| format!("channel rejected: {e}"))?;
            let cert = channel.certify().map_err(|e| e.to_string())?;
            emit(cli.format, &cert, render::certificate)?;
            Ok(if cert.completely_positive {
                EXIT_OK
            } else {
                EXIT_BOUNDARY
            })
        }
        Command::ExportChannel => {
            let doc = teleport_channel()
                .map_err(|e| e.to_string())?
                .to_document()
                .ok_or("teleportation channel has no structured form")?;
            let s = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
            println!("{s}");
            Ok(EXIT_OK)
        }
    }
}

fn parse_event(label: EventLabel, s: &str) -> Result<Event, String> {
    let (t, x) = s
        .split_once(',')
        .ok_or_else(|| format!("event {s:?} must be written t,x"))?;
    let t: f64 = t
        .trim()
        .parse()
        .map_err(|_| format!("bad time coordinate in {s:?}"))?;
    let x: f64 = x
        .trim()
        .parse()
        .map_err(|_| format!("bad position coordinate in {s:?}"))?;
    Event::new(label, t, x).map_err(|e| e.to_string())
}
