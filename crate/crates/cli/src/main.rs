//! `reqforge`: check, formalize and monitor structured requirements.
//!
//! Exit status: 0 success, 1 validation or verdict failure, 2 usage error,
//! 3 I/O or schema error.

mod input;

use std::io::{self, BufRead, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use reqforge_core::monitor::{export_oracle_spec, parse_event_line, MonitorError, OracleSpec, SpecMonitor, TraceEvent};
use reqforge_core::semantics::{template_key, TickConfig};
use reqforge_core::store::{metrics, metrics_json, RequirementSet};
use reqforge_service::{formalize, AppState, ServiceConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    Success = 0,
    Failure = 1,
    Usage = 2,
    Io = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Schema(String),
    #[error("{}", .0.join("\n"))]
    Invalid(Vec<String>),
    #[error("{0}")]
    Usage(String),
    /// The reader of stdout went away; not worth reporting.
    #[error("stdout closed")]
    Closed,
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            CliError::Closed
        } else {
            CliError::Io(e.to_string())
        }
    }
}

fn emit(text: impl std::fmt::Display) -> Result<(), CliError> {
    writeln!(io::stdout().lock(), "{text}")?;
    Ok(())
}

impl CliError {
    fn status(&self) -> ExitStatus {
        match self {
            CliError::Io(_) | CliError::Schema(_) => ExitStatus::Io,
            CliError::Invalid(_) => ExitStatus::Failure,
            CliError::Usage(_) => ExitStatus::Usage,
            CliError::Closed => ExitStatus::Success,
        }
    }
}

#[derive(Parser)]
#[command(name = "reqforge", version, about = "Structured requirements: check, formalize, monitor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Future,
    Past,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricsFormat {
    Table,
    Json,
    Csv,
}

#[derive(clap::Args)]
struct Semantics {
    /// Variable that carries the current mode
    #[arg(long)]
    mode_var: Option<String>,
    /// Length of one tick in milliseconds
    #[arg(long, env = "REQFORGE_TICK_MS", default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    tick_ms: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Parse every requirement and print its template key
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Print temporal formulas
    Formalize {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "both")]
        target: Target,
        /// Print one JSON array of formalizations
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        sem: Semantics,
    },
    /// Run an oracle spec over an NDJSON trace (`-` reads stdin)
    Monitor {
        spec: PathBuf,
        trace: String,
        /// Print every verdict as events arrive, not only the final ones
        #[arg(long)]
        stream: bool,
    },
    /// Count template options
    Metrics {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: MetricsFormat,
    },
    /// Export an oracle spec with one past-time monitor per requirement
    Oracle {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        sem: Semantics,
    },
    /// Serve the HTTP API
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Requirement files to preload
        #[arg(long)]
        corpus: Vec<PathBuf>,
        /// Where saved sets are written
        #[arg(long, default_value = ".")]
        save_dir: PathBuf,
        /// Idle seconds before a simulation session expires
        #[arg(long, default_value_t = 1800)]
        session_idle_secs: u64,
        /// Allowed CORS origin; repeatable, none allows any
        #[arg(long)]
        cors_origin: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match run(cli.command) {
        Ok(s) => s,
        Err(CliError::Closed) => ExitStatus::Success,
        Err(e) => {
            eprintln!("error: {e}");
            e.status()
        }
    };
    ExitCode::from(status as u8)
}

fn run(cmd: Command) -> Result<ExitStatus, CliError> {
    match cmd {
        Command::Check { paths } => check(&paths),
        Command::Formalize {
            paths,
            target,
            json,
            sem,
        } => formalize_cmd(&paths, target, json, &sem),
        Command::Monitor { spec, trace, stream } => monitor(&spec, &trace, stream),
        Command::Metrics { paths, format } => {
            let report = metrics(&input::load_all(&paths)?);
            let out = match format {
                MetricsFormat::Table => report.to_table(),
                MetricsFormat::Json => metrics_json(&report),
                MetricsFormat::Csv => report.to_csv(),
            };
            write!(io::stdout().lock(), "{out}")?;
            Ok(ExitStatus::Success)
        }
        Command::Oracle { paths, sem } => oracle(&paths, &sem),
        Command::Serve {
            addr,
            corpus,
            save_dir,
            session_idle_secs,
            cors_origin,
        } => {
            let config = ServiceConfig {
                save_dir,
                session_idle: Duration::from_secs(session_idle_secs),
                cors_origins: cors_origin,
            };
            serve(addr, &corpus, config)
        }
    }
}

/// Every file is checked even after a failure; the worst status wins.
fn check(paths: &[PathBuf]) -> Result<ExitStatus, CliError> {
    let mut worst = ExitStatus::Success;
    for p in paths {
        match input::load(p) {
            Ok(set) => {
                for r in set.iter() {
                    emit(format_args!("{} {}", r.id, template_key(r)))?;
                }
            }
            Err(e) => {
                eprintln!("{e}");
                worst = worst.max(e.status());
            }
        }
    }
    Ok(worst)
}

fn with_mode_var(mut set: RequirementSet, sem: &Semantics) -> RequirementSet {
    if let Some(v) = &sem.mode_var {
        set.modes.mode_variable = v.clone();
    }
    set
}

fn ticks(sem: &Semantics) -> TickConfig {
    TickConfig::new(sem.tick_ms).expect("clap keeps the period positive")
}

fn formalize_cmd(paths: &[PathBuf], target: Target, json: bool, sem: &Semantics) -> Result<ExitStatus, CliError> {
    let set = with_mode_var(input::load_all(paths)?, sem);
    let ticks = ticks(sem);
    let all: Vec<_> = set.iter().map(|r| formalize(r, &set.modes, &ticks)).collect();
    let (want_future, want_past) = match target {
        Target::Future => (true, false),
        Target::Past => (false, true),
        Target::Both => (true, true),
    };
    let mut unsupported = Vec::new();
    for f in &all {
        if (want_future && f.future_ltl.is_none()) || (want_past && f.past_ltl.is_none()) {
            unsupported.push(f.requirement.id.clone());
        }
    }
    if json {
        emit(serde_json::to_string_pretty(&all).expect("formalizations serialize"))?;
    } else {
        let line = |name: &str, ok: &Option<String>, why: &Option<String>| match (ok, why) {
            (Some(f), _) => format!("  {name}: {f}"),
            (None, Some(why)) => format!("  {name}: unsupported: {why}"),
            (None, None) => unreachable!("one of formula or reason is set"),
        };
        for f in &all {
            emit(format_args!("{} {}", f.requirement.id, f.template_key))?;
            if want_future {
                emit(line("future", &f.future_ltl, &f.future_ltl_unsupported))?;
            }
            if want_past {
                emit(line("past", &f.past_ltl, &f.past_ltl_unsupported))?;
            }
        }
    }
    if unsupported.is_empty() {
        Ok(ExitStatus::Success)
    } else {
        eprintln!("unsupported: {}", unsupported.join(", "));
        Ok(ExitStatus::Failure)
    }
}

fn oracle(paths: &[PathBuf], sem: &Semantics) -> Result<ExitStatus, CliError> {
    let set = with_mode_var(input::load_all(paths)?, sem);
    let reqs: Vec<_> = set.iter().cloned().collect();
    match export_oracle_spec(&reqs, &set.modes, &ticks(sem)) {
        Ok(spec) => {
            write!(io::stdout().lock(), "{}", spec.to_json())?;
            Ok(ExitStatus::Success)
        }
        Err(e) => Err(CliError::Invalid(vec![e.to_string()])),
    }
}

fn monitor(spec_path: &Path, trace: &str, stream: bool) -> Result<ExitStatus, CliError> {
    let shown = spec_path.display();
    let text = std::fs::read_to_string(spec_path).map_err(|e| CliError::Io(format!("{shown}: {e}")))?;
    let spec = OracleSpec::from_json(&text).map_err(|e| CliError::Schema(format!("{shown}: {e}")))?;
    let mut mon = SpecMonitor::new(&spec).map_err(|e| CliError::Schema(format!("{shown}: {e}")))?;

    let reader: Box<dyn BufRead> = if trace == "-" {
        Box::new(io::stdin().lock())
    } else {
        let f = std::fs::File::open(trace).map_err(|e| CliError::Io(format!("{trace}: {e}")))?;
        Box::new(io::BufReader::new(f))
    };
    let trace_err = |n: usize, msg: String| CliError::Schema(format!("{trace}:{n}: {msg}"));
    let mut out = io::stdout().lock();
    let mut last_tick = None;
    let mut ended = false;
    for (i, line) in reader.lines().enumerate() {
        let n = i + 1;
        let line = line.map_err(|e| CliError::Io(format!("{trace}:{n}: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        if ended {
            return Err(trace_err(n, "event after END".into()));
        }
        let e = parse_event_line(&line, n).map_err(|e| trace_err(n, e.to_string()))?;
        if let (Some(t), Some(prev)) = (e.tick(), last_tick) {
            if t <= prev {
                return Err(trace_err(n, format!("tick {t} does not increase on {prev}")));
            }
        }
        last_tick = e.tick().or(last_tick);
        ended = matches!(e, TraceEvent::End);
        let records = mon.step(&e).map_err(|err| match err {
            MonitorError::MissingVariable(v) => trace_err(n, format!("MissingVariable: `{v}`")),
            other => trace_err(n, other.to_string()),
        })?;
        if stream {
            for r in &records {
                writeln!(out, "{}", serde_json::to_string(r).expect("record serializes"))?;
            }
            out.flush()?;
        }
    }
    if !stream {
        for r in mon.verdicts() {
            writeln!(out, "{}", serde_json::to_string(&r).expect("record serializes"))?;
        }
    }
    Ok(if mon.all_true() { ExitStatus::Success } else { ExitStatus::Failure })
}

fn serve(addr: SocketAddr, corpus: &[PathBuf], config: ServiceConfig) -> Result<ExitStatus, CliError> {
    let state = AppState::new(config);
    for p in corpus {
        state.insert_set(input::load(p)?);
    }
    let rt = tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    rt.block_on(async {
        let listener = reqforge_service::bind(addr)
            .await
            .map_err(|e| CliError::Io(format!("cannot bind {addr}: {e}")))?;
        let local = listener.local_addr().map_err(|e| CliError::Io(e.to_string()))?;
        eprintln!("listening on http://{local}");
        reqforge_service::serve(listener, state)
            .await
            .map_err(|e| CliError::Io(e.to_string()))
    })?;
    Ok(ExitStatus::Success)
}
