//! `gridthresh`: exact counts, verification suites and tables for threshold
//! and 2-threshold functions on integer grids.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use gridthresh::census::DEFAULT_CENSUS_GUARD;

use crate::output::Table;

const EXIT_VIOLATION: u8 = 1;
const EXIT_GUARD: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser, Debug)]
#[command(name = "gridthresh", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact t, q, p and t2 for one grid, with predicted main terms.
    Count(CountArgs),
    /// Run the exhaustive and seeded property suites; exit 1 on a violation.
    Verify(VerifyArgs),
    /// Emit a convergence, census, lemma, aggregate or bound table.
    Table(TableArgs),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Cap on (u+1)(v+1) for each rectangle census.
    #[arg(long, default_value_t = DEFAULT_CENSUS_GUARD, value_parser = clap::value_parser!(u64).range(1..))]
    census_guard: u64,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, env = "GRIDTHRESH_THREADS", value_parser = clap::value_parser!(u64).range(1..1025))]
    threads: Option<u64>,
    /// Write the table here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for every randomized sample.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Exact counts to compute; a count whose guard is exceeded exits with 2.
    #[arg(long, value_delimiter = ',', default_value = "t,q,p,t2")]
    fields: Vec<Field>,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Field {
    T,
    Q,
    P,
    T2,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Largest grid width covered by the exhaustive suites.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    /// Largest grid height covered by the exhaustive suites.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Random pairs and random triangles drawn per sampled suite.
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, hide = true, value_enum)]
    inject_fault: Option<Fault>,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    Census,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Sizes, comma separated: `8` for 8x8 or `4x6`.
    #[arg(long, value_parser = parse_sweep)]
    sweep: Option<Sweep>,
    /// Range of k for the bound table, `a..b` inclusive.
    #[arg(long, value_parser = parse_k_range)]
    bounds_k: Option<(u32, u32)>,
    /// Grid width for census tables and bound main terms.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    m: Option<u32>,
    /// Grid height for census tables and bound main terms.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: Option<u32>,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Convergence,
    Census,
    Lemmas,
    Aggregate,
    Bounds,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep(pub Vec<(u32, u32)>);

fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let mut sizes = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let parse = |x: &str| match x.trim().parse::<u32>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(format!("bad size `{part}`")),
        };
        let size = match part.split_once('x') {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let v = parse(part)?;
                (v, v)
            }
        };
        sizes.push(size);
    }
    if sizes.is_empty() {
        return Err("sweep lists no sizes".into());
    }
    Ok(Sweep(sizes))
}

fn parse_k_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a: u32 = a.trim().parse().map_err(|_| format!("bad bound `{a}`"))?;
    let b: u32 = b.trim().parse().map_err(|_| format!("bad bound `{b}`"))?;
    if a == 0 || a > b {
        return Err(format!("empty or invalid range {a}..{b}"));
    }
    if b > 1000 {
        return Err("k above 1000".into());
    }
    Ok((a, b))
}

/// Failure of a command, mapped onto the exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Guard(gridthresh::Error),
    Io(String),
}

impl From<gridthresh::Error> for Failure {
    fn from(e: gridthresh::Error) -> Self {
        match e {
            gridthresh::Error::ResourceLimit { .. } => Failure::Guard(e),
            gridthresh::Error::InvalidArgument(msg) => Failure::Usage(msg),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn emit(table: &Table, common: &Common) -> Result<(), Failure> {
    let sink: Box<dyn Write> = match &common.output {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match common.format {
        Format::Csv => table.write_csv(&mut sink)?,
        Format::Json => table.write_json(&mut sink)?,
    }
    sink.flush()?;
    Ok(())
}

fn setup_threads(common: &Common) -> Result<(), Failure> {
    if let Some(t) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Count(a) => {
            setup_threads(&a.common)?;
            let table = commands::count(a.m, a.n, &a.fields, a.common.census_guard)?;
            emit(&table, &a.common)?;
            Ok(true)
        }
        Command::Verify(a) => {
            setup_threads(&a.common)?;
            let report = commands::verify(&commands::VerifyConfig {
                max_m: a.m,
                max_n: a.n,
                samples: a.samples,
                seed: a.common.seed,
                census_guard: a.common.census_guard,
                fault: a.inject_fault,
            })?;
            emit(&report.table, &a.common)?;
            for f in &report.failures {
                eprintln!("violation: {f}");
            }
            Ok(report.failures.is_empty())
        }
        Command::Table(a) => {
            setup_threads(&a.common)?;
            let kind = match (a.kind, a.bounds_k) {
                (Some(k), _) => k,
                (None, Some(_)) => Kind::Bounds,
                (None, None) => Kind::Convergence,
            };
            let table = commands::table(&commands::TableConfig {
                kind,
                sweep: a.sweep.map(|s| s.0),
                bounds_k: a.bounds_k,
                m: a.m,
                n: a.n,
                census_guard: a.common.census_guard,
            })?;
            emit(&table, &a.common)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VIOLATION),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Guard(e)) => {
            let body = match &e {
                gridthresh::Error::ResourceLimit {
                    what,
                    requested,
                    limit,
                } => serde_json::json!({
                    "error": "resource_limit",
                    "what": what,
                    "requested": requested,
                    "limit": limit,
                    "message": e.to_string(),
                }),
                other => serde_json::json!({ "error": "resource_limit", "message": other.to_string() }),
            };
            eprintln!("{body}");
            ExitCode::from(EXIT_GUARD)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
