//! `hperm`: generate Sylvester-Hadamard matrices, compute exact permanents,
//! run verification campaigns and benchmark the engines.
//!
//! Exit codes: `0` success, `1` at least one verification failed, `2`
//! usage, parse, or I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hadamard_permanent::matrix::{sylvester, IntMatrix};
use hadamard_permanent::text::{format_matrix, parse_matrix, parse_sign_matrix};
use hadamard_permanent::verify::{Campaign, Verifier, VerifyReport};
use hadamard_permanent::{EngineChoice, Error, PermanentEngine, Workers};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hperm",
    version,
    about = "Exact permanents of Sylvester-Hadamard matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the Sylvester-Hadamard matrix of order N in the matrix text format.
    Gen {
        #[arg(long = "n")]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the exact permanent of a matrix.
    Per(PerArgs),
    /// Run the verification checks and emit one JSON report per line.
    Verify {
        #[arg(long)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        /// Add minor-equality and expansion-bound checks and allow n = 5.
        #[arg(long)]
        deep: bool,
        #[arg(long, value_parser = parse_engine_or_auto, default_value = "auto")]
        engine: EngineArg,
        #[arg(long, value_parser = parse_workers, default_value = "auto")]
        threads: Workers,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time each engine on H_n: one warm-up run, then the median of three.
    Bench {
        #[arg(long)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        /// Comma-separated engine names; defaults to every engine.
        #[arg(long, value_delimiter = ',', value_parser = parse_engine)]
        engines: Vec<EngineChoice>,
        #[arg(long, value_parser = parse_workers, default_value = "auto")]
        threads: Workers,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct Source {
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    sylvester: Option<u32>,
}

#[derive(Debug, Args)]
pub struct PerArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_parser = parse_engine_or_auto, default_value = "auto")]
    engine: EngineArg,
    #[arg(long, value_parser = parse_workers, default_value = "auto")]
    threads: Workers,
}

/// An explicit engine, or `auto` for the cheapest one valid at the size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineArg {
    Auto,
    Engine(EngineChoice),
}

fn parse_engine(s: &str) -> Result<EngineChoice, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_engine_or_auto(s: &str) -> Result<EngineArg, String> {
    if s == "auto" {
        Ok(EngineArg::Auto)
    } else {
        parse_engine(s).map(EngineArg::Engine)
    }
}

fn parse_workers(s: &str) -> Result<Workers, String> {
    if s == "auto" {
        return Ok(Workers::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(Workers::fixed(n)),
        _ => Err(format!(
            "expected a positive integer or \"auto\", got {s:?}"
        )),
    }
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn io_error(path: Option<&Path>, e: io::Error) -> Failure {
    match path {
        Some(p) => Failure::Io(format!("{}: {e}", p.display())),
        None => Failure::Io(e.to_string()),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Gen { n, out: path } => {
            let text = format_matrix(sylvester(n)?.as_int());
            write_output(path.as_deref(), text.as_bytes(), out)?;
            Ok(EXIT_OK)
        }
        Command::Per(args) => per(args, out),
        Command::Verify {
            n_min,
            n_max,
            deep,
            engine,
            threads,
            out: path,
        } => {
            let campaign = Campaign {
                n_min,
                n_max,
                deep,
                engine: match engine {
                    EngineArg::Auto => None,
                    EngineArg::Engine(e) => Some(e),
                },
            };
            campaign.validate()?;
            let mut file;
            let sink: &mut dyn Write = match &path {
                Some(p) => {
                    file = fs::File::create(p).map_err(|e| io_error(Some(p), e))?;
                    &mut file
                }
                None => out,
            };
            let verifier = Verifier::new(PermanentEngine::with_workers(threads));
            let mut write_failed = None;
            let reports = verifier.run_campaign(&campaign, |r| {
                if let Err(e) = writeln!(sink, "{}", r.to_json_line()).and_then(|_| sink.flush()) {
                    write_failed = Some(e.to_string());
                    return Err(Error::Argument("output closed".into()));
                }
                Ok(())
            });
            if let Some(e) = write_failed {
                return Err(Failure::Io(e));
            }
            let reports = reports?;
            let failed = reports.iter().filter(|r| r.is_failure()).count();
            let _ = writeln!(err, "{} reports, {failed} failed", reports.len());
            Ok(campaign_exit_code(&reports))
        }
        Command::Bench {
            n_min,
            n_max,
            engines,
            threads,
        } => bench(n_min, n_max, engines, threads, out),
    }
}

/// `1` if any report is a genuine failure, else `0`. Not-applicable and
/// expected-fail rows never fail a run.
pub fn campaign_exit_code(reports: &[VerifyReport]) -> i32 {
    if reports.iter().any(VerifyReport::is_failure) {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8], out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| io_error(Some(p), e)),
        None => out.write_all(bytes).map_err(|e| io_error(None, e)),
    }
}

fn read_matrix(path: &Path, sign_only: bool) -> Result<IntMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_error(Some(path), e))?;
    let parsed = if sign_only {
        parse_sign_matrix(&text).map(|m| m.into_int())
    } else {
        parse_matrix(&text)
    };
    parsed.map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn per(args: PerArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let engine = PermanentEngine::with_workers(args.threads);
    let value = match (args.source.file, args.source.sylvester) {
        (_, Some(n)) => {
            let choice = match args.engine {
                EngineArg::Engine(e) => e,
                EngineArg::Auto if n >= 5 => EngineChoice::SylvesterFast,
                EngineArg::Auto => EngineChoice::Ryser,
            };
            engine.compute_sylvester(choice, n)?
        }
        (Some(path), None) => {
            let choice = match args.engine {
                EngineArg::Engine(e) => e,
                EngineArg::Auto => EngineChoice::Ryser,
            };
            let sign_only = choice == EngineChoice::SumExpansion;
            let a = read_matrix(&path, sign_only)?;
            engine.compute(choice, &a)?
        }
        (None, None) => unreachable!("clap enforces one source"),
    };
    writeln!(out, "{value}").map_err(|e| io_error(None, e))?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct BenchLine {
    bench: &'static str,
    n: u32,
    size: usize,
    value: String,
    runs_ms: Vec<f64>,
    median_ms: f64,
}

fn bench(
    n_min: u32,
    n_max: u32,
    engines: Vec<EngineChoice>,
    threads: Workers,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if n_min > n_max {
        return Err(Error::Argument(format!("empty range: n-min {n_min} > n-max {n_max}")).into());
    }
    let engine = PermanentEngine::with_workers(threads);
    let engines = if engines.is_empty() {
        EngineChoice::ALL.to_vec()
    } else {
        engines
    };
    for n in n_min..=n_max {
        let size = 1usize << n;
        for &choice in &engines {
            let runnable = match choice {
                EngineChoice::SylvesterFast => (engine.limits.sylvester_fast_min
                    ..=engine.limits.sylvester_fast_max)
                    .contains(&n),
                other => {
                    n <= hadamard_permanent::matrix::DEFAULT_MAX_ORDER
                        && engine.supports(other, size)
                }
            };
            if !runnable {
                continue;
            }
            let value = engine.compute_sylvester(choice, n)?;
            let mut runs_ms = Vec::with_capacity(3);
            for _ in 0..3 {
                let start = Instant::now();
                engine.compute_sylvester(choice, n)?;
                runs_ms.push(start.elapsed().as_secs_f64() * 1e3);
            }
            let mut sorted = runs_ms.clone();
            sorted.sort_by(f64::total_cmp);
            let line = BenchLine {
                bench: choice.name(),
                n,
                size,
                value: value.to_string(),
                median_ms: sorted[1],
                runs_ms,
            };
            let json = serde_json::to_string(&line).expect("bench lines serialize");
            writeln!(out, "{json}").map_err(|e| io_error(None, e))?;
        }
    }
    Ok(EXIT_OK)
}
