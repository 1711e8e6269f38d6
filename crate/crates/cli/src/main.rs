use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use residue_tilings::kasteleyn::{build_kasteleyn, det_exact, even_basis};
use residue_tilings::residue::jacobi;
use residue_tilings::spectral::SIGN_TOLERANCE;
use residue_tilings::tiling::{count_tilings, enumerate_tilings_with_limit, signed_sum};
use residue_tilings::{board, tiling};
use serde::Serialize;

mod lemma;
mod verify;

use lemma::{LemmaName, LemmaParams};
use verify::Method;

const LIMIT_ENV: &str = "RESIDUE_TILINGS_LIMIT";

#[derive(Debug)]
pub enum CliError {
    Failure,
    Limit(String),
    Io(String),
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failure => 1,
            CliError::Limit(_) => 2,
            CliError::Io(_) => 3,
            CliError::Usage(_) => 4,
        }
    }
}

impl From<residue_tilings::Error> for CliError {
    fn from(e: residue_tilings::Error) -> CliError {
        if e.is_limit() {
            CliError::Limit(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> CliError {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "residue-tilings",
    version,
    about = "Signed domino-tiling sums and Jacobi symbols"
)]
struct Cli {
    /// Cell limit for explicit tiling enumeration [env: RESIDUE_TILINGS_LIMIT]
    #[arg(long, global = true, value_name = "CELLS")]
    limit: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Signed sum S of the width × height rectangle
    Sum {
        #[arg(long)]
        width: u32,
        #[arg(long)]
        height: u32,
    },
    /// Number of tilings of the width × height rectangle
    Count {
        #[arg(long)]
        width: u32,
        #[arg(long)]
        height: u32,
        /// Print every tiling as JSON instead of the count
        #[arg(long)]
        list: bool,
    },
    /// Jacobi symbol (m/n) for odd n
    Jacobi {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
    },
    /// Determinant of the signed adjacency operator for R_{m−1,n−1}
    Detk {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// Dump basis and matrix as JSON
        #[arg(long)]
        dump: bool,
    },
    /// Compare S(R_{m−1,n−1}) with the Jacobi symbol over a range
    Verify {
        #[arg(long, default_value_t = 10)]
        m_max: u64,
        #[arg(long, default_value_t = 9)]
        n_max: u64,
        #[arg(long, value_delimiter = ',', default_value = "dp")]
        methods: Vec<Method>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = SIGN_TOLERANCE)]
        tol: f64,
    },
    /// Table of S-values against Jacobi symbols
    Table {
        #[arg(long, default_value_t = 10)]
        m_max: u64,
        #[arg(long, default_value_t = 9)]
        n_max: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run one lemma's verification suite
    Lemma {
        #[arg(value_enum)]
        name: LemmaName,
        #[command(flatten)]
        params: LemmaParams,
    },
}

fn enumeration_limit(flag: Option<usize>) -> CliResult<usize> {
    if let Some(limit) = flag {
        return Ok(limit);
    }
    match std::env::var(LIMIT_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{LIMIT_ENV} must be a cell count, got {v:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(tiling::DEFAULT_ENUMERATION_LIMIT),
        Err(e) => Err(CliError::Usage(format!("{LIMIT_ENV}: {e}"))),
    }
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct MatrixDump {
    m: u32,
    n: u32,
    basis: Vec<(u32, u32)>,
    matrix: Vec<Vec<i64>>,
    det: String,
}

#[derive(Serialize)]
struct TableRow {
    m: u64,
    n: u64,
    #[serde(rename = "S")]
    s: String,
    jacobi: i64,
    agree: bool,
}

fn table(m_max: u64, n_max: u64, format: Format, out: Option<PathBuf>) -> CliResult<()> {
    let mut rows = Vec::new();
    for n in (1..=n_max).step_by(2) {
        for m in 1..=m_max {
            let s = signed_sum(&board::rectangle(m as u32 - 1, n as u32 - 1))?;
            let rhs = residue_tilings::residue::theorem_rhs(m, n)?.value();
            rows.push(TableRow {
                m,
                n,
                agree: s == rhs.into(),
                s: s.to_string(),
                jacobi: rhs,
            });
        }
    }
    let mut sink: Box<dyn Write> = match &out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Csv => {
            sink.write_all(b"m,n,S,jacobi,agree\n")?;
            for r in &rows {
                writeln!(sink, "{},{},{},{},{}", r.m, r.n, r.s, r.jacobi, r.agree)?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &rows)
                .map_err(|e| CliError::Io(e.to_string()))?;
            sink.write_all(b"\n")?;
        }
    }
    sink.flush()?;
    if rows.iter().all(|r| r.agree) {
        Ok(())
    } else {
        Err(CliError::Failure)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let limit = enumeration_limit(cli.limit)?;
    match cli.command {
        Command::Sum { width, height } => {
            println!("{}", signed_sum(&board::rectangle(width, height))?);
        }
        Command::Count {
            width,
            height,
            list,
        } => {
            let rect = board::rectangle(width, height);
            if list {
                print_json(&enumerate_tilings_with_limit(&rect, limit)?)?;
            } else {
                println!("{}", count_tilings(&rect)?);
            }
        }
        Command::Jacobi { m, n } => println!("{}", jacobi(m, n)?),
        Command::Detk { m, n, dump } => {
            let k = build_kasteleyn(m, n)?;
            let det = det_exact(&k);
            if dump {
                print_json(&MatrixDump {
                    m,
                    n,
                    basis: even_basis(m, n),
                    matrix: k.rows().to_vec(),
                    det: det.to_string(),
                })?;
            } else {
                println!("{det}");
            }
        }
        Command::Verify {
            m_max,
            n_max,
            methods,
            jobs,
            tol,
        } => {
            let start = std::time::Instant::now();
            let report = verify::run(m_max, n_max, &methods, jobs, tol)?;
            print_json(&report)?;
            eprintln!("wall time: {:.3?}", start.elapsed());
            return report.outcome();
        }
        Command::Table {
            m_max,
            n_max,
            format,
            out,
        } => table(m_max, n_max, format, out)?,
        Command::Lemma { name, params } => {
            let report = lemma::run(name, &params, limit)?;
            print_json(&report)?;
            if !report.all_pass {
                return Err(CliError::Failure);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Failure => {}
                CliError::Limit(msg) | CliError::Io(msg) | CliError::Usage(msg) => {
                    eprintln!("error: {msg}")
                }
            }
            ExitCode::from(e.exit_code())
        }
    }
}
