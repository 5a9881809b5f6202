//! `dodgson` command-line tool.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input or guard error,
//! 3 domain error (a pairing outside the map's domain).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dodgson::{MapOp, MatrixKind, Method, PairingClass};

#[derive(Parser)]
#[command(
    name = "dodgson",
    version,
    about = "Exact determinants by condensation, and the bijection behind it"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact determinant of a matrix file.
    Det {
        file: PathBuf,
        #[arg(long, default_value = "condensation", value_parser = parse_method)]
        method: Method,
        #[arg(long, default_value_t = 10)]
        retries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the condensation layers as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check the condensation identity formally or on random matrices.
    Verify {
        #[arg(long)]
        n: u32,
        #[arg(long, conflicts_with = "random")]
        formal: bool,
        /// Number of seeded random matrices to check.
        #[arg(long, value_name = "TRIALS")]
        random: Option<u32>,
        #[arg(long, default_value_t = 9)]
        bound: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "DODGSON_ENUM_BOUND", default_value_t = 7)]
        max_n: u32,
    },
    /// Apply T, its inverse, or S to a pairing and print the trace.
    Map {
        #[arg(long, value_parser = parse_op)]
        op: MapOp,
        /// Pairing or trace JSON file, `-` for stdin.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "trace")]
        emit: Emit,
    },
    /// List every pairing of a class with its weight.
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_class)]
        class: PairingClass,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long)]
        only_bad: bool,
        #[arg(long, env = "DODGSON_ENUM_BOUND", default_value_t = 7)]
        max_n: u32,
    },
    /// Time determinant methods on seeded matrices and write CSV.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "condensation,bareiss")]
        methods: Vec<Method>,
        #[arg(long, default_value_t = 8)]
        entry_bits: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value = "random", value_parser = parse_kind)]
        corpus: MatrixKind,
        #[arg(long, default_value_t = 10)]
        retries: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a generated matrix in the text format.
    Gen {
        #[arg(long, default_value = "random", value_parser = parse_kind)]
        kind: MatrixKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 9)]
        bound: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Trace,
    Pairing,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

fn parse_op(s: &str) -> Result<MapOp, String> {
    s.parse()
}

fn parse_kind(s: &str) -> Result<MatrixKind, String> {
    s.parse()
}

fn parse_class(s: &str) -> Result<PairingClass, String> {
    match s {
        "A" => Ok(PairingClass::A),
        "B" => Ok(PairingClass::B),
        "C" => Ok(PairingClass::C),
        other => Err(format!("unknown class {other:?}, expected A, B or C")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Det {
            file,
            method,
            retries,
            seed,
            trace,
        } => commands::det(&file, method, retries, seed, trace.as_deref()),
        Command::Verify {
            n,
            formal,
            random,
            bound,
            seed,
            max_n,
        } => commands::verify(n, formal, random, bound, seed, max_n),
        Command::Map { op, input, emit } => {
            commands::map(op, &input, matches!(emit, Emit::Pairing))
        }
        Command::Enumerate {
            n,
            class,
            format,
            only_bad,
            max_n,
        } => commands::enumerate(n, class, matches!(format, Format::Json), only_bad, max_n),
        Command::Bench {
            sizes,
            methods,
            entry_bits,
            seed,
            trials,
            corpus,
            retries,
            out,
        } => commands::bench(&commands::BenchArgs {
            sizes,
            methods,
            entry_bits,
            seed,
            trials,
            corpus,
            retries,
            out,
        }),
        Command::Gen {
            kind,
            n,
            bound,
            seed,
        } => commands::gen(kind, n, bound, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dodgson: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
