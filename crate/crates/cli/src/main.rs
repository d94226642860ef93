//! `recdiv`: exact evaluation, range verification, record search, divisor
//! tree rendering, and OEIS b-file comparison for the ordered-factorization
//! count `K` and the recursive divisor count `kappa_0`.
//!
//! Exit codes: 0 success, 1 verification/comparison mismatch, 2 usage or
//! malformed input, 3 tree node budget exceeded. All output on stdout is
//! byte-deterministic for a given command line, at any `--threads` value;
//! diagnostics go to stderr.

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use recdiv::error::Error;
use recdiv::eval;
use recdiv::factor::factorize;
use recdiv::oeis;
use recdiv::records::{champions_sieve, champions_signature_search, CountFunction};
use recdiv::sieve::{verify_range, Method};
use recdiv::tree;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "recdiv",
    version,
    about = "Exact arithmetic for ordered factorizations and recursive divisors"
)]
struct Cli {
    /// Output format for stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Worker threads for parallel stages; output is identical at any value.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    JsonLines,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalMethod {
    Recursive,
    Theorem1,
    Theorem2,
    Conjecture,
    Macmahon,
}

impl EvalMethod {
    fn name(self) -> &'static str {
        match self {
            EvalMethod::Recursive => "recursive",
            EvalMethod::Theorem1 => "theorem1",
            EvalMethod::Theorem2 => "theorem2",
            EvalMethod::Conjecture => "conjecture",
            EvalMethod::Macmahon => "macmahon",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalFunction {
    #[value(name = "K")]
    K,
    #[value(name = "kappa0")]
    Kappa0,
    #[value(name = "kappa_x")]
    KappaX,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeqFunction {
    #[value(name = "K")]
    K,
    #[value(name = "kappa0")]
    Kappa0,
}

impl From<SeqFunction> for CountFunction {
    fn from(f: SeqFunction) -> CountFunction {
        match f {
            SeqFunction::K => CountFunction::K,
            SeqFunction::Kappa0 => CountFunction::Kappa0,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Sieve,
    Signature,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function at one point.
    Eval {
        /// Point to evaluate at.
        #[arg(long)]
        n: u64,
        /// Evaluation route; defaults to theorem2 (recursive for kappa_x).
        #[arg(long, value_enum)]
        method: Option<EvalMethod>,
        /// Function to evaluate.
        #[arg(long, value_enum, default_value_t = EvalFunction::Kappa0)]
        function: EvalFunction,
        /// Power weighting the divisors; kappa_x only.
        #[arg(long)]
        x: Option<u32>,
    },
    /// Sieve a whole range and print or write it as an OEIS b-file.
    Batch {
        /// Inclusive end of the range 1..=limit.
        #[arg(long)]
        limit: u64,
        /// Function to tabulate.
        #[arg(long, value_enum, default_value_t = SeqFunction::Kappa0)]
        function: SeqFunction,
        /// Write the b-file here instead of stdout.
        #[arg(long)]
        bfile: Option<PathBuf>,
    },
    /// Check evaluation routes against sieve baselines over a range.
    Verify {
        /// Inclusive end of the range 1..=limit.
        #[arg(long)]
        limit: u64,
        /// Comma-separated subset of recursive,theorem1,theorem2,conjecture,macmahon,sieve.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,
    },
    /// Sequence records (champions) up to a bound.
    Records {
        /// Inclusive search bound; arbitrary precision for --strategy signature.
        #[arg(long)]
        limit: BigUint,
        /// Function whose records to list.
        #[arg(long, value_enum, default_value_t = SeqFunction::Kappa0)]
        function: SeqFunction,
        /// Sieve scans every n; signature walks exponent patterns and has no
        /// machine-word bound.
        #[arg(long, value_enum, default_value_t = Strategy::Sieve)]
        strategy: Strategy,
    },
    /// Build the divisor tree of n and emit SVG and/or JSON.
    Tree {
        /// Root of the tree.
        #[arg(long)]
        n: u64,
        /// Write the rendered SVG here.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the tree as JSON here; with no output paths the JSON goes to stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Abort if the tree would hold more squares than this.
        #[arg(long, default_value_t = tree::DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Compare two OEIS b-files on their shared index range.
    Oeis {
        #[arg(long, num_args = 2, value_names = ["FILE_A", "FILE_B"], required = true)]
        compare: Vec<PathBuf>,
    },
    /// Special values and derived sequences.
    Special {
        /// Print kappa_0 of the product of the first 1..=W distinct primes.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..), conflicts_with_all = ["kappa_over_2_alpha", "limit"])]
        squarefree_omega: Option<u32>,
        /// Print kappa_0(n) divided by its guaranteed power of two, n = 1..=limit.
        #[arg(long, requires = "limit")]
        kappa_over_2_alpha: bool,
        /// Inclusive end of the range for --kappa-over-2-alpha.
        #[arg(long, requires = "kappa_over_2_alpha")]
        limit: Option<u64>,
    },
}

enum CliError {
    Lib(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Lib(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads as usize)
        .build_global()
    {
        eprintln!("error: could not initialize the thread pool: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::NodeBudgetExceeded { .. } => EXIT_BUDGET,
                Error::ConjectureMismatch { .. } => EXIT_MISMATCH,
                _ => EXIT_USAGE,
            })
        }
        Err(CliError::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Eval {
            n,
            method,
            function,
            x,
        } => run_eval(n, method, function, x, cli.format),
        Command::Batch {
            limit,
            function,
            bfile,
        } => run_batch(limit, function, bfile.as_deref(), cli.format),
        Command::Verify { limit, methods } => run_verify(limit, methods, cli.format),
        Command::Records {
            limit,
            function,
            strategy,
        } => run_records(&limit, function, strategy, cli.format),
        Command::Tree {
            n,
            svg,
            json,
            budget,
        } => run_tree(n, svg.as_deref(), json.as_deref(), budget),
        Command::Oeis { compare } => run_oeis(&compare[0], &compare[1], cli.format),
        Command::Special {
            squarefree_omega,
            kappa_over_2_alpha,
            limit,
        } => run_special(squarefree_omega, kappa_over_2_alpha, limit, cli.format),
    }
}

#[derive(Serialize)]
struct EvalRow<'a> {
    n: u64,
    value: String,
    method: &'a str,
}

fn run_eval(
    n: u64,
    method: Option<EvalMethod>,
    function: EvalFunction,
    x: Option<u32>,
    format: Format,
) -> Result<u8, CliError> {
    if x.is_some() && function != EvalFunction::KappaX {
        return Err(CliError::Usage(
            "--x applies only to --function kappa_x".into(),
        ));
    }
    let method = method.unwrap_or(match function {
        EvalFunction::KappaX => EvalMethod::Recursive,
        _ => EvalMethod::Theorem2,
    });

    let value = match function {
        EvalFunction::KappaX => {
            if method != EvalMethod::Recursive {
                return Err(CliError::Usage(
                    "kappa_x has no closed form; use --method recursive".into(),
                ));
            }
            let x = x.ok_or_else(|| CliError::Usage("--function kappa_x requires --x".into()))?;
            eval::kappa_x_recursive(n, x)?
        }
        EvalFunction::K | EvalFunction::Kappa0 => {
            let sig = factorize(n)?.signature();
            let kappa0 = |m: EvalMethod| match m {
                EvalMethod::Recursive => eval::kappa0_recursive_sig(&sig),
                EvalMethod::Theorem1 => eval::kappa0_theorem1(&sig),
                EvalMethod::Theorem2 => eval::kappa0_theorem2(&sig),
                EvalMethod::Conjecture => eval::kappa0_conjecture(&sig),
                EvalMethod::Macmahon => unreachable!("handled per function"),
            };
            match (function, method) {
                (EvalFunction::K, EvalMethod::Recursive) => eval::k_recursive_sig(&sig),
                (EvalFunction::K, EvalMethod::Macmahon) => eval::k_macmahon(&sig),
                // half the recursive divisor count, exact for n >= 2
                (EvalFunction::K, m) => {
                    if n == 1 {
                        BigUint::from(1u32)
                    } else {
                        kappa0(m) >> 1
                    }
                }
                (EvalFunction::Kappa0, EvalMethod::Macmahon) => {
                    if n == 1 {
                        BigUint::from(1u32)
                    } else {
                        eval::k_macmahon(&sig) * 2u32
                    }
                }
                (EvalFunction::Kappa0, m) => kappa0(m),
                (EvalFunction::KappaX, _) => unreachable!("handled above"),
            }
        }
    };

    match format {
        Format::Plain => println!("{value}"),
        Format::JsonLines => println!(
            "{}",
            json_line(&EvalRow {
                n,
                value: value.to_string(),
                method: method.name()
            })
        ),
    }
    Ok(0)
}

#[derive(Serialize)]
struct TermRow {
    n: i64,
    value: String,
}

fn run_batch(
    limit: u64,
    function: SeqFunction,
    bfile: Option<&Path>,
    format: Format,
) -> Result<u8, CliError> {
    let table = match function {
        SeqFunction::K => recdiv::sieve::k_sieve(limit)?,
        SeqFunction::Kappa0 => recdiv::sieve::kappa0_sieve(limit)?,
    };
    let seq = oeis::Sequence::new(1, table.values().to_vec());
    if let Some(path) = bfile {
        std::fs::write(path, oeis::write_bfile(&seq))
            .map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        return Ok(0);
    }
    let stdout = std::io::stdout().lock();
    let mut out = std::io::BufWriter::new(stdout);
    match format {
        Format::Plain => {
            out.write_all(oeis::write_bfile(&seq).as_bytes())
                .expect("stdout write");
        }
        Format::JsonLines => {
            for (n, v) in seq.terms() {
                writeln!(
                    out,
                    "{}",
                    json_line(&TermRow {
                        n,
                        value: v.to_string()
                    })
                )
                .expect("stdout write");
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct MismatchRow<'a> {
    n: u64,
    method: &'a str,
    detail: &'a str,
}

#[derive(Serialize)]
struct VerifySummaryRow {
    limit: u64,
    methods: Vec<&'static str>,
    mismatches: usize,
}

fn run_verify(limit: u64, methods: Option<Vec<String>>, format: Format) -> Result<u8, CliError> {
    let methods: Vec<Method> = match methods {
        None => Method::ALL.to_vec(),
        Some(names) => names
            .iter()
            .map(|name| {
                Method::parse(name).ok_or_else(|| {
                    CliError::Usage(format!(
                        "unknown method {name:?}; expected one of recursive, theorem1, theorem2, conjecture, macmahon, sieve"
                    ))
                })
            })
            .collect::<Result<_, _>>()?,
    };
    let report = verify_range(limit, &methods)?;
    let stdout = std::io::stdout().lock();
    let mut out = std::io::BufWriter::new(stdout);
    for m in &report.mismatches {
        match format {
            Format::Plain => {
                writeln!(out, "mismatch n={} method={}: {}", m.n, m.method, m.detail)
                    .expect("stdout write");
            }
            Format::JsonLines => {
                writeln!(
                    out,
                    "{}",
                    json_line(&MismatchRow {
                        n: m.n,
                        method: m.method.name(),
                        detail: &m.detail
                    })
                )
                .expect("stdout write");
            }
        }
    }
    let method_names: Vec<&'static str> = methods.iter().map(|m| m.name()).collect();
    match format {
        Format::Plain => {
            writeln!(
                out,
                "verified 1..={} methods={} mismatches={}",
                report.limit,
                method_names.join(","),
                report.mismatches.len()
            )
            .expect("stdout write");
        }
        Format::JsonLines => {
            writeln!(
                out,
                "{}",
                json_line(&VerifySummaryRow {
                    limit: report.limit,
                    methods: method_names,
                    mismatches: report.mismatches.len(),
                })
            )
            .expect("stdout write");
        }
    }
    Ok(if report.is_clean() { 0 } else { EXIT_MISMATCH })
}

#[derive(Serialize)]
struct RecordRow {
    n: String,
    value: String,
}

fn run_records(
    limit: &BigUint,
    function: SeqFunction,
    strategy: Strategy,
    format: Format,
) -> Result<u8, CliError> {
    let which: CountFunction = function.into();
    let table = match strategy {
        Strategy::Sieve => {
            let limit = limit.to_u64().ok_or_else(|| {
                CliError::Usage(
                    "--strategy sieve holds the whole range in memory; the limit must fit in 64 bits (use --strategy signature)"
                        .into(),
                )
            })?;
            champions_sieve(limit, which)?
        }
        Strategy::Signature => champions_signature_search(limit, which)?,
    };
    let stdout = std::io::stdout().lock();
    let mut out = std::io::BufWriter::new(stdout);
    for e in &table.entries {
        match format {
            Format::Plain => writeln!(out, "{} {}", e.n, e.value).expect("stdout write"),
            Format::JsonLines => writeln!(
                out,
                "{}",
                json_line(&RecordRow {
                    n: e.n.to_string(),
                    value: e.value.to_string()
                })
            )
            .expect("stdout write"),
        }
    }
    Ok(0)
}

fn run_tree(n: u64, svg: Option<&Path>, json: Option<&Path>, budget: u64) -> Result<u8, CliError> {
    let t = tree::build_tree(n, budget)?;
    if let Some(path) = svg {
        let document = tree::render_svg(&tree::layout(&t));
        std::fs::write(path, document).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    }
    if let Some(path) = json {
        let mut text = tree::export_json(&t);
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    }
    if svg.is_none() && json.is_none() {
        println!("{}", tree::export_json(&t));
    }
    Ok(0)
}

#[derive(Serialize)]
struct DiffRow {
    overlap: Option<(i64, i64)>,
    mismatch_index: Option<i64>,
    left: Option<String>,
    right: Option<String>,
    left_only: usize,
    right_only: usize,
}

fn run_oeis(file_a: &Path, file_b: &Path, format: Format) -> Result<u8, CliError> {
    let read = |p: &Path| -> Result<oeis::Sequence, CliError> {
        let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(p.to_path_buf(), e))?;
        Ok(oeis::parse_bfile(&text)?)
    };
    let a = read(file_a)?;
    let b = read(file_b)?;
    let diff = oeis::compare(&a, &b);
    match format {
        Format::Plain => println!("{diff}"),
        Format::JsonLines => println!(
            "{}",
            json_line(&DiffRow {
                overlap: diff.overlap,
                mismatch_index: diff.first_mismatch.as_ref().map(|m| m.index),
                left: diff.first_mismatch.as_ref().map(|m| m.left.to_string()),
                right: diff.first_mismatch.as_ref().map(|m| m.right.to_string()),
                left_only: diff.left_only,
                right_only: diff.right_only,
            })
        ),
    }
    Ok(if diff.is_match() { 0 } else { EXIT_MISMATCH })
}

#[derive(Serialize)]
struct OmegaRow {
    omega: u32,
    value: String,
}

fn run_special(
    squarefree_omega: Option<u32>,
    kappa_over_2_alpha: bool,
    limit: Option<u64>,
    format: Format,
) -> Result<u8, CliError> {
    let stdout = std::io::stdout().lock();
    let mut out = std::io::BufWriter::new(stdout);
    if let Some(w) = squarefree_omega {
        for omega in 1..=w {
            let value = eval::kappa0_squarefree(omega);
            match format {
                Format::Plain => writeln!(out, "{value}").expect("stdout write"),
                Format::JsonLines => writeln!(
                    out,
                    "{}",
                    json_line(&OmegaRow {
                        omega,
                        value: value.to_string()
                    })
                )
                .expect("stdout write"),
            }
        }
        return Ok(0);
    }
    if kappa_over_2_alpha {
        let limit = limit.expect("clap enforces --limit with --kappa-over-2-alpha");
        for n in 1..=limit {
            let value = eval::kappa0_over_2_alpha_star(n)?;
            match format {
                Format::Plain => writeln!(out, "{value}").expect("stdout write"),
                Format::JsonLines => writeln!(
                    out,
                    "{}",
                    json_line(&TermRow {
                        n: n as i64,
                        value: value.to_string()
                    })
                )
                .expect("stdout write"),
            }
        }
        return Ok(0);
    }
    Err(CliError::Usage(
        "pass --squarefree-omega W or --kappa-over-2-alpha --limit N".into(),
    ))
}

fn json_line<T: Serialize>(row: &T) -> String {
    serde_json::to_string(row).expect("row serialization cannot fail")
}
