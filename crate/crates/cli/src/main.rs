//! `symband`: solve and reduce band systems from JSON files, run seeded
//! benchmark sweeps, and summarize the recorded timings.
//!
//! Exit codes: 0 success, 1 usage or input errors, 2 singular matrix (or a
//! zero reduction divisor), 3 insufficient data for a requested summary.
//! Results go to stdout or the requested files; diagnostics go to stderr.

mod svg;

use std::collections::BTreeSet;
use std::fmt::Display;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use symband::band::{
    parse_system, parse_system_f64, write_float_solution, write_solution, write_system,
};
use symband::{
    alpha_table, append_csv, generate_system, mean_table, ratio_table, read_csv, reduce_chain,
    solve, solve_float, time_run, Algorithm, AlphaRow, Backend, BenchError, GenSpec, MeanRow,
    RatioRow, ReduceError, SolveError, SplitMix64, StorageKind,
};

const EXIT_USAGE: i32 = 1;
const EXIT_SINGULAR: i32 = 2;
const EXIT_INSUFFICIENT: i32 = 3;

#[derive(Parser)]
#[command(
    name = "symband",
    version,
    about = "Exact band linear-system solver with storage-cost benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a band system; the half-bandwidth in the file picks the solver
    Solve(SolveArgs),
    /// Lower a system's bandwidth and report the exact operation count
    Reduce(ReduceArgs),
    /// Time seeded solves over a cross product of cells, appending CSV rows
    Bench(BenchArgs),
    /// Summarize a timing CSV: means, growth exponents, ratios, chart
    Report(ReportArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Band system JSON file
    #[arg(long)]
    input: PathBuf,
    /// Storage cost model: fixed or list
    #[arg(long, default_value = "fixed")]
    storage: StorageKind,
    /// Arithmetic backend: exact or float
    #[arg(long, default_value = "exact")]
    backend: Backend,
    /// Write the solution JSON here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Band system JSON file
    #[arg(long)]
    input: PathBuf,
    /// Storage cost model: fixed or list
    #[arg(long, default_value = "fixed")]
    storage: StorageKind,
    /// Target shape: pd (half-bandwidth 2) or td (half-bandwidth 1)
    #[arg(long)]
    to: String,
    /// Reduced system JSON path; the report lands beside it with a
    /// .report.json extension
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated sizes n; defaults depend on storage
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Comma-separated algorithms: td, pd, hd
    #[arg(long, value_delimiter = ',', default_value = "td,pd,hd")]
    algorithms: Vec<Algorithm>,
    /// Comma-separated storage models: fixed, list
    #[arg(long, value_delimiter = ',', default_value = "fixed")]
    storage: Vec<StorageKind>,
    /// Arithmetic backend: exact or float
    #[arg(long, default_value = "exact")]
    backend: Backend,
    /// Timed repetitions per cell
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Base seed; system content is a pure function of (seed, cell)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV file to append timing records to
    #[arg(long, default_value = "runs.csv")]
    csv: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Timing CSV produced by the bench command
    #[arg(long)]
    csv: PathBuf,
    /// Print the order-of-growth table
    #[arg(long)]
    alpha: bool,
    /// Print mean-time ratios of SPDM and SHDM over STDM
    #[arg(long)]
    ratios: bool,
    /// Write a grouped bar chart of the mean times
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successes; everything else is usage.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            process::exit(code);
        }
    };
    let code = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Report(args) => cmd_report(args),
    };
    process::exit(code);
}

fn fail(code: i32, message: impl Display) -> i32 {
    eprintln!("error: {message}");
    code
}

fn read_input(path: &Path) -> Result<String, i32> {
    fs::read_to_string(path)
        .map_err(|e| fail(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> i32 {
    match output {
        None => {
            print!("{text}");
            0
        }
        Some(path) => match fs::write(path, text) {
            Ok(()) => 0,
            Err(e) => fail(EXIT_USAGE, format!("cannot write {}: {e}", path.display())),
        },
    }
}

fn cmd_solve(args: SolveArgs) -> i32 {
    let text = match read_input(&args.input) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let rendered = match args.backend {
        Backend::Exact => {
            let mut sys = match parse_system(&text, args.storage) {
                Ok(s) => s,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            match solve(&mut sys) {
                Ok(result) => write_solution(&result.to_document()),
                Err(e @ SolveError::SingularMatrix) => return fail(EXIT_SINGULAR, e),
                Err(e) => return fail(EXIT_USAGE, e),
            }
        }
        Backend::Float => {
            let mut sys = match parse_system_f64(&text, args.storage) {
                Ok(s) => s,
                Err(e) => return fail(EXIT_USAGE, e),
            };
            match solve_float(&mut sys) {
                Ok(result) => write_float_solution(&result.solution, result.det),
                Err(e @ SolveError::FloatZeroPivot { .. }) => return fail(EXIT_SINGULAR, e),
                Err(e) => return fail(EXIT_USAGE, e),
            }
        }
    };
    emit(&rendered, args.output.as_deref())
}

fn cmd_reduce(args: ReduceArgs) -> i32 {
    let target_w = match args.to.as_str() {
        "pd" => 2,
        "td" => 1,
        other => {
            return fail(
                EXIT_USAGE,
                format!("unknown target {other:?} (expected pd or td)"),
            )
        }
    };
    let text = match read_input(&args.input) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let sys = match parse_system(&text, args.storage) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let report = match reduce_chain(&sys, target_w) {
        Ok(r) => r,
        Err(e @ ReduceError::ReductionPivotZero { .. }) => return fail(EXIT_SINGULAR, e),
        Err(e) => return fail(EXIT_USAGE, e),
    };
    if let Err(e) = fs::write(&args.output, write_system(&report.reduced)) {
        return fail(
            EXIT_USAGE,
            format!("cannot write {}: {e}", args.output.display()),
        );
    }
    let report_path = args.output.with_extension("report.json");
    if let Err(e) = fs::write(&report_path, report.to_json()) {
        return fail(
            EXIT_USAGE,
            format!("cannot write {}: {e}", report_path.display()),
        );
    }
    eprintln!(
        "reduced half-bandwidth {} to {} in {} counted ops; report at {}",
        report.w_from,
        report.w_to,
        report.ops_counted,
        report_path.display()
    );
    0
}

fn default_sizes(storage: StorageKind) -> &'static [usize] {
    match storage {
        StorageKind::Fixed => &[1_000, 4_000, 10_000, 40_000, 100_000],
        StorageKind::List => &[1_000, 4_000, 16_000],
    }
}

/// Decorrelates cells while staying a pure function of the base seed and the
/// cell coordinates, so a rerun regenerates identical systems.
fn cell_seed(base: u64, n: usize, w: usize, storage: StorageKind) -> u64 {
    let storage_bit = match storage {
        StorageKind::Fixed => 0u64,
        StorageKind::List => 1u64,
    };
    SplitMix64::new(base ^ ((n as u64) << 8) ^ ((w as u64) << 4) ^ (storage_bit << 2)).next_u64()
}

fn cmd_bench(args: BenchArgs) -> i32 {
    if args.reps == 0 {
        return fail(EXIT_USAGE, "reps must be at least 1");
    }
    if args.algorithms.is_empty() || args.storage.is_empty() {
        return fail(EXIT_USAGE, "need at least one algorithm and one storage model");
    }
    // Gate explicit sizes before anything is timed, so a doomed cross
    // product never leaves partial rows behind.
    for &algorithm in &args.algorithms {
        let min = 2 * algorithm.w() + 1;
        if let Some(&bad) = args.sizes.iter().find(|&&n| n < min) {
            return fail(
                EXIT_USAGE,
                format!("size {bad} is below the minimum n = {min} for {algorithm}"),
            );
        }
    }
    for &storage in &args.storage {
        let sizes: Vec<usize> = if args.sizes.is_empty() {
            default_sizes(storage).to_vec()
        } else {
            args.sizes.clone()
        };
        for &algorithm in &args.algorithms {
            for &n in &sizes {
                let seed = cell_seed(args.seed, n, algorithm.w(), storage);
                let spec = GenSpec::plain(n, algorithm.w(), seed, args.backend, storage);
                let generated = match generate_system(&spec) {
                    Ok(g) => g,
                    Err(e) => return fail(EXIT_USAGE, e),
                };
                let records = match time_run(algorithm, &generated, args.reps) {
                    Ok(r) => r,
                    Err(BenchError::Solve(e)) => return fail(EXIT_SINGULAR, e),
                    Err(e) => return fail(EXIT_USAGE, e),
                };
                // Append after every cell so partial results survive an
                // interrupted sweep.
                if let Err(e) = append_csv(&args.csv, &records) {
                    return fail(
                        EXIT_USAGE,
                        format!("cannot append {}: {e}", args.csv.display()),
                    );
                }
                let mean =
                    records.iter().map(|r| r.seconds).sum::<f64>() / records.len() as f64;
                eprintln!(
                    "{algorithm} {storage} {} n={n}: mean {mean:.6} s over {} reps",
                    args.backend, args.reps
                );
            }
        }
    }
    0
}

fn cmd_report(args: ReportArgs) -> i32 {
    let file = match fs::File::open(&args.csv) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_USAGE, format!("cannot read {}: {e}", args.csv.display())),
    };
    let records = match read_csv(BufReader::new(file)) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    if records.is_empty() {
        return fail(EXIT_INSUFFICIENT, "CSV holds no records");
    }
    let means = mean_table(&records);
    print_mean_table(&means);

    if args.alpha {
        let series: BTreeSet<(StorageKind, Backend, Algorithm)> = means
            .iter()
            .map(|r| (r.storage, r.backend, r.algorithm))
            .collect();
        let rows = match alpha_table(&records) {
            Ok(rows) => rows,
            Err(e) => return fail(EXIT_INSUFFICIENT, e),
        };
        // A series with a single size has no growth estimate at all.
        if rows.len() < series.len() {
            return fail(
                EXIT_INSUFFICIENT,
                format!(
                    "{} of {} series have a single size; a growth estimate needs two",
                    series.len() - rows.len(),
                    series.len()
                ),
            );
        }
        println!();
        print_alpha_table(&rows);
    }
    if args.ratios {
        let rows = match ratio_table(&records) {
            Ok(rows) => rows,
            Err(e) => return fail(EXIT_INSUFFICIENT, e),
        };
        println!();
        print_ratio_table(&rows);
    }
    if let Some(path) = &args.svg {
        let Some(chart) = svg::grouped_bar_chart(&means) else {
            return fail(EXIT_INSUFFICIENT, "no rows to chart");
        };
        if let Err(e) = fs::write(path, chart) {
            return fail(EXIT_USAGE, format!("cannot write {}: {e}", path.display()));
        }
        eprintln!("chart written to {}", path.display());
    }
    0
}

fn print_mean_table(means: &[MeanRow]) {
    println!("mean seconds per (algorithm, storage, backend, n):");
    println!(
        "{:<9}  {:<7}  {:<7}  {:>8}  {:>4}  {:>14}",
        "algorithm", "storage", "backend", "n", "reps", "mean_seconds"
    );
    for row in means {
        println!(
            "{:<9}  {:<7}  {:<7}  {:>8}  {:>4}  {:>14.9}",
            row.algorithm.as_str(),
            row.storage.as_str(),
            row.backend.as_str(),
            row.n,
            row.reps,
            row.mean_seconds
        );
    }
}

fn print_alpha_table(rows: &[AlphaRow]) {
    println!("order of growth, two largest sizes per series:");
    println!(
        "{:<9}  {:<7}  {:<7}  {:>8}  {:>8}  {:>6}  {:>12}",
        "algorithm", "storage", "backend", "n1", "n2", "alpha", "k_fit"
    );
    for row in rows {
        println!(
            "{:<9}  {:<7}  {:<7}  {:>8}  {:>8}  {:>6.2}  {:>12.3e}",
            row.algorithm.as_str(),
            row.storage.as_str(),
            row.backend.as_str(),
            row.estimate.n1,
            row.estimate.n2,
            row.estimate.alpha,
            row.estimate.k_fit
        );
    }
}

fn print_ratio_table(rows: &[RatioRow]) {
    println!("mean-time ratios relative to STDM:");
    println!(
        "{:<7}  {:<7}  {:>8}  {:>7}  {:>7}",
        "storage", "backend", "n", "pd/td", "hd/td"
    );
    for row in rows {
        println!(
            "{:<7}  {:<7}  {:>8}  {:>7.3}  {:>7.3}",
            row.storage.as_str(),
            row.backend.as_str(),
            row.n,
            row.pd_over_td,
            row.hd_over_td
        );
    }
}
