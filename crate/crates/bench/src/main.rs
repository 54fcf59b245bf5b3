use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, ValueEnum};
use seqflow_bench::{
    format_table, run_bench, write_csv, BenchConfig, BenchError, BenchKind, PropId,
};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BenchArg {
    Hard,
    Soft,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PropArg {
    Fb,
    Ad,
    Fbs,
    Ads,
    Dual,
}

/// Solve random Sequence instances and report solved counts, times and
/// backtracks per (n, k, delta) cell.
#[derive(Debug, Parser)]
#[command(name = "seqbench", version)]
struct Args {
    #[arg(long, value_enum, default_value = "hard")]
    bench: BenchArg,
    /// Comma-separated sequence lengths.
    #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = [50])]
    n: Vec<usize>,
    /// Comma-separated window lengths.
    #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = [5])]
    k: Vec<usize>,
    /// Comma-separated gaps u - l.
    #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = [1])]
    delta: Vec<usize>,
    /// Soft constraints per instance.
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, value_enum, default_value = "fb")]
    prop: PropArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 300.0)]
    timeout_secs: f64,
    #[arg(long, default_value_t = 20)]
    per_cell: usize,
    /// Values per variable in the soft benchmark.
    #[arg(long, default_value_t = 5)]
    domain_size: usize,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory to read instances from, or to dump generated ones into.
    #[arg(long)]
    instances_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if !(args.timeout_secs.is_finite() && args.timeout_secs > 0.0) {
        eprintln!("configuration error: --timeout-secs must be positive");
        return ExitCode::from(2);
    }
    let config = BenchConfig {
        bench: match args.bench {
            BenchArg::Hard => BenchKind::Hard,
            BenchArg::Soft => BenchKind::Soft,
        },
        n: args.n,
        k: args.k,
        delta: args.delta,
        m: args.m,
        prop: match args.prop {
            PropArg::Fb => PropId::Fb,
            PropArg::Ad => PropId::Ad,
            PropArg::Fbs => PropId::Fbs,
            PropArg::Ads => PropId::Ads,
            PropArg::Dual => PropId::Dual,
        },
        seed: args.seed,
        timeout: Duration::from_secs_f64(args.timeout_secs),
        per_cell: args.per_cell,
        domain_size: args.domain_size,
        instances_dir: args.instances_dir,
    };
    let rows = match run_bench(&config) {
        Ok(rows) => rows,
        Err(e @ BenchError::Config(_)) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::FAILURE;
        }
    };
    print!("{}", format_table(&rows));
    if let Some(path) = args.out {
        if let Err(e) = write_csv(&rows, &path) {
            eprintln!("{e}");
            return ExitCode::FAILURE;
        }
    }
    ExitCode::SUCCESS
}
