//! Command-line front end: generate synthetic collections, build and
//! inspect indexes, verify every representation against the reference,
//! and run the benchmark suite.

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use sliceset_workbench::{
    bench, build_index, generate_clustered, read_collection, read_index, write_collection,
    write_index, BenchConfig, ClusterParams, Collection, FilterStats, OpKind, ReprKind,
};

#[derive(Parser)]
#[command(name = "sliceset", version, about = "Workbench for compressed sorted integer sets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic clustered collection.
    Gen {
        /// Number of lists.
        #[arg(long)]
        lists: usize,
        /// Exclusive upper bound on values.
        #[arg(long)]
        universe: u32,
        /// Target density of every list (within ±20%).
        #[arg(long)]
        density: f64,
        /// Probability that a gap is exactly 1.
        #[arg(long, default_value_t = ClusterParams::default().run_prob)]
        run_prob: f64,
        /// Mean jump length before density rescaling.
        #[arg(long, default_value_t = ClusterParams::default().gap_mean)]
        gap_mean: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Collection file to write.
        #[arg(long)]
        output: PathBuf,
    },
    /// Encode a collection in one representation and write the index.
    Build {
        /// Collection file to read.
        #[arg(long)]
        input: PathBuf,
        /// Representation to build.
        #[arg(long)]
        repr: ReprArg,
        /// Keep only lists whose density exceeds this threshold.
        #[arg(long)]
        density_filter: Option<f64>,
        /// Index file to write.
        #[arg(long)]
        output: PathBuf,
    },
    /// Print size statistics of a built index.
    Stats {
        /// Index file to read.
        #[arg(long)]
        index: PathBuf,
    },
    /// Validate the representations against the reference, then time them.
    Bench {
        /// Collection file to read.
        #[arg(long)]
        input: PathBuf,
        /// Representations to measure.
        #[arg(long, value_delimiter = ',', default_value = "slicing,pc-ef,roaring-lite")]
        reprs: Vec<ReprArg>,
        /// Operations to time.
        #[arg(long, value_delimiter = ',', default_value = "decode,and,or,access,nextgeq")]
        ops: Vec<OpArg>,
        /// Timed batches per metric (one untimed warm-up precedes them).
        #[arg(long, default_value_t = 10)]
        runs: u32,
        /// Workload seed.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Keep only lists whose density exceeds this threshold.
        #[arg(long)]
        density_filter: Option<f64>,
        /// Report format.
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check every representation against the reference; nonzero exit on
    /// any mismatch.
    Verify {
        /// Collection file to read.
        #[arg(long)]
        input: PathBuf,
        /// Representations to check.
        #[arg(long, value_delimiter = ',', default_value = "slicing,pc-ef,roaring-lite")]
        reprs: Vec<ReprArg>,
        /// Workload seed.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Keep only lists whose density exceeds this threshold.
        #[arg(long)]
        density_filter: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReprArg {
    Slicing,
    PcEf,
    RoaringLite,
}

impl From<ReprArg> for ReprKind {
    fn from(arg: ReprArg) -> ReprKind {
        match arg {
            ReprArg::Slicing => ReprKind::Slicing,
            ReprArg::PcEf => ReprKind::PcEf,
            ReprArg::RoaringLite => ReprKind::RoaringLite,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OpArg {
    Decode,
    And,
    Or,
    Access,
    Nextgeq,
}

impl From<OpArg> for OpKind {
    fn from(arg: OpArg) -> OpKind {
        match arg {
            OpArg::Decode => OpKind::Decode,
            OpArg::And => OpKind::And,
            OpArg::Or => OpKind::Or,
            OpArg::Access => OpKind::Access,
            OpArg::Nextgeq => OpKind::NextGeq,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().cmd {
        Cmd::Gen { lists, universe, density, run_prob, gap_mean, seed, output } => {
            let params = ClusterParams { run_prob, gap_mean };
            let collection = generate_clustered(lists, universe, density, params, seed)?;
            write_collection(&collection, &output)?;
            let mean: f64 = collection.lists().iter().map(|l| l.density()).sum::<f64>()
                / collection.len() as f64;
            println!(
                "wrote {} lists ({} integers) over universe {} to {} (mean density {:.6})",
                collection.len(),
                collection.total_integers(),
                collection.universe(),
                output.display(),
                mean
            );
        }
        Cmd::Build { input, repr, density_filter, output } => {
            let collection = load(&input, density_filter)?;
            let index = build_index(&collection, repr.into());
            write_index(&index, &output)?;
            println!(
                "wrote {} index: {} lists, {} integers, {} bytes ({:.3} bits/int) to {}",
                index.repr(),
                index.len(),
                index.total_integers(),
                index.total_bytes(),
                index.bits_per_int(),
                output.display()
            );
        }
        Cmd::Stats { index } => {
            let index =
                read_index(&index).with_context(|| format!("reading {}", index.display()))?;
            println!("repr:      {}", index.repr());
            println!("lists:     {}", index.len());
            println!("integers:  {}", index.total_integers());
            println!("size:      {} bytes", index.total_bytes());
            println!("bits/int:  {:.3}", index.bits_per_int());
            if let Some(b) = index.slicing_breakdown() {
                let ints = b.total_values() as f64;
                let bytes = b.total_bytes() as f64;
                let pct = |part: u64, whole: f64| {
                    if whole == 0.0 { 0.0 } else { part as f64 * 100.0 / whole }
                };
                println!("integers by shape:");
                println!("  full chunks    {:6.1}%", pct(b.full_chunk_values, ints));
                println!("  dense chunks   {:6.1}%", pct(b.dense_chunk_values, ints));
                println!("  dense blocks   {:6.1}%", pct(b.dense_block_values, ints));
                println!("  sparse blocks  {:6.1}%", pct(b.sparse_block_values, ints));
                println!("bytes by shape:");
                println!("  headers        {:6.1}%", pct(b.header_bytes, bytes));
                println!("  dense chunks   {:6.1}%", pct(b.dense_chunk_bytes, bytes));
                println!("  dense blocks   {:6.1}%", pct(b.dense_block_bytes, bytes));
                println!("  sparse blocks  {:6.1}%", pct(b.sparse_block_bytes, bytes));
            }
        }
        Cmd::Bench { input, reprs, ops, runs, seed, density_filter, format, output } => {
            let collection = load(&input, density_filter)?;
            let reprs: Vec<ReprKind> = reprs.into_iter().map(Into::into).collect();
            let ops: Vec<OpKind> = ops.into_iter().map(Into::into).collect();
            let cfg = BenchConfig { runs, seed };
            let dataset = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "unnamed".into());
            let report = bench::run_bench(
                &collection,
                &reprs,
                &ops,
                &cfg,
                &dataset,
                density_filter.unwrap_or(0.0),
            )?;
            let rendered = match format {
                FormatArg::Csv => report.to_csv(),
                FormatArg::Json => report.to_json(),
            };
            match output {
                Some(path) => {
                    std::fs::write(&path, rendered)
                        .with_context(|| format!("writing report to {}", path.display()))?;
                    println!("wrote report to {}", path.display());
                }
                None => print!("{rendered}"),
            }
        }
        Cmd::Verify { input, reprs, seed, density_filter } => {
            let collection = load(&input, density_filter)?;
            let reprs: Vec<ReprKind> = reprs.into_iter().map(Into::into).collect();
            bench::verify(&collection, &reprs, seed)?;
            println!(
                "ok: {} lists, {} integers; all of [{}] match the reference on decode/access/nextgeq/and/or",
                collection.len(),
                collection.total_integers(),
                reprs.iter().map(|r| r.name()).collect::<Vec<_>>().join(", ")
            );
        }
    }
    Ok(())
}

/// Reads a collection and applies the optional density filter, printing
/// what survived.
fn load(input: &Path, density_filter: Option<f64>) -> anyhow::Result<Collection> {
    let collection =
        read_collection(input).with_context(|| format!("reading {}", input.display()))?;
    match density_filter {
        None => Ok(collection),
        Some(d) => {
            let (filtered, stats) = collection.filter_by_density(d);
            print_filter(&stats);
            Ok(filtered)
        }
    }
}

fn print_filter(stats: &FilterStats) {
    println!(
        "density filter {}: kept {}/{} lists, {:.2}% of integers",
        stats.threshold,
        stats.kept_lists,
        stats.total_lists,
        stats.retained_integer_percent()
    );
}
