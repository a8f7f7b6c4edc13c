//! The measurement harness. Every representation is first validated
//! against the plain-array reference over the full workload; only then do
//! the timed loops run. Timing wraps whole query batches in one monotonic
//! clock read and divides by the query count — per-query timers would
//! drown nanosecond-scale operations in clock overhead — and each metric
//! is the mean over `runs` batches after one untimed warm-up batch.

use std::fmt;
use std::hint::black_box;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sliceset::{PcEfList, RoaringLiteSet, SlicedSet, SortedSequence};

use crate::collection::Collection;
use crate::oracle;
use crate::reps::SetRep;
use crate::store::ReprKind;
use crate::workload::Workload;
use crate::{Error, Result};

/// The timeable operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    Decode,
    And,
    Or,
    Access,
    NextGeq,
}

impl OpKind {
    pub const ALL: [OpKind; 5] = [
        OpKind::Decode,
        OpKind::And,
        OpKind::Or,
        OpKind::Access,
        OpKind::NextGeq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Decode => "decode",
            OpKind::And => "and",
            OpKind::Or => "or",
            OpKind::Access => "access",
            OpKind::NextGeq => "nextgeq",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OpKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| format!("unknown operation {s:?} (expected decode, and, or, access, or nextgeq)"))
    }
}

/// Repetitions and workload seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    /// Timed batches per metric (after one warm-up batch).
    pub runs: u32,
    /// Seed for the query workload.
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { runs: 10, seed: 42 }
    }
}

/// One reported measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub repr: String,
    pub metric: String,
    pub dataset: String,
    pub density: f64,
    pub value: f64,
    pub unit: String,
    pub runs: u32,
    pub seed: u64,
}

/// All measurements of one invocation plus a note on how they were taken.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub environment: String,
    pub rows: Vec<MetricRow>,
}

impl BenchReport {
    /// Renders the rows as CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("rows serialize uniformly");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer cannot fail"))
            .expect("csv output is utf-8")
    }

    /// Parses rows back from [`BenchReport::to_csv`] output (the
    /// environment note is not part of the CSV schema).
    pub fn from_csv(text: &str) -> Result<BenchReport> {
        let mut rows = Vec::new();
        for record in csv::Reader::from_reader(text.as_bytes()).deserialize() {
            rows.push(record.map_err(|e| Error::malformed(format!("csv: {e}")))?);
        }
        Ok(BenchReport { environment: String::new(), rows })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<BenchReport> {
        serde_json::from_str(text).map_err(|e| Error::malformed(format!("json: {e}")))
    }

    /// Looks up one measurement by representation and metric name.
    pub fn value_of(&self, repr: &str, metric: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.repr == repr && r.metric == metric)
            .map(|r| r.value)
    }
}

/// Checks one representation against the reference on every operation of
/// the workload. This is the gate every benchmark and `verify` run passes
/// through; any mismatch aborts with a description of the first failure.
pub fn validate<R: SetRep>(
    sets: &[R],
    lists: &[SortedSequence],
    workload: &Workload,
) -> Result<()> {
    let fail = |reason: String| {
        Err(Error::ValidationFailure { reason: format!("{}: {reason}", R::NAME) })
    };
    let max_len = lists.iter().map(|l| l.len()).max().unwrap_or(0);
    let mut buf = vec![0u32; max_len];

    for (i, (set, list)) in sets.iter().zip(lists).enumerate() {
        let n = set
            .decode_into(&mut buf)
            .map_err(|e| Error::ValidationFailure {
                reason: format!("{}: list {i}: decode failed: {e}", R::NAME),
            })?;
        if buf[..n] != *list.values() {
            return fail(format!("list {i}: decode diverges from the reference"));
        }
        for &p in &workload.access_positions[i] {
            if set.get(p) != Some(list.values()[p]) {
                return fail(format!("list {i}: access({p}) diverges from the reference"));
            }
        }
        for &k in &workload.next_geq_keys[i] {
            if set.next_geq(k) != oracle::next_geq(list.values(), k) {
                return fail(format!("list {i}: next_geq({k}) diverges from the reference"));
            }
        }
    }

    let mut pair_buf = vec![0u32; 2 * max_len];
    for &(a, b) in &workload.pairs {
        let expected = oracle::intersect(lists[a].values(), lists[b].values());
        let n = sets[a]
            .intersect_into(&sets[b], &mut pair_buf)
            .map_err(|e| Error::ValidationFailure {
                reason: format!("{}: pair ({a}, {b}): intersection failed: {e}", R::NAME),
            })?;
        if pair_buf[..n] != expected[..] {
            return fail(format!("pair ({a}, {b}): intersection diverges from the reference"));
        }
        let expected = oracle::union(lists[a].values(), lists[b].values());
        let n = sets[a]
            .union_into(&sets[b], &mut pair_buf)
            .map_err(|e| Error::ValidationFailure {
                reason: format!("{}: pair ({a}, {b}): union failed: {e}", R::NAME),
            })?;
        if pair_buf[..n] != expected[..] {
            return fail(format!("pair ({a}, {b}): union diverges from the reference"));
        }
    }
    Ok(())
}

/// Builds each requested representation over `collection` and validates it
/// against the reference on a workload seeded with `seed`.
pub fn verify(collection: &Collection, reprs: &[ReprKind], seed: u64) -> Result<()> {
    let workload = Workload::generate(collection, seed);
    for &repr in reprs {
        match repr {
            ReprKind::Slicing => verify_one::<SlicedSet>(collection, &workload)?,
            ReprKind::PcEf => verify_one::<PcEfList>(collection, &workload)?,
            ReprKind::RoaringLite => verify_one::<RoaringLiteSet>(collection, &workload)?,
        }
    }
    Ok(())
}

fn verify_one<R: SetRep>(collection: &Collection, workload: &Workload) -> Result<()> {
    let sets: Vec<R> = collection.lists().iter().map(R::build).collect();
    validate(&sets, collection.lists(), workload)
}

/// Builds, validates, and times the requested representations over an
/// already-filtered collection. `dataset` and `density` label the rows;
/// they do not alter what runs.
pub fn run_bench(
    collection: &Collection,
    reprs: &[ReprKind],
    ops: &[OpKind],
    cfg: &BenchConfig,
    dataset: &str,
    density: f64,
) -> Result<BenchReport> {
    assert!(cfg.runs >= 1, "at least one timed batch is required");
    let workload = Workload::generate(collection, cfg.seed);
    let mut rows = Vec::new();
    if !collection.is_empty() {
        for &repr in reprs {
            let labels = RowLabels { dataset, density, cfg };
            match repr {
                ReprKind::Slicing => {
                    bench_repr::<SlicedSet>(collection, &workload, ops, &labels, &mut rows)?
                }
                ReprKind::PcEf => {
                    bench_repr::<PcEfList>(collection, &workload, ops, &labels, &mut rows)?
                }
                ReprKind::RoaringLite => {
                    bench_repr::<RoaringLiteSet>(collection, &workload, ops, &labels, &mut rows)?
                }
            }
        }
    }
    Ok(BenchReport {
        environment: format!(
            "{}-{}; one warm-up batch; each value is the mean over {} timed batches",
            std::env::consts::ARCH,
            std::env::consts::OS,
            cfg.runs
        ),
        rows,
    })
}

struct RowLabels<'a> {
    dataset: &'a str,
    density: f64,
    cfg: &'a BenchConfig,
}

impl RowLabels<'_> {
    fn row(&self, repr: &str, metric: &str, value: f64, unit: &str) -> MetricRow {
        MetricRow {
            repr: repr.to_string(),
            metric: metric.to_string(),
            dataset: self.dataset.to_string(),
            density: self.density,
            value,
            unit: unit.to_string(),
            runs: self.cfg.runs,
            seed: self.cfg.seed,
        }
    }
}

/// Times a closure over `runs` batches (after one warm-up call) and
/// returns the mean batch duration in nanoseconds divided by `per`.
fn time_batches(runs: u32, per: u64, mut batch: impl FnMut()) -> f64 {
    batch();
    let mut total_ns = 0u128;
    for _ in 0..runs {
        let start = Instant::now();
        batch();
        total_ns += start.elapsed().as_nanos();
    }
    total_ns as f64 / runs as f64 / per as f64
}

fn bench_repr<R: SetRep>(
    collection: &Collection,
    workload: &Workload,
    ops: &[OpKind],
    labels: &RowLabels<'_>,
    rows: &mut Vec<MetricRow>,
) -> Result<()> {
    let lists = collection.lists();
    let sets: Vec<R> = lists.iter().map(R::build).collect();
    validate(&sets, lists, workload)?;

    let total_ints: u64 = sets.iter().map(|s| s.len() as u64).sum();
    let total_bytes: u64 = sets.iter().map(|s| s.size_bytes() as u64).sum();
    rows.push(labels.row(
        R::NAME,
        "bits_per_int",
        total_bytes as f64 * 8.0 / total_ints as f64,
        "bits/int",
    ));
    for (metric, value, unit) in R::space_rows(&sets) {
        rows.push(labels.row(R::NAME, metric, value, unit));
    }

    let max_len = sets.iter().map(R::len).max().unwrap_or(0);
    let mut buf = vec![0u32; 2 * max_len];
    let runs = labels.cfg.runs;

    for &op in ops {
        let (value, unit) = match op {
            OpKind::Decode => {
                let ns = time_batches(runs, total_ints, || {
                    for set in &sets {
                        black_box(set.decode_into(black_box(&mut buf)).expect("buffer is large enough"));
                    }
                });
                (ns, "ns/int")
            }
            OpKind::And => {
                let per = workload.pairs.len() as u64;
                let ns = time_batches(runs, per, || {
                    for &(a, b) in &workload.pairs {
                        black_box(
                            sets[a]
                                .intersect_into(&sets[b], black_box(&mut buf))
                                .expect("buffer covers the worst case"),
                        );
                    }
                });
                (ns / 1_000.0, "us/query")
            }
            OpKind::Or => {
                let per = workload.pairs.len() as u64;
                let ns = time_batches(runs, per, || {
                    for &(a, b) in &workload.pairs {
                        black_box(
                            sets[a]
                                .union_into(&sets[b], black_box(&mut buf))
                                .expect("buffer covers the worst case"),
                        );
                    }
                });
                (ns / 1_000.0, "us/query")
            }
            OpKind::Access => {
                let per: u64 = workload.access_positions.iter().map(|p| p.len() as u64).sum();
                let ns = time_batches(runs, per, || {
                    for (set, positions) in sets.iter().zip(&workload.access_positions) {
                        for &p in positions {
                            black_box(set.get(black_box(p)));
                        }
                    }
                });
                (ns, "ns/query")
            }
            OpKind::NextGeq => {
                let per: u64 = workload.next_geq_keys.iter().map(|k| k.len() as u64).sum();
                let ns = time_batches(runs, per, || {
                    for (set, keys) in sets.iter().zip(&workload.next_geq_keys) {
                        for &k in keys {
                            black_box(set.next_geq(black_box(k)));
                        }
                    }
                });
                (ns, "ns/query")
            }
        };
        rows.push(labels.row(R::NAME, op.name(), value, unit));
    }
    Ok(())
}
