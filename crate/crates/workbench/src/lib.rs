//! Workbench around the `sliceset` representations: collection files,
//! synthetic clustered-sequence generation, density filtering, a
//! plain-array reference implementation, seeded query workloads, and the
//! benchmark runner that drives them all from the `sliceset` CLI.
//!
//! The pieces compose in a fixed order: a [`collection::Collection`] comes
//! from a file or from [`synth::generate_clustered`], optionally shrinks
//! through [`collection::Collection::filter_by_density`], and is then
//! either persisted as a built index ([`store`]) or measured ([`bench`]).
//! Every timed operation is first checked against [`oracle`]; a benchmark
//! that disagrees with the reference refuses to report numbers.

pub mod bench;
pub mod collection;
pub mod oracle;
pub mod reps;
pub mod store;
pub mod synth;
pub mod workload;

pub use bench::{run_bench, verify, BenchConfig, BenchReport, MetricRow, OpKind};
pub use collection::{read_collection, write_collection, Collection, FilterStats};
pub use reps::SetRep;
pub use store::{build_index, read_index, write_index, IndexFile, IndexSets, ReprKind};
pub use synth::{generate_clustered, ClusterParams};
pub use workload::Workload;

/// Errors shared by the workbench modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The generator cannot reach the requested density inside the given
    /// universe (or a shape parameter is out of range).
    #[error("infeasible parameters: {reason}")]
    InfeasibleParameters { reason: String },
    /// A collection or index file violates its format.
    #[error("malformed file: {reason}")]
    MalformedFile { reason: String },
    /// A representation disagreed with the plain-array reference.
    #[error("validation failure: {reason}")]
    ValidationFailure { reason: String },
    /// A positional access outside the list.
    #[error("index {index} out of bounds for length {len}")]
    IndexOutOfBounds { index: usize, len: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] sliceset::Error),
}

impl Error {
    pub(crate) fn malformed(reason: impl Into<String>) -> Self {
        Error::MalformedFile { reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
