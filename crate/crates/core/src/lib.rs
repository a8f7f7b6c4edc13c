//! Compressed representations of sorted `u32` sets, built around one idea:
//! partition the sequence, then give every partition the container its
//! local statistics deserve.
//!
//! Three representations are provided:
//!
//! * [`SlicedSet`] — partitions by *universe* into 2^16-wide chunks and
//!   2^8-wide blocks, with full/dense/sparse container shapes per slice
//!   ([`slicing`]).
//! * [`PcEfList`] — partitions by *cardinality* into 128-element runs,
//!   each Elias-Fano coded against its local universe ([`pcef`]).
//! * [`RoaringLiteSet`] — the classic array-or-bitmap chunk layout, kept
//!   deliberately frugal (no run containers, no positional directory) as a
//!   baseline ([`roaring_lite`]).
//!
//! All three build from a validated [`SortedSequence`], decode back to it,
//! serialize to self-describing little-endian buffers, and answer the same
//! queries: positional access, `next_geq`, intersection, and union.
//! Intersections run through the representation-generic drivers in
//! [`algebra`], so a cardinality-partitioned set and a universe-partitioned
//! set traverse the same logic and must produce the same answers —
//! a property the test suites lean on heavily.

pub mod algebra;
pub mod bits;
mod error;
pub mod pcef;
pub mod roaring_lite;
pub mod sequence;
pub mod slicing;

pub use error::{Error, Result};
pub use pcef::PcEfList;
pub use roaring_lite::RoaringLiteSet;
pub use sequence::{
    partition_by_cardinality, partition_by_universe, PartitionMode, Partitioning, SortedSequence,
};
pub use slicing::SlicedSet;
