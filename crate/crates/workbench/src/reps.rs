//! One trait over the three set representations, so the store, the
//! validator, and the benchmark runner can stay generic instead of being
//! written three times.

use sliceset::slicing::SpaceBreakdown;
use sliceset::{PcEfList, RoaringLiteSet, SlicedSet, SortedSequence};

/// The operations every representation exposes. All methods are thin
/// passthroughs; the trait exists so callers can be generic over the
/// concrete type (and therefore free of dynamic dispatch in timed loops).
// every representation stores at least one value, so `len` has no empty
// case for an `is_empty` to report
#[allow(clippy::len_without_is_empty)]
pub trait SetRep: Sized {
    /// Stable name used in reports and index file headers.
    const NAME: &'static str;

    fn build(seq: &SortedSequence) -> Self;
    fn len(&self) -> usize;
    fn size_bytes(&self) -> usize;
    fn to_bytes(&self) -> Vec<u8>;
    fn from_bytes(bytes: &[u8]) -> sliceset::Result<Self>;
    fn decode_into(&self, out: &mut [u32]) -> sliceset::Result<usize>;
    fn get(&self, index: usize) -> Option<u32>;
    fn next_geq(&self, lower: u32) -> Option<u32>;
    fn intersect_into(&self, other: &Self, out: &mut [u32]) -> sliceset::Result<usize>;
    fn union_into(&self, other: &Self, out: &mut [u32]) -> sliceset::Result<usize>;

    /// Extra space metrics beyond bits per integer, as
    /// `(metric, value, unit)` rows; only the sliced representation
    /// reports any.
    fn space_rows(sets: &[Self]) -> Vec<(&'static str, f64, &'static str)> {
        let _ = sets;
        Vec::new()
    }
}

impl SetRep for SlicedSet {
    const NAME: &'static str = "slicing";

    fn build(seq: &SortedSequence) -> Self {
        SlicedSet::build(seq)
    }
    fn len(&self) -> usize {
        self.len()
    }
    fn size_bytes(&self) -> usize {
        self.size_bytes()
    }
    fn to_bytes(&self) -> Vec<u8> {
        self.to_bytes()
    }
    fn from_bytes(bytes: &[u8]) -> sliceset::Result<Self> {
        SlicedSet::from_bytes(bytes.to_vec())
    }
    fn decode_into(&self, out: &mut [u32]) -> sliceset::Result<usize> {
        self.decode_into(out)
    }
    fn get(&self, index: usize) -> Option<u32> {
        self.get(index)
    }
    fn next_geq(&self, lower: u32) -> Option<u32> {
        self.next_geq(lower)
    }
    fn intersect_into(&self, other: &Self, out: &mut [u32]) -> sliceset::Result<usize> {
        self.intersect_into(other, out)
    }
    fn union_into(&self, other: &Self, out: &mut [u32]) -> sliceset::Result<usize> {
        self.union_into(other, out)
    }

    fn space_rows(sets: &[Self]) -> Vec<(&'static str, f64, &'static str)> {
        let b = aggregate_breakdown(sets);
        let ints = b.total_values() as f64;
        let bytes = b.total_bytes() as f64;
        if ints == 0.0 || bytes == 0.0 {
            return Vec::new();
        }
        let pct = |part: u64, whole: f64| part as f64 * 100.0 / whole;
        vec![
            ("ints_pct_full_chunks", pct(b.full_chunk_values, ints), "percent"),
            ("ints_pct_dense_chunks", pct(b.dense_chunk_values, ints), "percent"),
            ("ints_pct_dense_blocks", pct(b.dense_block_values, ints), "percent"),
            ("ints_pct_sparse_blocks", pct(b.sparse_block_values, ints), "percent"),
            ("bytes_pct_headers", pct(b.header_bytes, bytes), "percent"),
            ("bytes_pct_dense_chunks", pct(b.dense_chunk_bytes, bytes), "percent"),
            ("bytes_pct_dense_blocks", pct(b.dense_block_bytes, bytes), "percent"),
            ("bytes_pct_sparse_blocks", pct(b.sparse_block_bytes, bytes), "percent"),
        ]
    }
}

impl SetRep for PcEfList {
    const NAME: &'static str = "pc-ef";

    fn build(seq: &SortedSequence) -> Self {
        PcEfList::build(seq)
    }
    fn len(&self) -> usize {
        self.len()
    }
    fn size_bytes(&self) -> usize {
        self.size_bytes()
    }
    fn to_bytes(&self) -> Vec<u8> {
        self.to_bytes()
    }
    fn from_bytes(bytes: &[u8]) -> sliceset::Result<Self> {
        PcEfList::from_bytes(bytes)
    }
    fn decode_into(&self, out: &mut [u32]) -> sliceset::Result<usize> {
        self.decode_into(out)
    }
    fn get(&self, index: usize) -> Option<u32> {
        self.get(index)
    }
    fn next_geq(&self, lower: u32) -> Option<u32> {
        self.next_geq(lower)
    }
    fn intersect_into(&self, other: &Self, out: &mut [u32]) -> sliceset::Result<usize> {
        self.intersect_into(other, out)
    }
    fn union_into(&self, other: &Self, out: &mut [u32]) -> sliceset::Result<usize> {
        self.union_into(other, out)
    }
}

impl SetRep for RoaringLiteSet {
    const NAME: &'static str = "roaring-lite";

    fn build(seq: &SortedSequence) -> Self {
        RoaringLiteSet::build(seq)
    }
    fn len(&self) -> usize {
        self.len()
    }
    fn size_bytes(&self) -> usize {
        self.size_bytes()
    }
    fn to_bytes(&self) -> Vec<u8> {
        self.to_bytes()
    }
    fn from_bytes(bytes: &[u8]) -> sliceset::Result<Self> {
        RoaringLiteSet::from_bytes(bytes)
    }
    fn decode_into(&self, out: &mut [u32]) -> sliceset::Result<usize> {
        self.decode_into(out)
    }
    fn get(&self, index: usize) -> Option<u32> {
        self.get(index)
    }
    fn next_geq(&self, lower: u32) -> Option<u32> {
        self.next_geq(lower)
    }
    fn intersect_into(&self, other: &Self, out: &mut [u32]) -> sliceset::Result<usize> {
        self.intersect_into(other, out)
    }
    fn union_into(&self, other: &Self, out: &mut [u32]) -> sliceset::Result<usize> {
        self.union_into(other, out)
    }
}

/// Sums the per-set space breakdowns of a sliced index.
pub fn aggregate_breakdown(sets: &[SlicedSet]) -> SpaceBreakdown {
    let mut total = SpaceBreakdown::default();
    for b in sets.iter().map(SlicedSet::space_breakdown) {
        total.full_chunk_values += b.full_chunk_values;
        total.dense_chunk_values += b.dense_chunk_values;
        total.dense_block_values += b.dense_block_values;
        total.sparse_block_values += b.sparse_block_values;
        total.header_bytes += b.header_bytes;
        total.dense_chunk_bytes += b.dense_chunk_bytes;
        total.dense_block_bytes += b.dense_block_bytes;
        total.sparse_block_bytes += b.sparse_block_bytes;
    }
    total
}
