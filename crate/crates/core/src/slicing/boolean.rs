//! Chunk-aligned intersection and union over [`SlicedSet`]s.
//!
//! Both operations walk the two header tables by chunk id. Intersection
//! goes through the generic partition-matching driver; only matched ids
//! reach a container kernel. Union additionally decodes one-sided chunks.
//! Kernels dispatch on the container shape pair, doing word-wise bitwise
//! work wherever at least one side is a bitmap and falling back to merges
//! only when both sides are raw arrays.

use super::ops::decode_chunk;
use super::small::small_array_intersect;
use super::{
    BlockIter, BlockRef, ChunkHeader, ChunkKind, SlicedSet, BLOCK_SPAN, CHUNK_SPAN,
    DENSE_BLOCK_BYTES, DENSE_CHUNK_BYTES,
};
use crate::algebra::{self, PartitionCursor};
use crate::bits;
use crate::{Error, Result};

/// Borrowed view of one chunk: its header plus its payload slice.
#[derive(Debug, Clone, Copy)]
pub struct ChunkContainer<'a> {
    pub(crate) header: ChunkHeader,
    pub(crate) payload: &'a [u8],
}

/// [`PartitionCursor`] over the chunks of a [`SlicedSet`], tracking the
/// payload offset as it moves.
#[derive(Debug, Clone)]
pub struct ChunkCursor<'a> {
    set: &'a SlicedSet,
    index: usize,
    offset: usize,
}

impl<'a> ChunkCursor<'a> {
    pub fn new(set: &'a SlicedSet) -> Self {
        ChunkCursor { set, index: 0, offset: set.payload_start() }
    }
}

impl PartitionCursor for ChunkCursor<'_> {
    type Container<'b>
        = ChunkContainer<'b>
    where
        Self: 'b;

    fn at_end(&self) -> bool {
        self.index >= self.set.chunk_count()
    }

    fn id(&self) -> u32 {
        self.set.header(self.index).id
    }

    fn len(&self) -> usize {
        self.set.header(self.index).len as usize
    }

    fn next(&mut self) {
        self.offset += self.set.header(self.index).encoded_bytes;
        self.index += 1;
    }

    fn advance(&mut self, id: u32) {
        if self.at_end() || self.id() >= id {
            return;
        }
        self.index = self.set.lower_bound_chunk(self.index + 1, id);
        if self.index < self.set.chunk_count() {
            self.offset = self.set.payload_offset(self.index);
        }
    }

    fn container(&self) -> ChunkContainer<'_> {
        ChunkContainer {
            header: self.set.header(self.index),
            payload: self.set.payload_at(self.index, self.offset),
        }
    }
}

/// AND of two aligned 32-byte bitmap slices.
#[inline]
fn bitmap_and_words(a: &[u8], b: &[u8], nwords: usize, base: u32, out: &mut [u32]) -> usize {
    let mut k = 0;
    for wi in 0..nwords {
        let mut w = bits::word_at(a, wi) & bits::word_at(b, wi);
        let word_base = base + wi as u32 * bits::WORD_BITS;
        while w != 0 {
            out[k] = word_base + w.trailing_zeros();
            k += 1;
            w &= w - 1;
        }
    }
    k
}

/// OR of two aligned bitmap slices.
#[inline]
fn bitmap_or_words(a: &[u8], b: &[u8], nwords: usize, base: u32, out: &mut [u32]) -> usize {
    let mut k = 0;
    for wi in 0..nwords {
        let mut w = bits::word_at(a, wi) | bits::word_at(b, wi);
        let word_base = base + wi as u32 * bits::WORD_BITS;
        while w != 0 {
            out[k] = word_base + w.trailing_zeros();
            k += 1;
            w &= w - 1;
        }
    }
    k
}

/// Intersection of a bitmap block with an array block: test each array
/// value against the bitmap.
#[inline]
fn bitmap_array_and(bitmap: &[u8], array: &[u8], base: u32, out: &mut [u32]) -> usize {
    let mut k = 0;
    for &v in array {
        if bits::test_bit(bitmap, v as u32) {
            out[k] = base + v as u32;
            k += 1;
        }
    }
    k
}

/// Union of two array blocks: plain two-pointer merge.
fn array_or(a: &[u8], b: &[u8], base: u32, out: &mut [u32]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out[k] = base + a[i] as u32;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out[k] = base + b[j] as u32;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out[k] = base + a[i] as u32;
                i += 1;
                j += 1;
            }
        }
        k += 1;
    }
    for &v in &a[i..] {
        out[k] = base + v as u32;
        k += 1;
    }
    for &v in &b[j..] {
        out[k] = base + v as u32;
        k += 1;
    }
    k
}

/// Intersection of one matched block pair.
fn block_and(l: &BlockRef<'_>, r: &BlockRef<'_>, base: u32, out: &mut [u32]) -> usize {
    match (l.is_bitmap(), r.is_bitmap()) {
        (true, true) => bitmap_and_words(l.payload, r.payload, DENSE_BLOCK_BYTES / 8, base, out),
        (true, false) => bitmap_array_and(l.payload, r.payload, base, out),
        (false, true) => bitmap_array_and(r.payload, l.payload, base, out),
        (false, false) => small_array_intersect(l.payload, r.payload, base, out),
    }
}

/// Union of one matched block pair.
fn block_or(l: &BlockRef<'_>, r: &BlockRef<'_>, base: u32, out: &mut [u32]) -> usize {
    match (l.is_bitmap(), r.is_bitmap()) {
        (true, true) => bitmap_or_words(l.payload, r.payload, DENSE_BLOCK_BYTES / 8, base, out),
        (false, false) => array_or(l.payload, r.payload, base, out),
        (true, false) => bitmap_array_or(l.payload, r.payload, base, out),
        (false, true) => bitmap_array_or(r.payload, l.payload, base, out),
    }
}

/// Union of a bitmap block with an array block: the array converts into a
/// copy of the bitmap, then the words decode in one pass.
fn bitmap_array_or(bitmap: &[u8], array: &[u8], base: u32, out: &mut [u32]) -> usize {
    let mut merged = [0u8; DENSE_BLOCK_BYTES];
    merged.copy_from_slice(bitmap);
    for &v in array {
        bits::set_bit(&mut merged, v as u32);
    }
    bits::decode_bitmap(&merged, base, out)
}

/// Intersection of a dense chunk with a sparse chunk: walk the sparse
/// side's blocks and pick out the aligned 32-byte window of the bitmap.
fn dense_sparse_and(
    dense: &[u8],
    sparse_header: &ChunkHeader,
    sparse: &[u8],
    base: u32,
    out: &mut [u32],
) -> usize {
    let mut k = 0;
    for block in BlockIter::new(sparse, sparse_header.block_count as usize) {
        let window = &dense[block.id as usize * DENSE_BLOCK_BYTES..][..DENSE_BLOCK_BYTES];
        let bbase = base + block.id * BLOCK_SPAN;
        if block.is_bitmap() {
            k += bitmap_and_words(window, block.payload, DENSE_BLOCK_BYTES / 8, bbase, &mut out[k..]);
        } else {
            k += bitmap_array_and(window, block.payload, bbase, &mut out[k..]);
        }
    }
    k
}

/// Union of a dense chunk with a sparse chunk: walk all 256 bitmap
/// windows, merging in the sparse block covering the same range when one
/// exists.
fn dense_sparse_or(
    dense: &[u8],
    sparse_header: &ChunkHeader,
    sparse: &[u8],
    base: u32,
    out: &mut [u32],
) -> usize {
    let mut blocks = BlockIter::new(sparse, sparse_header.block_count as usize).peekable();
    let mut k = 0;
    for b in 0..CHUNK_SPAN / BLOCK_SPAN {
        let window = &dense[b as usize * DENSE_BLOCK_BYTES..][..DENSE_BLOCK_BYTES];
        let bbase = base + b * BLOCK_SPAN;
        match blocks.peek() {
            Some(block) if block.id == b => {
                let block = blocks.next().unwrap();
                if block.is_bitmap() {
                    k += bitmap_or_words(
                        window,
                        block.payload,
                        DENSE_BLOCK_BYTES / 8,
                        bbase,
                        &mut out[k..],
                    );
                } else {
                    k += bitmap_array_or(window, block.payload, bbase, &mut out[k..]);
                }
            }
            _ => k += bits::decode_bitmap(window, bbase, &mut out[k..]),
        }
    }
    k
}

/// Intersection of one matched chunk pair.
fn chunk_and(l: &ChunkContainer<'_>, r: &ChunkContainer<'_>, out: &mut [u32]) -> usize {
    use ChunkKind::*;
    let base = l.header.base();
    match (l.header.kind, r.header.kind) {
        // a full chunk contains the whole range: the other side passes
        // through unchanged
        (Full, _) => decode_chunk(&r.header, r.payload, out),
        (_, Full) => decode_chunk(&l.header, l.payload, out),
        (Dense, Dense) => {
            bitmap_and_words(l.payload, r.payload, DENSE_CHUNK_BYTES / 8, base, out)
        }
        (Dense, Sparse) => dense_sparse_and(l.payload, &r.header, r.payload, base, out),
        (Sparse, Dense) => dense_sparse_and(r.payload, &l.header, l.payload, base, out),
        (Sparse, Sparse) => {
            let mut li = BlockIter::new(l.payload, l.header.block_count as usize);
            let mut ri = BlockIter::new(r.payload, r.header.block_count as usize);
            let (mut lb, mut rb) = (li.next(), ri.next());
            let mut k = 0;
            while let (Some(a), Some(b)) = (lb, rb) {
                if a.id < b.id {
                    lb = li.next();
                } else if b.id < a.id {
                    rb = ri.next();
                } else {
                    k += block_and(&a, &b, base + a.id * BLOCK_SPAN, &mut out[k..]);
                    lb = li.next();
                    rb = ri.next();
                }
            }
            k
        }
    }
}

/// Union of one matched chunk pair.
fn chunk_or(l: &ChunkContainer<'_>, r: &ChunkContainer<'_>, out: &mut [u32]) -> usize {
    use ChunkKind::*;
    let base = l.header.base();
    match (l.header.kind, r.header.kind) {
        // a full chunk absorbs anything in the same range
        (Full, _) | (_, Full) => {
            for (k, slot) in out[..CHUNK_SPAN as usize].iter_mut().enumerate() {
                *slot = base + k as u32;
            }
            CHUNK_SPAN as usize
        }
        (Dense, Dense) => bitmap_or_words(l.payload, r.payload, DENSE_CHUNK_BYTES / 8, base, out),
        (Dense, Sparse) => dense_sparse_or(l.payload, &r.header, r.payload, base, out),
        (Sparse, Dense) => dense_sparse_or(r.payload, &l.header, l.payload, base, out),
        (Sparse, Sparse) => {
            let mut li = BlockIter::new(l.payload, l.header.block_count as usize);
            let mut ri = BlockIter::new(r.payload, r.header.block_count as usize);
            let (mut lb, mut rb) = (li.next(), ri.next());
            let mut k = 0;
            while let (Some(a), Some(b)) = (lb, rb) {
                if a.id < b.id {
                    k += decode_block(&a, base, &mut out[k..]);
                    lb = li.next();
                } else if b.id < a.id {
                    k += decode_block(&b, base, &mut out[k..]);
                    rb = ri.next();
                } else {
                    k += block_or(&a, &b, base + a.id * BLOCK_SPAN, &mut out[k..]);
                    lb = li.next();
                    rb = ri.next();
                }
            }
            while let Some(a) = lb {
                k += decode_block(&a, base, &mut out[k..]);
                lb = li.next();
            }
            while let Some(b) = rb {
                k += decode_block(&b, base, &mut out[k..]);
                rb = ri.next();
            }
            k
        }
    }
}

/// Expands a single block.
fn decode_block(block: &BlockRef<'_>, chunk_base: u32, out: &mut [u32]) -> usize {
    let bbase = chunk_base + block.id * BLOCK_SPAN;
    if block.is_bitmap() {
        bits::decode_bitmap(block.payload, bbase, out)
    } else {
        for (k, &v) in block.payload.iter().enumerate() {
            out[k] = bbase + v as u32;
        }
        block.payload.len()
    }
}

impl SlicedSet {
    /// Cursor over this set's chunks, for the partition-matching driver.
    pub fn chunk_cursor(&self) -> ChunkCursor<'_> {
        ChunkCursor::new(self)
    }

    /// Writes the sorted intersection with `other` into `out`, which must
    /// hold at least `min(self.len(), other.len())` slots. Returns the
    /// count written.
    pub fn intersect_into(&self, other: &SlicedSet, out: &mut [u32]) -> Result<usize> {
        let needed = self.len().min(other.len());
        if out.len() < needed {
            return Err(Error::BufferTooSmall { needed, got: out.len() });
        }
        algebra::intersect_by_partition(
            &mut self.chunk_cursor(),
            &mut other.chunk_cursor(),
            |_id, l: &ChunkCursor, r: &ChunkCursor, out| chunk_and(&l.container(), &r.container(), out),
            out,
        )
    }

    /// Convenience wrapper over [`SlicedSet::intersect_into`].
    pub fn intersect(&self, other: &SlicedSet) -> Vec<u32> {
        let mut out = vec![0u32; self.len().min(other.len())];
        let n = self.intersect_into(other, &mut out).expect("buffer sized to worst case");
        out.truncate(n);
        out
    }

    /// Writes the sorted union with `other` into `out`, which must hold at
    /// least `self.len() + other.len()` slots. Returns the count written.
    pub fn union_into(&self, other: &SlicedSet, out: &mut [u32]) -> Result<usize> {
        let needed = self.len() + other.len();
        if out.len() < needed {
            return Err(Error::BufferTooSmall { needed, got: out.len() });
        }
        let mut a = self.chunk_cursor();
        let mut b = other.chunk_cursor();
        let mut k = 0;
        while !a.at_end() && !b.at_end() {
            let (ia, ib) = (a.id(), b.id());
            if ia < ib {
                let c = a.container();
                k += decode_chunk(&c.header, c.payload, &mut out[k..]);
                a.next();
            } else if ib < ia {
                let c = b.container();
                k += decode_chunk(&c.header, c.payload, &mut out[k..]);
                b.next();
            } else {
                k += chunk_or(&a.container(), &b.container(), &mut out[k..]);
                a.next();
                b.next();
            }
        }
        while !a.at_end() {
            let c = a.container();
            k += decode_chunk(&c.header, c.payload, &mut out[k..]);
            a.next();
        }
        while !b.at_end() {
            let c = b.container();
            k += decode_chunk(&c.header, c.payload, &mut out[k..]);
            b.next();
        }
        Ok(k)
    }

    /// Convenience wrapper over [`SlicedSet::union_into`].
    pub fn union(&self, other: &SlicedSet) -> Vec<u32> {
        let mut out = vec![0u32; self.len() + other.len()];
        let n = self.union_into(other, &mut out).expect("buffer sized to worst case");
        out.truncate(n);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::SortedSequence;

    fn build(values: &[u32]) -> SlicedSet {
        let max = *values.last().unwrap();
        SlicedSet::build(&SortedSequence::new(values.to_vec(), max).unwrap())
    }

    fn and_oracle(a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().filter(|v| b.binary_search(v).is_ok()).copied().collect()
    }

    fn or_oracle(a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut v: Vec<u32> = a.iter().chain(b).copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn check_pair(a: &[u32], b: &[u32]) {
        let (sa, sb) = (build(a), build(b));
        assert_eq!(sa.intersect(&sb), and_oracle(a, b), "and");
        assert_eq!(sb.intersect(&sa), and_oracle(a, b), "and swapped");
        assert_eq!(sa.union(&sb), or_oracle(a, b), "or");
        assert_eq!(sb.union(&sa), or_oracle(a, b), "or swapped");
    }

    #[test]
    fn shape_pair_matrix() {
        let full: Vec<u32> = (0..CHUNK_SPAN).collect();
        let dense: Vec<u32> = (0..CHUNK_SPAN / 2).map(|v| v * 2).collect();
        let sparse_arrays: Vec<u32> = (0..200).map(|v| v * 300).collect();
        // 128 values per 256-wide block: every block encodes as a bitmap
        let sparse_bitmaps: Vec<u32> = (0..2048).map(|v| v * 2).collect();
        let shapes = [&full, &dense, &sparse_arrays, &sparse_bitmaps];
        for a in &shapes {
            for b in &shapes {
                check_pair(a, b);
            }
        }
    }

    #[test]
    fn disjoint_and_overlapping_chunks() {
        let a: Vec<u32> = vec![1, 2, CHUNK_SPAN + 5, 3 * CHUNK_SPAN];
        let b: Vec<u32> = vec![2, 2 * CHUNK_SPAN, 3 * CHUNK_SPAN, 3 * CHUNK_SPAN + 1];
        check_pair(&a, &b);
        // entirely disjoint chunk ranges
        let c: Vec<u32> = vec![10 * CHUNK_SPAN, 10 * CHUNK_SPAN + 9];
        check_pair(&a, &c);
    }

    #[test]
    fn full_chunk_absorbs_and_passes_through() {
        let full: Vec<u32> = (0..CHUNK_SPAN).collect();
        let probe: Vec<u32> = vec![0, 7, 400, 65_535];
        let (sf, sp) = (build(&full), build(&probe));
        assert_eq!(sf.intersect(&sp), probe);
        assert_eq!(sf.union(&sp), full);
        let two_full: Vec<u32> = (0..2 * CHUNK_SPAN).collect();
        check_pair(&full, &two_full);
    }

    #[test]
    fn block_kernel_matrix_inside_one_chunk() {
        // arrays (< 31 values) and bitmaps (>= 31) in matched blocks
        let arr_a: Vec<u32> = (0..20).map(|v| v * 3).collect(); // block 0 array
        let arr_b: Vec<u32> = (0..20).map(|v| v * 2).collect();
        let bm_a: Vec<u32> = (0..200).map(|v| 256 + v).collect(); // block 1 bitmap
        let bm_b: Vec<u32> = (0..100).map(|v| 256 + v * 2).collect();
        let mixed_a: Vec<u32> = arr_a.iter().chain(&bm_a).copied().collect();
        let mixed_b: Vec<u32> = arr_b.iter().chain(&bm_b).copied().collect();
        check_pair(&mixed_a, &mixed_b);
        // bitmap meets array in the same block
        let arr_in_block1: Vec<u32> = vec![256, 300, 400];
        check_pair(&bm_a, &arr_in_block1);
        // block present on one side only
        let lonely: Vec<u32> = vec![5000];
        check_pair(&mixed_a, &lonely);
    }

    #[test]
    fn dense_sparse_kernels() {
        let dense: Vec<u32> = (0..CHUNK_SPAN).filter(|v| v % 2 == 0).collect();
        let sparse_arr: Vec<u32> = vec![1, 2, 512, 1000, 40_000];
        let sparse_bm: Vec<u32> = (0..64).map(|v| v * 4).collect();
        check_pair(&dense, &sparse_arr);
        check_pair(&dense, &sparse_bm);
    }

    #[test]
    fn buffer_too_small_is_reported() {
        let a = build(&[1, 2, 3]);
        let b = build(&[1, 2, 3]);
        let mut out = [0u32; 2];
        assert_eq!(
            a.intersect_into(&b, &mut out),
            Err(Error::BufferTooSmall { needed: 3, got: 2 })
        );
        let mut out = [0u32; 5];
        assert_eq!(
            a.union_into(&b, &mut out),
            Err(Error::BufferTooSmall { needed: 6, got: 5 })
        );
    }

    #[test]
    fn cursor_advance_jumps_and_stops() {
        let s = build(&[0, CHUNK_SPAN, 5 * CHUNK_SPAN, 9 * CHUNK_SPAN]);
        let mut c = s.chunk_cursor();
        assert_eq!(c.id(), 0);
        c.advance(3);
        assert_eq!(c.id(), 5);
        // advancing to the current id is a no-op
        c.advance(5);
        assert_eq!(c.id(), 5);
        c.advance(10);
        assert!(c.at_end());
    }
}
