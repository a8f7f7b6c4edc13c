//! Point and bulk queries over a [`SlicedSet`].
//!
//! Every query walks the same path the layout dictates: pick the chunk
//! (rank directory for positional access, header binary search by the top
//! sixteen bits for successor search), then dispatch on the container
//! shape inside it.

use super::{BlockIter, BlockRef, ChunkHeader, ChunkKind, SlicedSet, BLOCK_SPAN, CHUNK_SPAN};
use crate::bits;
use crate::{Error, Result};

/// Expands one chunk into `out`; returns the count written.
pub(crate) fn decode_chunk(h: &ChunkHeader, payload: &[u8], out: &mut [u32]) -> usize {
    let base = h.base();
    match h.kind {
        ChunkKind::Full => {
            for (k, slot) in out[..CHUNK_SPAN as usize].iter_mut().enumerate() {
                *slot = base + k as u32;
            }
            CHUNK_SPAN as usize
        }
        ChunkKind::Dense => bits::decode_bitmap(payload, base, out),
        ChunkKind::Sparse => {
            let mut k = 0;
            for block in BlockIter::new(payload, h.block_count as usize) {
                let bbase = base + block.id * BLOCK_SPAN;
                if block.is_bitmap() {
                    k += bits::decode_bitmap(block.payload, bbase, &mut out[k..]);
                } else {
                    for &v in block.payload {
                        out[k] = bbase + v as u32;
                        k += 1;
                    }
                }
            }
            k
        }
    }
}

/// Smallest value of a non-empty block.
#[inline]
fn block_min(block: &BlockRef<'_>) -> u32 {
    let low = if block.is_bitmap() {
        bits::next_set_bit(block.payload, 0).expect("stored blocks are non-empty")
    } else {
        block.payload[0] as u32
    };
    block.id * BLOCK_SPAN + low
}

/// Smallest value of a chunk, relative to its base.
fn chunk_min(h: &ChunkHeader, payload: &[u8]) -> u32 {
    match h.kind {
        ChunkKind::Full => 0,
        ChunkKind::Dense => bits::next_set_bit(payload, 0).expect("stored chunks are non-empty"),
        ChunkKind::Sparse => block_min(
            &BlockIter::new(payload, h.block_count as usize)
                .next()
                .expect("sparse chunks hold at least one block"),
        ),
    }
}

/// First value `>= low16` inside a chunk, relative to its base.
fn chunk_next_geq(h: &ChunkHeader, payload: &[u8], low16: u32) -> Option<u32> {
    match h.kind {
        ChunkKind::Full => Some(low16),
        ChunkKind::Dense => bits::next_set_bit(payload, low16),
        ChunkKind::Sparse => {
            let target_block = low16 >> 8;
            let low8 = low16 & 0xFF;
            // the last directory entry bounds the chunk from above, making
            // a miss one byte-compare instead of a directory walk
            let last_id = payload[2 * (h.block_count as usize - 1)] as u32;
            if last_id < target_block {
                return None;
            }
            for block in BlockIter::new(payload, h.block_count as usize) {
                if block.id < target_block {
                    continue;
                }
                if block.id > target_block {
                    return Some(block_min(&block));
                }
                // the block covering low16: search within, fall through to
                // the next block on a miss
                if block.is_bitmap() {
                    if let Some(bit) = bits::next_set_bit(block.payload, low8) {
                        return Some(block.id * BLOCK_SPAN + bit);
                    }
                } else if let Some(&v) = block.payload.iter().find(|&&v| v as u32 >= low8) {
                    return Some(block.id * BLOCK_SPAN + v as u32);
                }
            }
            None
        }
    }
}

/// Value at `rank` inside a chunk, relative to its base. `rank < len`.
fn chunk_select(h: &ChunkHeader, payload: &[u8], rank: u32) -> u32 {
    debug_assert!(rank < h.len);
    match h.kind {
        ChunkKind::Full => rank,
        ChunkKind::Dense => {
            bits::select_in_bitmap(payload, rank).expect("rank is below the chunk length")
        }
        ChunkKind::Sparse => {
            let mut remaining = rank;
            for block in BlockIter::new(payload, h.block_count as usize) {
                if remaining < block.len {
                    let low = if block.is_bitmap() {
                        bits::select_in_bitmap(block.payload, remaining)
                            .expect("rank is below the block length")
                    } else {
                        block.payload[remaining as usize] as u32
                    };
                    return block.id * BLOCK_SPAN + low;
                }
                remaining -= block.len;
            }
            unreachable!("rank below chunk length always lands in a block")
        }
    }
}

impl SlicedSet {
    /// Writes every stored value into `out` in increasing order; returns
    /// the count, which always equals `len()`.
    pub fn decode_into(&self, out: &mut [u32]) -> Result<usize> {
        if out.len() < self.len() {
            return Err(Error::BufferTooSmall { needed: self.len(), got: out.len() });
        }
        let mut k = 0;
        let mut offset = self.payload_start();
        for ci in 0..self.chunk_count() {
            let h = self.header(ci);
            k += decode_chunk(&h, self.payload_at(ci, offset), &mut out[k..]);
            offset += h.encoded_bytes;
        }
        debug_assert_eq!(k, self.len());
        Ok(k)
    }

    /// Convenience wrapper over [`SlicedSet::decode_into`].
    pub fn decode(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.len()];
        self.decode_into(&mut out).expect("buffer sized to len");
        out
    }

    /// Value at position `index` (zero-based, in sorted order), or `None`
    /// past the end. Jumps through the rank directory, then scans at most
    /// one directory stride of chunk headers.
    pub fn get(&self, index: usize) -> Option<u32> {
        if index >= self.len() {
            return None;
        }
        let (mut ci, mut cum, mut offset) = self.directory_entry_for(index);
        loop {
            let h = self.header(ci);
            if (index as u64) < cum + h.len as u64 {
                let rank = (index as u64 - cum) as u32;
                let payload = self.payload_at(ci, offset);
                return Some(h.base() + chunk_select(&h, payload, rank));
            }
            cum += h.len as u64;
            offset += h.encoded_bytes;
            ci += 1;
        }
    }

    /// Smallest stored value `>= lower`, or `None` if every value is
    /// smaller. The chunk is found by binary search on the top sixteen
    /// bits; only on an in-chunk miss does the search move to the next
    /// populated chunk's minimum.
    pub fn next_geq(&self, lower: u32) -> Option<u32> {
        let target = lower >> 16;
        let mut ci = self.lower_bound_chunk(0, target);
        if ci == self.chunk_count() {
            return None;
        }
        let mut offset = self.payload_offset(ci);
        let h = self.header(ci);
        if h.id == target {
            let payload = self.payload_at(ci, offset);
            if let Some(rel) = chunk_next_geq(&h, payload, lower & 0xFFFF) {
                return Some(h.base() + rel);
            }
            offset += h.encoded_bytes;
            ci += 1;
            if ci == self.chunk_count() {
                return None;
            }
        }
        let h = self.header(ci);
        Some(h.base() + chunk_min(&h, self.payload_at(ci, offset)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::SortedSequence;

    fn build(values: Vec<u32>) -> (SlicedSet, Vec<u32>) {
        let max = *values.last().unwrap();
        let s = SlicedSet::build(&SortedSequence::new(values.clone(), max).unwrap());
        (s, values)
    }

    /// A set exercising every container shape: a sparse chunk with array
    /// and bitmap blocks, an empty chunk range, a full chunk, and a dense
    /// chunk.
    fn mixed() -> (SlicedSet, Vec<u32>) {
        let mut values = vec![1, 5, 250, 256, 300];
        values.extend(512..612); // bitmap block in chunk 0
        values.extend(3 * CHUNK_SPAN..4 * CHUNK_SPAN); // full chunk 3
        values.extend((0..40_000).map(|v| 5 * CHUNK_SPAN + v)); // dense chunk 5
        build(values)
    }

    #[test]
    fn decode_restores_input() {
        let cases = [
            vec![0],
            vec![u32::MAX],
            (0..CHUNK_SPAN).collect(),
            (0..1000).map(|v| v * 97).collect(),
            mixed().1,
        ];
        for values in cases {
            let (s, expect) = build(values);
            assert_eq!(s.decode(), expect);
        }
    }

    #[test]
    fn decode_rejects_short_buffers() {
        let (s, _) = build(vec![1, 2, 3]);
        let mut out = [0u32; 2];
        assert_eq!(
            s.decode_into(&mut out),
            Err(Error::BufferTooSmall { needed: 3, got: 2 })
        );
    }

    #[test]
    fn get_matches_direct_indexing() {
        let (s, values) = mixed();
        for (i, &v) in values.iter().enumerate() {
            assert_eq!(s.get(i), Some(v), "index {i}");
        }
        assert_eq!(s.get(values.len()), None);
        assert_eq!(s.get(usize::MAX), None);
    }

    #[test]
    fn get_crosses_directory_strides() {
        // hundreds of chunks, one value apiece, so positional access has
        // to hop directory samples
        let values: Vec<u32> = (0..300).map(|i| i * CHUNK_SPAN + 7).collect();
        let (s, expect) = build(values);
        for (i, &v) in expect.iter().enumerate() {
            assert_eq!(s.get(i), Some(v));
        }
    }

    #[test]
    fn next_geq_of_members_is_identity() {
        let (s, values) = mixed();
        for &v in &values {
            assert_eq!(s.next_geq(v), Some(v));
        }
    }

    #[test]
    fn next_geq_lands_on_successors() {
        let (s, values) = mixed();
        // probe between every adjacent pair
        for w in values.windows(2) {
            if w[0] + 1 < w[1] {
                assert_eq!(s.next_geq(w[0] + 1), Some(w[1]), "between {} and {}", w[0], w[1]);
            }
        }
        assert_eq!(s.next_geq(0), Some(values[0]));
        assert_eq!(s.next_geq(*values.last().unwrap() + 1), None);
        assert_eq!(s.next_geq(u32::MAX), None);
    }

    #[test]
    fn next_geq_skips_unpopulated_chunks() {
        let (s, _) = build(vec![100, 10 * CHUNK_SPAN + 3]);
        // target chunk 4 is unpopulated; the next populated chunk wins
        assert_eq!(s.next_geq(4 * CHUNK_SPAN), Some(10 * CHUNK_SPAN + 3));
        // a miss inside a populated chunk also moves on
        assert_eq!(s.next_geq(101), Some(10 * CHUNK_SPAN + 3));
    }

    #[test]
    fn next_geq_block_boundaries() {
        let (s, _) = build(vec![0, 255, 256, 511, 513]);
        assert_eq!(s.next_geq(1), Some(255));
        assert_eq!(s.next_geq(255), Some(255));
        assert_eq!(s.next_geq(257), Some(511));
        assert_eq!(s.next_geq(512), Some(513));
    }

    #[test]
    fn next_geq_top_of_universe() {
        let (s, _) = build(vec![u32::MAX]);
        assert_eq!(s.next_geq(u32::MAX), Some(u32::MAX));
        assert_eq!(s.next_geq(0), Some(u32::MAX));
        let (s, _) = build(vec![u32::MAX - 1]);
        assert_eq!(s.next_geq(u32::MAX), None);
    }
}
