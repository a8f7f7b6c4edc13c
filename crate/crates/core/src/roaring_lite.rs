//! Two-level chunked sets in the classic array-or-bitmap style.
//!
//! The universe splits into 2^16-wide chunks keyed by the high half of the
//! value; only populated chunks are stored. A chunk holding fewer than
//! [`ARRAY_MAX_LEN`] values keeps them as a sorted `u16` array, anything
//! denser becomes a 1024-word bitmap. There is no finer subdivision, no
//! run encoding, and — deliberately — no positional directory: rank-style
//! access walks the chunk headers and accumulates cardinalities. This is
//! the reference point the sliced representation is measured against.
//!
//! Serialized layout, all integers little-endian:
//!
//! ```text
//! [chunk count - 1 : u16]
//! [id:u16, len-1:u16 per chunk, ascending id]
//! [payloads in id order: arrays as u16 values, bitmaps as 8192 bytes]
//! ```

use crate::algebra::{self, PartitionCursor};
use crate::bits;

use crate::sequence::SortedSequence;
use crate::{Error, Result};

/// Chunks below this cardinality store a sorted array, the rest a bitmap.
pub const ARRAY_MAX_LEN: usize = 4096;

const CHUNK_WORDS: usize = (1 << 16) / 64;
const BITMAP_BYTES: usize = CHUNK_WORDS * 8;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Container {
    Array(Vec<u16>),
    Bitmap(Box<[u64; CHUNK_WORDS]>),
}

impl Container {
    fn payload_bytes(&self) -> usize {
        match self {
            Container::Array(values) => 2 * values.len(),
            Container::Bitmap(_) => BITMAP_BYTES,
        }
    }
}

#[inline]
fn word_test(words: &[u64; CHUNK_WORDS], v: u16) -> bool {
    words[(v >> 6) as usize] & (1u64 << (v & 63)) != 0
}

/// Borrowed view of one chunk's container.
#[derive(Debug, Clone, Copy)]
pub enum ContainerRef<'a> {
    Array(&'a [u16]),
    Bitmap(&'a [u64; CHUNK_WORDS]),
}

/// A sorted integer set stored as per-chunk arrays and bitmaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoaringLiteSet {
    keys: Vec<u16>,
    cards: Vec<u32>,
    containers: Vec<Container>,
    len: usize,
}

impl RoaringLiteSet {
    pub fn build(seq: &SortedSequence) -> RoaringLiteSet {
        let values = seq.values();
        let mut keys = Vec::new();
        let mut cards = Vec::new();
        let mut containers = Vec::new();
        let mut start = 0;
        while start < values.len() {
            let id = values[start] >> 16;
            let end = start
                + values[start..].partition_point(|&v| v >> 16 == id);
            let chunk = &values[start..end];
            let container = if chunk.len() < ARRAY_MAX_LEN {
                Container::Array(chunk.iter().map(|&v| v as u16).collect())
            } else {
                let mut words = Box::new([0u64; CHUNK_WORDS]);
                for &v in chunk {
                    let low = v as u16;
                    words[(low >> 6) as usize] |= 1u64 << (low & 63);
                }
                Container::Bitmap(words)
            };
            keys.push(id as u16);
            cards.push(chunk.len() as u32);
            containers.push(container);
            start = end;
        }
        RoaringLiteSet { keys, cards, containers, len: values.len() }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn num_chunks(&self) -> usize {
        self.keys.len()
    }

    /// Largest stored value.
    pub fn last_value(&self) -> u32 {
        let last = self.containers.len() - 1;
        let base = (self.keys[last] as u32) << 16;
        match &self.containers[last] {
            Container::Array(values) => base + *values.last().expect("containers are non-empty") as u32,
            Container::Bitmap(words) => {
                let wi = words.iter().rposition(|&w| w != 0).expect("bitmaps are non-empty");
                base + wi as u32 * 64 + (63 - words[wi].leading_zeros())
            }
        }
    }

    /// Serialized size in bytes.
    pub fn size_bytes(&self) -> usize {
        2 + 4 * self.keys.len()
            + self.containers.iter().map(Container::payload_bytes).sum::<usize>()
    }

    fn decode_container(&self, ci: usize, out: &mut [u32]) -> usize {
        let base = (self.keys[ci] as u32) << 16;
        match &self.containers[ci] {
            Container::Array(values) => {
                for (k, &v) in values.iter().enumerate() {
                    out[k] = base + v as u32;
                }
                values.len()
            }
            Container::Bitmap(words) => bits::decode_words(&words[..], base, out),
        }
    }

    /// Writes all values into `out`, which must hold at least `len()`
    /// slots. Returns the count written.
    pub fn decode_into(&self, out: &mut [u32]) -> Result<usize> {
        if out.len() < self.len {
            return Err(Error::BufferTooSmall { needed: self.len, got: out.len() });
        }
        let mut k = 0;
        for ci in 0..self.containers.len() {
            k += self.decode_container(ci, &mut out[k..]);
        }
        Ok(k)
    }

    /// Decodes the whole set into a fresh vector.
    pub fn decode(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.len];
        self.decode_into(&mut out).expect("buffer sized to len");
        out
    }

    /// Value at position `index`, or `None` past the end. Walks the chunk
    /// headers linearly — there is no sampled prefix-sum directory here.
    pub fn get(&self, index: usize) -> Option<u32> {
        if index >= self.len {
            return None;
        }
        let mut before = 0usize;
        for ci in 0..self.keys.len() {
            let card = self.cards[ci] as usize;
            if index < before + card {
                let rank = (index - before) as u32;
                let base = (self.keys[ci] as u32) << 16;
                return match &self.containers[ci] {
                    Container::Array(values) => Some(base + values[rank as usize] as u32),
                    Container::Bitmap(words) => {
                        bits::select_in_words(&words[..], rank).map(|b| base + b)
                    }
                };
            }
            before += card;
        }
        unreachable!("index checked against the total length")
    }

    /// Smallest stored value `>= lower`, or `None` if every value is
    /// smaller.
    pub fn next_geq(&self, lower: u32) -> Option<u32> {
        let target = (lower >> 16) as u16;
        let mut ci = self.keys.partition_point(|&k| k < target);
        while ci < self.keys.len() {
            let base = (self.keys[ci] as u32) << 16;
            // in later chunks every value qualifies; only the target chunk
            // needs a real probe
            let low = if self.keys[ci] == target { lower as u16 } else { 0 };
            let hit = match &self.containers[ci] {
                Container::Array(values) => {
                    let j = values.partition_point(|&v| v < low);
                    values.get(j).map(|&v| base + v as u32)
                }
                Container::Bitmap(words) => {
                    bits::next_set_bit_words(&words[..], low as u32).map(|b| base + b)
                }
            };
            if hit.is_some() {
                return hit;
            }
            ci += 1;
        }
        None
    }

    /// Cursor over this set's chunks, for the partition-matching driver.
    pub fn chunk_cursor(&self) -> RoaringCursor<'_> {
        RoaringCursor { set: self, pos: 0 }
    }

    /// Writes the sorted intersection with `other` into `out`, which must
    /// hold at least `min(self.len(), other.len())` slots. Returns the
    /// count written.
    pub fn intersect_into(&self, other: &RoaringLiteSet, out: &mut [u32]) -> Result<usize> {
        let needed = self.len.min(other.len);
        if out.len() < needed {
            return Err(Error::BufferTooSmall { needed, got: out.len() });
        }
        algebra::intersect_by_partition(
            &mut self.chunk_cursor(),
            &mut other.chunk_cursor(),
            |id, l: &RoaringCursor, r: &RoaringCursor, out| {
                container_and(id << 16, l.container(), r.container(), out)
            },
            out,
        )
    }

    /// Convenience wrapper over [`RoaringLiteSet::intersect_into`].
    pub fn intersect(&self, other: &RoaringLiteSet) -> Vec<u32> {
        let mut out = vec![0u32; self.len.min(other.len)];
        let n = self.intersect_into(other, &mut out).expect("buffer sized to worst case");
        out.truncate(n);
        out
    }

    /// Writes the sorted union with `other` into `out`, which must hold at
    /// least `self.len() + other.len()` slots. Returns the count written.
    pub fn union_into(&self, other: &RoaringLiteSet, out: &mut [u32]) -> Result<usize> {
        let needed = self.len + other.len;
        if out.len() < needed {
            return Err(Error::BufferTooSmall { needed, got: out.len() });
        }
        let mut a = self.chunk_cursor();
        let mut b = other.chunk_cursor();
        let mut k = 0;
        while !a.at_end() && !b.at_end() {
            let (ia, ib) = (a.id(), b.id());
            if ia < ib {
                k += self.decode_container(a.pos, &mut out[k..]);
                a.next();
            } else if ib < ia {
                k += other.decode_container(b.pos, &mut out[k..]);
                b.next();
            } else {
                k += container_or(ia << 16, a.container(), b.container(), &mut out[k..]);
                a.next();
                b.next();
            }
        }
        while !a.at_end() {
            k += self.decode_container(a.pos, &mut out[k..]);
            a.next();
        }
        while !b.at_end() {
            k += other.decode_container(b.pos, &mut out[k..]);
            b.next();
        }
        Ok(k)
    }

    /// Convenience wrapper over [`RoaringLiteSet::union_into`].
    pub fn union(&self, other: &RoaringLiteSet) -> Vec<u32> {
        let mut out = vec![0u32; self.len + other.len];
        let n = self.union_into(other, &mut out).expect("buffer sized to worst case");
        out.truncate(n);
        out
    }

    /// Per-chunk statistics, in order.
    pub fn chunks(&self) -> impl Iterator<Item = RoaringChunkInfo> + '_ {
        (0..self.keys.len()).map(|ci| RoaringChunkInfo {
            id: self.keys[ci] as u32,
            len: self.cards[ci],
            is_bitmap: matches!(self.containers[ci], Container::Bitmap(_)),
            payload_bytes: self.containers[ci].payload_bytes(),
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.size_bytes());
        out.extend_from_slice(&((self.keys.len() - 1) as u16).to_le_bytes());
        for ci in 0..self.keys.len() {
            out.extend_from_slice(&self.keys[ci].to_le_bytes());
            out.extend_from_slice(&((self.cards[ci] - 1) as u16).to_le_bytes());
        }
        for container in &self.containers {
            match container {
                Container::Array(values) => {
                    for &v in values {
                        out.extend_from_slice(&v.to_le_bytes());
                    }
                }
                Container::Bitmap(words) => {
                    for &w in words.iter() {
                        out.extend_from_slice(&w.to_le_bytes());
                    }
                }
            }
        }
        out
    }

    /// Parses and validates a serialized set: header arithmetic, ascending
    /// chunk ids, sorted arrays, and bitmap population counts that match
    /// the declared cardinalities.
    pub fn from_bytes(bytes: &[u8]) -> Result<RoaringLiteSet> {
        if bytes.len() < 2 {
            return Err(Error::malformed("buffer shorter than the chunk count"));
        }
        let count = u16::from_le_bytes(bytes[0..2].try_into().unwrap()) as usize + 1;
        let headers_end = 2 + 4 * count;
        if bytes.len() < headers_end {
            return Err(Error::malformed("buffer truncated inside the chunk headers"));
        }
        let mut keys = Vec::with_capacity(count);
        let mut cards = Vec::with_capacity(count);
        for ci in 0..count {
            let at = 2 + 4 * ci;
            let id = u16::from_le_bytes(bytes[at..at + 2].try_into().unwrap());
            let card = u16::from_le_bytes(bytes[at + 2..at + 4].try_into().unwrap()) as u32 + 1;
            if keys.last().is_some_and(|&prev| prev >= id) {
                return Err(Error::malformed("chunk ids are not strictly increasing"));
            }
            keys.push(id);
            cards.push(card);
        }
        let mut containers = Vec::with_capacity(count);
        let mut at = headers_end;
        let mut len = 0usize;
        for &card in &cards {
            let container = if (card as usize) < ARRAY_MAX_LEN {
                let nbytes = 2 * card as usize;
                if bytes.len() - at < nbytes {
                    return Err(Error::malformed("buffer truncated inside an array container"));
                }
                let values: Vec<u16> = bytes[at..at + nbytes]
                    .chunks_exact(2)
                    .map(|b| u16::from_le_bytes(b.try_into().unwrap()))
                    .collect();
                if values.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::malformed("array container is not strictly increasing"));
                }
                at += nbytes;
                Container::Array(values)
            } else {
                if bytes.len() - at < BITMAP_BYTES {
                    return Err(Error::malformed("buffer truncated inside a bitmap container"));
                }
                let mut words = Box::new([0u64; CHUNK_WORDS]);
                for (wi, chunk) in bytes[at..at + BITMAP_BYTES].chunks_exact(8).enumerate() {
                    words[wi] = u64::from_le_bytes(chunk.try_into().unwrap());
                }
                let popcount: u32 = words.iter().map(|w| w.count_ones()).sum();
                if popcount != card {
                    return Err(Error::malformed(
                        "bitmap population count disagrees with the declared cardinality",
                    ));
                }
                at += BITMAP_BYTES;
                Container::Bitmap(words)
            };
            len += card as usize;
            containers.push(container);
        }
        if at != bytes.len() {
            return Err(Error::malformed("trailing bytes after the last container"));
        }
        Ok(RoaringLiteSet { keys, cards, containers, len })
    }
}

/// Per-chunk statistics reported by [`RoaringLiteSet::chunks`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoaringChunkInfo {
    pub id: u32,
    pub len: u32,
    pub is_bitmap: bool,
    pub payload_bytes: usize,
}

/// [`PartitionCursor`] over the chunks of a [`RoaringLiteSet`].
#[derive(Debug, Clone)]
pub struct RoaringCursor<'a> {
    set: &'a RoaringLiteSet,
    pos: usize,
}

impl PartitionCursor for RoaringCursor<'_> {
    type Container<'b>
        = ContainerRef<'b>
    where
        Self: 'b;

    fn at_end(&self) -> bool {
        self.pos >= self.set.keys.len()
    }

    fn id(&self) -> u32 {
        self.set.keys[self.pos] as u32
    }

    fn len(&self) -> usize {
        self.set.cards[self.pos] as usize
    }

    fn next(&mut self) {
        self.pos += 1;
    }

    fn advance(&mut self, id: u32) {
        self.pos += self.set.keys[self.pos..].partition_point(|&k| (k as u32) < id);
    }

    fn container(&self) -> ContainerRef<'_> {
        match &self.set.containers[self.pos] {
            Container::Array(values) => ContainerRef::Array(values),
            Container::Bitmap(words) => ContainerRef::Bitmap(words),
        }
    }
}

fn array_array_and(a: &[u16], b: &[u16], base: u32, out: &mut [u32]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out[k] = base + a[i] as u32;
                k += 1;
                i += 1;
                j += 1;
            }
        }
    }
    k
}

fn array_bitmap_and(arr: &[u16], words: &[u64; CHUNK_WORDS], base: u32, out: &mut [u32]) -> usize {
    let mut k = 0;
    for &v in arr {
        if word_test(words, v) {
            out[k] = base + v as u32;
            k += 1;
        }
    }
    k
}

fn container_and(base: u32, l: ContainerRef<'_>, r: ContainerRef<'_>, out: &mut [u32]) -> usize {
    use ContainerRef::*;
    match (l, r) {
        (Array(a), Array(b)) => array_array_and(a, b, base, out),
        (Array(a), Bitmap(w)) | (Bitmap(w), Array(a)) => array_bitmap_and(a, w, base, out),
        (Bitmap(wa), Bitmap(wb)) => {
            let mut k = 0;
            for wi in 0..CHUNK_WORDS {
                let mut w = wa[wi] & wb[wi];
                let word_base = base + wi as u32 * 64;
                while w != 0 {
                    out[k] = word_base + w.trailing_zeros();
                    k += 1;
                    w &= w - 1;
                }
            }
            k
        }
    }
}

fn array_array_or(a: &[u16], b: &[u16], base: u32, out: &mut [u32]) -> usize {
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

fn array_bitmap_or(arr: &[u16], words: &[u64; CHUNK_WORDS], base: u32, out: &mut [u32]) -> usize {
    let mut merged = *words;
    for &v in arr {
        merged[(v >> 6) as usize] |= 1u64 << (v & 63);
    }
    bits::decode_words(&merged, base, out)
}

fn container_or(base: u32, l: ContainerRef<'_>, r: ContainerRef<'_>, out: &mut [u32]) -> usize {
    use ContainerRef::*;
    match (l, r) {
        (Array(a), Array(b)) => array_array_or(a, b, base, out),
        (Array(a), Bitmap(w)) | (Bitmap(w), Array(a)) => array_bitmap_or(a, w, base, out),
        (Bitmap(wa), Bitmap(wb)) => {
            let mut k = 0;
            for wi in 0..CHUNK_WORDS {
                let mut w = wa[wi] | wb[wi];
                let word_base = base + wi as u32 * 64;
                while w != 0 {
                    out[k] = word_base + w.trailing_zeros();
                    k += 1;
                    w &= w - 1;
                }
            }
            k
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(values: &[u32]) -> RoaringLiteSet {
        let max = *values.last().unwrap();
        RoaringLiteSet::build(&SortedSequence::new(values.to_vec(), max).unwrap())
    }

    #[test]
    fn container_rule_boundary() {
        let arr: Vec<u32> = (0..4095).collect();
        let s = set(&arr);
        let info: Vec<RoaringChunkInfo> = s.chunks().collect();
        assert!(!info[0].is_bitmap);
        assert_eq!(info[0].payload_bytes, 2 * 4095);

        let bm: Vec<u32> = (0..4096).collect();
        let s = set(&bm);
        let info: Vec<RoaringChunkInfo> = s.chunks().collect();
        assert!(info[0].is_bitmap);
        assert_eq!(info[0].payload_bytes, BITMAP_BYTES);
    }

    #[test]
    fn decode_restores_input() {
        let shapes: Vec<Vec<u32>> = vec![
            vec![0],
            vec![u32::MAX],
            (0..10_000).map(|v| v * 13).collect(),
            (0..70_000).collect(),
            vec![1, 1 << 16, 1 << 20, u32::MAX - 1],
        ];
        for values in shapes {
            assert_eq!(set(&values).decode(), values);
        }
    }

    #[test]
    fn golden_three_element_serialization() {
        let s = set(&[1, 2, 3]);
        let expect = [
            0x00, 0x00, // one chunk
            0x00, 0x00, 0x02, 0x00, // id 0, three values
            0x01, 0x00, 0x02, 0x00, 0x03, 0x00, // the array payload
        ];
        assert_eq!(s.to_bytes(), expect);
        assert_eq!(s.size_bytes(), expect.len());
    }

    #[test]
    fn get_walks_chunks_linearly() {
        let values: Vec<u32> = (0..5000)
            .map(|v| v * 7)
            .chain((1 << 20)..(1 << 20) + 5000)
            .chain([u32::MAX - 2, u32::MAX])
            .collect();
        let s = set(&values);
        for (i, &v) in values.iter().enumerate() {
            assert_eq!(s.get(i), Some(v), "index {i}");
        }
        assert_eq!(s.get(values.len()), None);
    }

    #[test]
    fn next_geq_crosses_chunks() {
        let values: Vec<u32> = vec![5, 100, (1 << 16) + 3, 5 << 16];
        let s = set(&values);
        assert_eq!(s.next_geq(0), Some(5));
        assert_eq!(s.next_geq(5), Some(5));
        assert_eq!(s.next_geq(6), Some(100));
        assert_eq!(s.next_geq(101), Some((1 << 16) + 3));
        assert_eq!(s.next_geq(2 << 16), Some(5 << 16));
        assert_eq!(s.next_geq((5 << 16) + 1), None);
        // dense chunk probes hit the bitmap path
        let dense: Vec<u32> = (0..5000).map(|v| v * 2).collect();
        let s = set(&dense);
        assert_eq!(s.next_geq(4001), Some(4002));
    }

    #[test]
    fn last_value_reads_the_tail_container() {
        assert_eq!(set(&[7]).last_value(), 7);
        let dense: Vec<u32> = (0..5000).collect();
        assert_eq!(set(&dense).last_value(), 4999);
        assert_eq!(set(&[1, u32::MAX]).last_value(), u32::MAX);
    }

    #[test]
    fn serialization_roundtrips() {
        let shapes: Vec<Vec<u32>> = vec![
            vec![42],
            (0..4096).collect(),                     // bitmap
            (0..100).map(|v| v * 1000).collect(),    // arrays over two chunks
            (0..70_000).map(|v| v * 2).collect(),    // bitmaps over three chunks
        ];
        for values in shapes {
            let s = set(&values);
            let bytes = s.to_bytes();
            assert_eq!(bytes.len(), s.size_bytes());
            let back = RoaringLiteSet::from_bytes(&bytes).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn from_bytes_rejects_malformed_buffers() {
        let good = set(&(0..5000).map(|v| v * 2).collect::<Vec<u32>>()).to_bytes();
        assert!(RoaringLiteSet::from_bytes(&good).is_ok());
        for cut in 0..good.len() {
            assert!(RoaringLiteSet::from_bytes(&good[..cut]).is_err(), "cut at {cut}");
        }
        let mut long = good.clone();
        long.push(0);
        assert!(RoaringLiteSet::from_bytes(&long).is_err());
        // clear a set bit: popcount no longer matches the header
        let mut unpop = good.clone();
        unpop[10] = 0;
        assert!(RoaringLiteSet::from_bytes(&unpop).is_err());

        // array payloads must be strictly increasing
        let mut arr = set(&[1, 2, 3]).to_bytes();
        arr[6..8].copy_from_slice(&9u16.to_le_bytes());
        assert!(RoaringLiteSet::from_bytes(&arr).is_err());

        // chunk ids must be strictly increasing
        let mut ids = set(&[1, 1 << 16]).to_bytes();
        ids[6..8].copy_from_slice(&0u16.to_le_bytes());
        assert!(RoaringLiteSet::from_bytes(&ids).is_err());
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
        let (sa, sb) = (set(a), set(b));
        assert_eq!(sa.intersect(&sb), and_oracle(a, b), "and");
        assert_eq!(sb.intersect(&sa), and_oracle(a, b), "and swapped");
        assert_eq!(sa.union(&sb), or_oracle(a, b), "or");
        assert_eq!(sb.union(&sa), or_oracle(a, b), "or swapped");
    }

    #[test]
    fn boolean_kernels_cover_all_container_pairs() {
        let array_side: Vec<u32> = (0..1000).map(|v| v * 50).collect();
        let bitmap_side: Vec<u32> = (0..10_000).map(|v| v * 5).collect();
        let shapes = [&array_side, &bitmap_side];
        for a in &shapes {
            for b in &shapes {
                check_pair(a, b);
            }
        }
        // chunks present on one side only
        check_pair(&[1, 2, 3], &[1 << 20, (1 << 20) + 1]);
    }

    #[test]
    fn boolean_buffers_are_checked() {
        let (a, b) = (set(&[1, 2, 3]), set(&[1, 2, 3]));
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
}
