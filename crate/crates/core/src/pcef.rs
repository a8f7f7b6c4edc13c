//! Cardinality-partitioned Elias-Fano encoding.
//!
//! The sequence splits into runs of [`PARTITION_LEN`] consecutive elements.
//! Each partition stores its elements relative to the previous partition's
//! maximum plus one, Elias-Fano coded against the partition-local universe:
//! every element contributes a `phi`-bit low part (`phi` chosen from the
//! local density) and one high bit whose position encodes the remaining
//! upper part in near-unary form. Partition maxima live in a `skips` table
//! that drives both partition lookup and `next_geq` probes without touching
//! payload bits; a parallel `offsets` table records where each partition's
//! byte-aligned payload starts.
//!
//! Serialized layout, all integers little-endian:
//!
//! ```text
//! [count:u32][partitions:u32][skips:u32 x p][offsets:u32 x p][payloads]
//! ```

use crate::algebra::{self, ValueCursor};
use crate::bits;

use crate::sequence::SortedSequence;
use crate::{Error, Result};

/// Number of elements per partition.
pub const PARTITION_LEN: usize = 128;

/// Low-part width for a partition of `len` elements spanning a relative
/// universe of `universe`: zero when the partition is dense enough that the
/// high bits alone are cheaper, otherwise the floor of the log of the
/// average gap.
fn low_bit_width(len: usize, universe: u32) -> u32 {
    if (universe as u64) < 2 * len as u64 {
        0
    } else {
        31 - (universe / len as u32).leading_zeros()
    }
}

/// Number of high-section buckets: `ceil(universe / 2^phi)`.
fn high_buckets(universe: u32, phi: u32) -> usize {
    ((universe as u64 + ((1u64 << phi) - 1)) >> phi) as usize
}

/// Total payload bits for one partition.
fn partition_bits(len: usize, universe: u32) -> usize {
    let phi = low_bit_width(len, universe);
    len * phi as usize + len + high_buckets(universe, phi)
}

/// Byte-aligned payload length for one partition.
fn partition_bytes(len: usize, universe: u32) -> usize {
    partition_bits(len, universe).div_ceil(8)
}

fn encode_partition(values: &[u32], base: u32, universe: u32, out: &mut Vec<u8>) {
    let len = values.len();
    let phi = low_bit_width(len, universe);
    let start = out.len();
    out.resize(start + partition_bytes(len, universe), 0);
    let buf = &mut out[start..];
    let high_start = len as u32 * phi;
    for (j, &v) in values.iter().enumerate() {
        let rel = v - base;
        if phi > 0 {
            let mask = (1u32 << phi) - 1;
            bits::write_bits(buf, j * phi as usize, phi, (rel & mask) as u64);
        }
        bits::set_bit(buf, high_start + (rel >> phi) + j as u32);
    }
}

/// Expands one partition into `out[..len]`. The slice must be exactly the
/// partition's payload and must have passed validation (or come from
/// `encode_partition`).
fn decode_partition(slice: &[u8], len: usize, base: u32, universe: u32, out: &mut [u32]) {
    let phi = low_bit_width(len, universe);
    let high_start = len * phi as usize;
    let section_bits = slice.len() * 8;
    let mut j = 0;
    let mut word_base = high_start;
    while j < len {
        debug_assert!(word_base < section_bits, "high section is short of ones");
        let mut w = bits::read_word(slice, word_base);
        while w != 0 && j < len {
            let pos = word_base + w.trailing_zeros() as usize;
            let high = (pos - high_start - j) as u64;
            let low = if phi > 0 { bits::read_bits(slice, j * phi as usize, phi) } else { 0 };
            out[j] = base + (((high << phi) | low) as u32);
            j += 1;
            w &= w - 1;
        }
        word_base += bits::WORD_BITS as usize;
    }
}

/// Structural check of one partition payload: exactly `len` ones in the
/// high section, decoded values strictly increasing, the last one equal to
/// the relative universe (so the skip table is truthful), and no stray set
/// bits after the last one.
fn validate_partition(slice: &[u8], len: usize, universe: u32) -> Result<()> {
    let phi = low_bit_width(len, universe);
    let high_start = (len * phi as usize) as u32;
    let mut pos = high_start;
    let mut prev: Option<u64> = None;
    for j in 0..len as u32 {
        let Some(p) = bits::next_set_bit(slice, pos) else {
            return Err(Error::malformed("partition high section has too few set bits"));
        };
        let high = (p - high_start - j) as u64;
        let low =
            if phi > 0 { bits::read_bits(slice, (j * phi) as usize, phi) } else { 0 };
        let value = (high << phi) | low;
        if value > universe as u64 {
            return Err(Error::malformed("partition element exceeds its universe"));
        }
        if prev.is_some_and(|pv| value <= pv) {
            return Err(Error::malformed("partition elements are not strictly increasing"));
        }
        prev = Some(value);
        pos = p + 1;
    }
    if prev != Some(universe as u64) {
        return Err(Error::malformed("partition maximum disagrees with its skip entry"));
    }
    if bits::next_set_bit(slice, pos).is_some() {
        return Err(Error::malformed("stray set bits after the partition payload"));
    }
    Ok(())
}

/// A sorted integer set stored as cardinality-partitioned Elias-Fano.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcEfList {
    len: usize,
    /// Absolute maximum of each partition.
    skips: Vec<u32>,
    /// Byte offset of each partition's payload, relative to payload start.
    offsets: Vec<u32>,
    payload: Vec<u8>,
}

impl PcEfList {
    pub fn build(seq: &SortedSequence) -> PcEfList {
        let values = seq.values();
        let nparts = values.len().div_ceil(PARTITION_LEN);
        let mut skips = Vec::with_capacity(nparts);
        let mut offsets = Vec::with_capacity(nparts);
        let mut payload = Vec::new();
        let mut base = 0u32;
        for part in values.chunks(PARTITION_LEN) {
            offsets.push(payload.len() as u32);
            let max = *part.last().expect("chunks are non-empty");
            encode_partition(part, base, max - base, &mut payload);
            skips.push(max);
            // wraps only after a partition ending at u32::MAX, which is
            // necessarily the last one
            base = max.wrapping_add(1);
        }
        PcEfList { len: values.len(), skips, offsets, payload }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest stored value.
    pub fn last_value(&self) -> u32 {
        *self.skips.last().expect("lists are never empty")
    }

    pub fn num_partitions(&self) -> usize {
        self.skips.len()
    }

    /// Serialized size in bytes, including the fixed header and both
    /// per-partition tables.
    pub fn size_bytes(&self) -> usize {
        8 + 8 * self.skips.len() + self.payload.len()
    }

    fn partition_len(&self, p: usize) -> usize {
        if p + 1 == self.skips.len() {
            self.len - p * PARTITION_LEN
        } else {
            PARTITION_LEN
        }
    }

    fn partition_base(&self, p: usize) -> u32 {
        if p == 0 {
            0
        } else {
            self.skips[p - 1] + 1
        }
    }

    fn partition_slice(&self, p: usize) -> &[u8] {
        let start = self.offsets[p] as usize;
        let end = if p + 1 == self.offsets.len() {
            self.payload.len()
        } else {
            self.offsets[p + 1] as usize
        };
        &self.payload[start..end]
    }

    fn decode_partition_into(&self, p: usize, out: &mut [u32]) {
        let base = self.partition_base(p);
        decode_partition(
            self.partition_slice(p),
            self.partition_len(p),
            base,
            self.skips[p] - base,
            out,
        );
    }

    /// Writes all values into `out`, which must hold at least `len()`
    /// slots. Returns the count written.
    pub fn decode_into(&self, out: &mut [u32]) -> Result<usize> {
        if out.len() < self.len {
            return Err(Error::BufferTooSmall { needed: self.len, got: out.len() });
        }
        for p in 0..self.skips.len() {
            self.decode_partition_into(p, &mut out[p * PARTITION_LEN..]);
        }
        Ok(self.len)
    }

    /// Decodes the whole list into a fresh vector.
    pub fn decode(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.len];
        self.decode_into(&mut out).expect("buffer sized to len");
        out
    }

    /// Value at position `index`, or `None` past the end.
    pub fn get(&self, index: usize) -> Option<u32> {
        if index >= self.len {
            return None;
        }
        let p = index / PARTITION_LEN;
        let j = (index % PARTITION_LEN) as u32;
        let len = self.partition_len(p);
        let base = self.partition_base(p);
        let universe = self.skips[p] - base;
        let phi = low_bit_width(len, universe);
        let slice = self.partition_slice(p);
        let high_start = len * phi as usize;
        // select the j-th one in the high section, one word at a time
        let mut rank = j;
        let mut word_base = high_start;
        let pos = loop {
            let w = bits::read_word(slice, word_base);
            let ones = w.count_ones();
            if rank < ones {
                break word_base
                    + bits::select_in_word(w, rank).expect("rank checked against popcount")
                        as usize;
            }
            rank -= ones;
            word_base += bits::WORD_BITS as usize;
        };
        let high = (pos - high_start) as u32 - j;
        let low = if phi > 0 {
            bits::read_bits(slice, j as usize * phi as usize, phi) as u32
        } else {
            0
        };
        Some(base + ((high << phi) | low))
    }

    /// Smallest stored value `>= lower`, or `None` if every value is
    /// smaller.
    pub fn next_geq(&self, lower: u32) -> Option<u32> {
        let p = self.skips.partition_point(|&s| s < lower);
        if p == self.skips.len() {
            return None;
        }
        let mut buf = [0u32; PARTITION_LEN];
        let len = self.partition_len(p);
        self.decode_partition_into(p, &mut buf);
        let j = buf[..len].partition_point(|&v| v < lower);
        Some(buf[j])
    }

    /// Element cursor for the candidate-propagation driver.
    pub fn cursor(&self) -> PcEfCursor<'_> {
        PcEfCursor::new(self)
    }

    /// Writes the sorted intersection with `other` into `out`, which must
    /// hold at least `min(self.len(), other.len())` slots. Returns the
    /// count written.
    pub fn intersect_into(&self, other: &PcEfList, out: &mut [u32]) -> Result<usize> {
        let needed = self.len.min(other.len);
        if out.len() < needed {
            return Err(Error::BufferTooSmall { needed, got: out.len() });
        }
        // candidates come from the shorter side: each one costs a probe
        let (a, b) = if self.len <= other.len { (self, other) } else { (other, self) };
        algebra::intersect_by_candidate(&mut a.cursor(), &mut b.cursor(), out)
    }

    /// Convenience wrapper over [`PcEfList::intersect_into`].
    pub fn intersect(&self, other: &PcEfList) -> Vec<u32> {
        let mut out = vec![0u32; self.len.min(other.len)];
        let n = self.intersect_into(other, &mut out).expect("buffer sized to worst case");
        out.truncate(n);
        out
    }

    /// Writes the sorted union with `other` into `out`, which must hold at
    /// least `self.len() + other.len()` slots. Returns the count written.
    pub fn union_into(&self, other: &PcEfList, out: &mut [u32]) -> Result<usize> {
        let needed = self.len + other.len;
        if out.len() < needed {
            return Err(Error::BufferTooSmall { needed, got: out.len() });
        }
        let mut ca = self.cursor();
        let mut cb = other.cursor();
        let (mut va, mut vb) = (ca.current(), cb.current());
        let mut k = 0;
        while let (Some(a), Some(b)) = (va, vb) {
            out[k] = a.min(b);
            k += 1;
            if a <= b {
                va = ca.next();
            }
            if b <= a {
                vb = cb.next();
            }
        }
        while let Some(a) = va {
            out[k] = a;
            k += 1;
            va = ca.next();
        }
        while let Some(b) = vb {
            out[k] = b;
            k += 1;
            vb = cb.next();
        }
        Ok(k)
    }

    /// Convenience wrapper over [`PcEfList::union_into`].
    pub fn union(&self, other: &PcEfList) -> Vec<u32> {
        let mut out = vec![0u32; self.len + other.len];
        let n = self.union_into(other, &mut out).expect("buffer sized to worst case");
        out.truncate(n);
        out
    }

    /// Per-partition statistics, in order.
    pub fn partitions(&self) -> impl Iterator<Item = PartitionInfo> + '_ {
        (0..self.skips.len()).map(|p| {
            let len = self.partition_len(p);
            let base = self.partition_base(p);
            let universe = self.skips[p] - base;
            PartitionInfo {
                index: p,
                len,
                base,
                max: self.skips[p],
                low_bit_width: low_bit_width(len, universe),
                payload_bytes: self.partition_slice(p).len(),
            }
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.size_bytes());
        out.extend_from_slice(&(self.len as u32).to_le_bytes());
        out.extend_from_slice(&(self.skips.len() as u32).to_le_bytes());
        for &s in &self.skips {
            out.extend_from_slice(&s.to_le_bytes());
        }
        for &o in &self.offsets {
            out.extend_from_slice(&o.to_le_bytes());
        }
        out.extend_from_slice(&self.payload);
        out
    }

    /// Parses and validates a serialized list. Every structural property
    /// is checked: table sizes, skip monotonicity, offset arithmetic, and
    /// each partition's payload bits.
    pub fn from_bytes(bytes: &[u8]) -> Result<PcEfList> {
        if bytes.len() < 8 {
            return Err(Error::malformed("buffer shorter than the fixed header"));
        }
        let len = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
        let nparts = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
        if len == 0 {
            return Err(Error::malformed("empty lists have no serialized form"));
        }
        if nparts != len.div_ceil(PARTITION_LEN) {
            return Err(Error::malformed("partition count disagrees with element count"));
        }
        let tables_end = 8 + 8 * nparts;
        if bytes.len() < tables_end {
            return Err(Error::malformed("buffer truncated inside the partition tables"));
        }
        let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        let skips: Vec<u32> = (0..nparts).map(|p| word(8 + 4 * p)).collect();
        let offsets: Vec<u32> = (0..nparts).map(|p| word(8 + 4 * nparts + 4 * p)).collect();
        if skips.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::malformed("skips are not strictly increasing"));
        }
        let payload = bytes[tables_end..].to_vec();
        let list = PcEfList { len, skips, offsets, payload };
        // offsets must be the exact prefix sums of the partition sizes
        // implied by the tables, and the payload must end exactly there
        let mut expected = 0u64;
        for p in 0..nparts {
            if list.offsets[p] as u64 != expected {
                return Err(Error::malformed("partition offset disagrees with payload sizes"));
            }
            let plen = list.partition_len(p);
            let base = list.partition_base(p);
            if list.skips[p] < base {
                return Err(Error::malformed("partition universe is negative"));
            }
            let universe = list.skips[p] - base;
            if (universe as u64) < plen as u64 - 1 {
                return Err(Error::malformed("partition is too small for its element count"));
            }
            expected += partition_bytes(plen, universe) as u64;
        }
        if list.payload.len() as u64 != expected {
            return Err(Error::malformed("payload length disagrees with the partition tables"));
        }
        for p in 0..nparts {
            let base = list.partition_base(p);
            validate_partition(
                list.partition_slice(p),
                list.partition_len(p),
                list.skips[p] - base,
            )?;
        }
        Ok(list)
    }
}

/// Per-partition statistics reported by [`PcEfList::partitions`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionInfo {
    pub index: usize,
    pub len: usize,
    /// Smallest value the partition could hold.
    pub base: u32,
    /// Largest value it does hold (its skip entry).
    pub max: u32,
    pub low_bit_width: u32,
    pub payload_bytes: usize,
}

/// Buffered element cursor: decodes one partition at a time and walks it.
#[derive(Debug, Clone)]
pub struct PcEfCursor<'a> {
    list: &'a PcEfList,
    partition: usize,
    j: usize,
    buf: [u32; PARTITION_LEN],
    buf_len: usize,
}

impl<'a> PcEfCursor<'a> {
    fn new(list: &'a PcEfList) -> Self {
        let mut cursor =
            PcEfCursor { list, partition: 0, j: 0, buf: [0; PARTITION_LEN], buf_len: 0 };
        cursor.fill(0);
        cursor
    }

    fn fill(&mut self, p: usize) {
        self.partition = p;
        self.j = 0;
        if p < self.list.num_partitions() {
            self.buf_len = self.list.partition_len(p);
            self.list.decode_partition_into(p, &mut self.buf);
        } else {
            self.buf_len = 0;
        }
    }
}

impl ValueCursor for PcEfCursor<'_> {
    fn current(&self) -> Option<u32> {
        (self.j < self.buf_len).then(|| self.buf[self.j])
    }

    fn next(&mut self) -> Option<u32> {
        self.j += 1;
        if self.j >= self.buf_len {
            self.fill(self.partition + 1);
        }
        self.current()
    }

    fn next_geq(&mut self, lower: u32) -> Option<u32> {
        match self.current() {
            None => None,
            Some(v) if v >= lower => Some(v),
            Some(_) => {
                if lower <= self.list.skips[self.partition] {
                    // the target stays inside the buffered partition
                    self.j += self.buf[self.j..self.buf_len].partition_point(|&v| v < lower);
                } else {
                    let p = self.partition
                        + self.list.skips[self.partition..].partition_point(|&s| s < lower);
                    if p >= self.list.num_partitions() {
                        self.partition = p;
                        self.buf_len = 0;
                        self.j = 0;
                        return None;
                    }
                    self.fill(p);
                    self.j = self.buf[..self.buf_len].partition_point(|&v| v < lower);
                }
                self.current()
            }
        }
    }
}
