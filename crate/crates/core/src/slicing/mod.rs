//! Universe-sliced compressed sets.
//!
//! A [`SlicedSet`] cuts the 32-bit universe into 2^16-wide *chunks* and,
//! inside sufficiently sparse chunks, into 2^8-wide *blocks*, then stores
//! each populated slice with the cheapest of a few fixed container shapes:
//!
//! * a chunk holding every one of its 65536 values stores **no payload**
//!   (`Full`);
//! * a chunk at or above half occupancy — or whose block encoding would
//!   not beat a bitmap — stores an 8192-byte bitmap (`Dense`);
//! * any other chunk stores a block directory plus per-block payloads
//!   (`Sparse`): blocks with at most 30 values store them as raw bytes,
//!   denser blocks store a 32-byte bitmap.
//!
//! The whole set lives in one contiguous little-endian byte buffer:
//!
//! ```text
//! [chunk count - 1 : u16]
//! [chunk headers   : 8 bytes each, ascending chunk id]
//! [chunk payloads  : in chunk id order]
//! ```
//!
//! A chunk header packs `id:u16 | len-1:u16 | encoded bytes:u16 | kind:u8 |
//! block count-1:u8` (the last byte is zero for full and dense chunks). A
//! sparse payload starts with its block directory — `id:u8, len-1:u8` per
//! block, ascending id — followed by the block payloads in id order.
//!
//! Unpopulated slices appear nowhere. The only non-serialized state is a
//! small in-memory rank directory (a prefix-sum sample every 32 chunks)
//! that accelerates positional access; deserialization rebuilds it.

mod boolean;
mod ops;
pub mod small;

use crate::bits;
use crate::sequence::SortedSequence;
use crate::{Error, Result};

pub use boolean::{ChunkContainer, ChunkCursor};

/// Values covered by one chunk.
pub const CHUNK_SPAN: u32 = 1 << 16;
/// Values covered by one block.
pub const BLOCK_SPAN: u32 = 1 << 8;
/// Payload bytes of a dense chunk bitmap (`CHUNK_SPAN / 8`).
pub const DENSE_CHUNK_BYTES: usize = (CHUNK_SPAN / 8) as usize;
/// Payload bytes of a dense block bitmap (`BLOCK_SPAN / 8`).
pub const DENSE_BLOCK_BYTES: usize = (BLOCK_SPAN / 8) as usize;
/// A chunk with at least this many values always uses a bitmap.
pub const DENSE_CHUNK_MIN_LEN: u32 = CHUNK_SPAN / 2;
/// Largest block cardinality still stored as a raw byte array.
pub const SPARSE_BLOCK_MAX_LEN: u32 = 30;

/// Bytes per chunk header.
const HEADER_BYTES: usize = 8;
/// Chunks per rank-directory sample.
const DIRECTORY_STRIDE: usize = 32;

/// Container shape of a chunk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChunkKind {
    /// All 65536 values present; zero payload bytes.
    Full,
    /// 8192-byte bitmap.
    Dense,
    /// Block directory plus per-block payloads.
    Sparse,
}

impl ChunkKind {
    fn from_byte(b: u8) -> Option<ChunkKind> {
        match b {
            1 => Some(ChunkKind::Full),
            2 => Some(ChunkKind::Dense),
            3 => Some(ChunkKind::Sparse),
            _ => None,
        }
    }

    fn as_byte(self) -> u8 {
        match self {
            ChunkKind::Full => 1,
            ChunkKind::Dense => 2,
            ChunkKind::Sparse => 3,
        }
    }
}

/// Payload bytes of a block holding `len` values.
#[inline]
pub(crate) fn block_payload_bytes(len: u32) -> usize {
    if len <= SPARSE_BLOCK_MAX_LEN {
        len as usize
    } else {
        DENSE_BLOCK_BYTES
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct DirectoryEntry {
    /// Total values in all chunks before this sample point.
    values_before: u64,
    /// Byte offset of the sampled chunk's payload.
    payload_offset: usize,
}

/// Decoded view of one chunk header.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ChunkHeader {
    pub id: u32,
    pub len: u32,
    pub encoded_bytes: usize,
    pub kind: ChunkKind,
    pub block_count: u32,
}

impl ChunkHeader {
    /// Smallest value the chunk can hold.
    #[inline]
    pub fn base(&self) -> u32 {
        self.id << 16
    }
}

/// A compressed sorted integer set sliced by universe ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlicedSet {
    bytes: Vec<u8>,
    directory: Vec<DirectoryEntry>,
    len: usize,
    universe: u32,
}

impl SlicedSet {
    /// Compresses a sequence. Container shapes follow fixed rules, applied
    /// in order: a complete chunk is `Full`; a chunk at half occupancy or
    /// whose block encoding would reach bitmap size is `Dense`; everything
    /// else is `Sparse`.
    pub fn build(seq: &SortedSequence) -> SlicedSet {
        let values = seq.values();

        // Cut into chunk ranges.
        let mut ranges: Vec<(u32, std::ops::Range<usize>)> = Vec::new();
        let mut start = 0;
        while start < values.len() {
            let id = values[start] >> 16;
            let end = start + values[start..].partition_point(|&v| v >> 16 == id);
            ranges.push((id, start..end));
            start = end;
        }

        // Classify each chunk and measure its payload.
        enum Plan {
            Full,
            Dense,
            Sparse(Vec<(u32, std::ops::Range<usize>)>),
        }
        let mut plans: Vec<(Plan, usize)> = Vec::with_capacity(ranges.len());
        for (_, range) in &ranges {
            let chunk = &values[range.clone()];
            if chunk.len() == CHUNK_SPAN as usize {
                plans.push((Plan::Full, 0));
                continue;
            }
            let mut blocks: Vec<(u32, std::ops::Range<usize>)> = Vec::new();
            let mut bstart = 0;
            while bstart < chunk.len() {
                let bid = chunk[bstart] >> 8 & 0xFF;
                let bend = bstart + chunk[bstart..].partition_point(|&v| v >> 8 & 0xFF == bid);
                blocks.push((bid, range.start + bstart..range.start + bend));
                bstart = bend;
            }
            let sparse_bytes: usize = blocks
                .iter()
                .map(|(_, r)| 2 + block_payload_bytes(r.len() as u32))
                .sum();
            if chunk.len() >= DENSE_CHUNK_MIN_LEN as usize || sparse_bytes >= DENSE_CHUNK_BYTES {
                plans.push((Plan::Dense, DENSE_CHUNK_BYTES));
            } else {
                plans.push((Plan::Sparse(blocks), sparse_bytes));
            }
        }

        // Emit: chunk count, headers, payloads.
        let m = ranges.len();
        let total = 2 + HEADER_BYTES * m + plans.iter().map(|(_, b)| b).sum::<usize>();
        let mut bytes = Vec::with_capacity(total);
        bytes.extend_from_slice(&((m - 1) as u16).to_le_bytes());
        for ((id, range), (plan, ebytes)) in ranges.iter().zip(&plans) {
            let len = range.len() as u32;
            let (kind, block_count_byte) = match plan {
                Plan::Full => (ChunkKind::Full, 0u8),
                Plan::Dense => (ChunkKind::Dense, 0u8),
                Plan::Sparse(blocks) => (ChunkKind::Sparse, (blocks.len() - 1) as u8),
            };
            bytes.extend_from_slice(&(*id as u16).to_le_bytes());
            bytes.extend_from_slice(&((len - 1) as u16).to_le_bytes());
            bytes.extend_from_slice(&(*ebytes as u16).to_le_bytes());
            bytes.push(kind.as_byte());
            bytes.push(block_count_byte);
        }
        for ((_, range), (plan, _)) in ranges.iter().zip(&plans) {
            match plan {
                Plan::Full => {}
                Plan::Dense => {
                    let at = bytes.len();
                    bytes.resize(at + DENSE_CHUNK_BYTES, 0);
                    for &v in &values[range.clone()] {
                        bits::set_bit(&mut bytes[at..], v & 0xFFFF);
                    }
                }
                Plan::Sparse(blocks) => {
                    for (bid, brange) in blocks {
                        bytes.push(*bid as u8);
                        bytes.push((brange.len() - 1) as u8);
                    }
                    for (_, brange) in blocks {
                        let block = &values[brange.clone()];
                        if block.len() as u32 <= SPARSE_BLOCK_MAX_LEN {
                            bytes.extend(block.iter().map(|&v| v as u8));
                        } else {
                            let at = bytes.len();
                            bytes.resize(at + DENSE_BLOCK_BYTES, 0);
                            for &v in block {
                                bits::set_bit(&mut bytes[at..], v & 0xFF);
                            }
                        }
                    }
                }
            }
        }
        debug_assert_eq!(bytes.len(), total);

        let (directory, len) = scan_layout(&bytes).expect("freshly built buffer is well-formed");
        debug_assert_eq!(len, values.len());
        SlicedSet { bytes, directory, len, universe: seq.universe() }
    }

    /// Number of stored integers.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Upper bound on stored values: the bound recorded at build time, or
    /// the largest stored value for a deserialized set.
    pub fn universe(&self) -> u32 {
        self.universe
    }

    /// Serialized size in bytes. The in-memory rank directory is excluded;
    /// it is derived state.
    pub fn size_bytes(&self) -> usize {
        self.bytes.len()
    }

    /// The serialized form. Equal to the buffer `from_bytes` accepts.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Copies the serialized form out.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.bytes.clone()
    }

    /// Validates a serialized buffer and rebuilds the rank directory.
    ///
    /// Validation is structural: header table and block directories are
    /// checked completely (identifier order, kind bytes, declared sizes,
    /// exact total length); bitmap payload bits are trusted.
    pub fn from_bytes(bytes: Vec<u8>) -> Result<SlicedSet> {
        validate_layout(&bytes)?;
        let (directory, len) = scan_layout(&bytes).expect("validated layout scans cleanly");
        let mut set = SlicedSet { bytes, directory, len, universe: 0 };
        set.universe = set.last_value();
        Ok(set)
    }

    pub(crate) fn chunk_count(&self) -> usize {
        u16::from_le_bytes(self.bytes[0..2].try_into().unwrap()) as usize + 1
    }

    pub(crate) fn header(&self, ci: usize) -> ChunkHeader {
        parse_header(&self.bytes, ci)
    }

    /// Byte offset where chunk payloads begin.
    pub(crate) fn payload_start(&self) -> usize {
        2 + HEADER_BYTES * self.chunk_count()
    }

    /// Byte offset of chunk `ci`'s payload: jump to the nearest directory
    /// sample, then walk at most a stride of headers.
    pub(crate) fn payload_offset(&self, ci: usize) -> usize {
        let g = ci / DIRECTORY_STRIDE;
        let mut off = self.directory[g].payload_offset;
        for i in g * DIRECTORY_STRIDE..ci {
            off += self.header(i).encoded_bytes;
        }
        off
    }

    /// Payload slice of chunk `ci` given its known offset.
    pub(crate) fn payload_at(&self, ci: usize, offset: usize) -> &[u8] {
        &self.bytes[offset..offset + self.header(ci).encoded_bytes]
    }

    /// Chunk id of header `ci`, without decoding the other fields.
    #[inline]
    pub(crate) fn header_id(&self, ci: usize) -> u32 {
        let at = 2 + HEADER_BYTES * ci;
        u16::from_le_bytes(self.bytes[at..at + 2].try_into().unwrap()) as u32
    }

    /// Index of the first chunk whose id is `>= id`, searching from `from`.
    ///
    /// Ids increase strictly from index zero, so `header_id(k) >= k`: the
    /// sought chunk sits no later than index `id`, and in an unbroken run
    /// of populated chunks one direct probe settles it.
    pub(crate) fn lower_bound_chunk(&self, from: usize, id: u32) -> usize {
        let m = self.chunk_count();
        let direct = id as usize;
        if direct < from {
            return from; // header_id(from) >= from > id
        }
        let mut hi = m;
        if direct < m {
            if self.header_id(direct) == id {
                return direct;
            }
            hi = direct; // header_id(direct) > id keeps it a valid bound
        }
        let mut lo = from;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.header_id(mid) < id {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Directory lookup for positional access: returns the chunk group and
    /// the cumulative count/offset at its start.
    pub(crate) fn directory_entry_for(&self, index: usize) -> (usize, u64, usize) {
        let g = self
            .directory
            .partition_point(|e| e.values_before <= index as u64)
            - 1;
        let e = self.directory[g];
        (g * DIRECTORY_STRIDE, e.values_before, e.payload_offset)
    }

    /// Largest stored value.
    pub fn last_value(&self) -> u32 {
        let ci = self.chunk_count() - 1;
        let h = self.header(ci);
        match h.kind {
            ChunkKind::Full => h.base() + (CHUNK_SPAN - 1),
            ChunkKind::Dense => {
                let payload = self.payload_at(ci, self.payload_offset(ci));
                h.base() + bits::last_set_bit(payload).expect("dense chunk is non-empty")
            }
            ChunkKind::Sparse => {
                let payload = self.payload_at(ci, self.payload_offset(ci));
                let last = BlockIter::new(payload, h.block_count as usize)
                    .last()
                    .expect("sparse chunk has at least one block");
                let low = if last.is_bitmap() {
                    bits::last_set_bit(last.payload).expect("dense block is non-empty")
                } else {
                    last.payload[last.payload.len() - 1] as u32
                };
                h.base() + last.id * BLOCK_SPAN + low
            }
        }
    }

    /// Per-chunk header views, in chunk id order.
    pub fn chunks(&self) -> impl Iterator<Item = ChunkInfo> + '_ {
        (0..self.chunk_count()).map(|ci| {
            let h = self.header(ci);
            ChunkInfo {
                id: h.id,
                len: h.len,
                kind: h.kind,
                encoded_bytes: h.encoded_bytes,
                block_count: if h.kind == ChunkKind::Sparse { h.block_count } else { 0 },
            }
        })
    }

    /// Block views of the `ci`-th chunk (empty unless it is sparse).
    pub fn blocks(&self, ci: usize) -> Vec<BlockInfo> {
        let h = self.header(ci);
        if h.kind != ChunkKind::Sparse {
            return Vec::new();
        }
        let payload = self.payload_at(ci, self.payload_offset(ci));
        BlockIter::new(payload, h.block_count as usize)
            .map(|b| BlockInfo {
                id: b.id,
                len: b.len,
                payload_bytes: b.payload.len(),
                is_bitmap: b.is_bitmap(),
            })
            .collect()
    }

    /// Accounts every stored integer to the container shape that holds it
    /// and every byte to headers or payloads. The integer counts sum to
    /// `len()`; the byte counts sum to `size_bytes()`.
    pub fn space_breakdown(&self) -> SpaceBreakdown {
        let mut b = SpaceBreakdown {
            header_bytes: 2 + (HEADER_BYTES * self.chunk_count()) as u64,
            ..SpaceBreakdown::default()
        };
        let mut offset = self.payload_start();
        for ci in 0..self.chunk_count() {
            let h = self.header(ci);
            match h.kind {
                ChunkKind::Full => b.full_chunk_values += h.len as u64,
                ChunkKind::Dense => {
                    b.dense_chunk_values += h.len as u64;
                    b.dense_chunk_bytes += DENSE_CHUNK_BYTES as u64;
                }
                ChunkKind::Sparse => {
                    b.header_bytes += 2 * h.block_count as u64;
                    for block in BlockIter::new(self.payload_at(ci, offset), h.block_count as usize)
                    {
                        if block.is_bitmap() {
                            b.dense_block_values += block.len as u64;
                            b.dense_block_bytes += DENSE_BLOCK_BYTES as u64;
                        } else {
                            b.sparse_block_values += block.len as u64;
                            b.sparse_block_bytes += block.len as u64;
                        }
                    }
                }
            }
            offset += h.encoded_bytes;
        }
        b
    }
}

/// Public view of one chunk header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChunkInfo {
    pub id: u32,
    pub len: u32,
    pub kind: ChunkKind,
    pub encoded_bytes: usize,
    /// Block count for sparse chunks, zero otherwise.
    pub block_count: u32,
}

/// Public view of one block inside a sparse chunk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockInfo {
    pub id: u32,
    pub len: u32,
    pub payload_bytes: usize,
    pub is_bitmap: bool,
}

/// Where every stored integer lives and where every byte goes.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct SpaceBreakdown {
    /// Integers held by full chunks.
    pub full_chunk_values: u64,
    /// Integers held by dense chunk bitmaps.
    pub dense_chunk_values: u64,
    /// Integers held by dense block bitmaps.
    pub dense_block_values: u64,
    /// Integers held by sparse block arrays.
    pub sparse_block_values: u64,
    /// Chunk count, chunk headers, and block directories.
    pub header_bytes: u64,
    /// Dense chunk bitmap payloads.
    pub dense_chunk_bytes: u64,
    /// Dense block bitmap payloads.
    pub dense_block_bytes: u64,
    /// Sparse block array payloads.
    pub sparse_block_bytes: u64,
}

impl SpaceBreakdown {
    pub fn total_values(&self) -> u64 {
        self.full_chunk_values
            + self.dense_chunk_values
            + self.dense_block_values
            + self.sparse_block_values
    }

    pub fn total_bytes(&self) -> u64 {
        self.header_bytes + self.dense_chunk_bytes + self.dense_block_bytes + self.sparse_block_bytes
    }
}

/// Borrowed view of one block of a sparse chunk.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BlockRef<'a> {
    pub id: u32,
    pub len: u32,
    pub payload: &'a [u8],
}

impl BlockRef<'_> {
    #[inline]
    pub fn is_bitmap(&self) -> bool {
        self.len > SPARSE_BLOCK_MAX_LEN
    }
}

/// Walks the blocks of a sparse chunk payload in id order.
#[derive(Debug, Clone)]
pub(crate) struct BlockIter<'a> {
    directory: &'a [u8],
    payloads: &'a [u8],
    next: usize,
    offset: usize,
}

impl<'a> BlockIter<'a> {
    pub fn new(chunk_payload: &'a [u8], block_count: usize) -> Self {
        let (directory, payloads) = chunk_payload.split_at(2 * block_count);
        BlockIter { directory, payloads, next: 0, offset: 0 }
    }
}

impl<'a> Iterator for BlockIter<'a> {
    type Item = BlockRef<'a>;

    fn next(&mut self) -> Option<BlockRef<'a>> {
        if 2 * self.next >= self.directory.len() {
            return None;
        }
        let id = self.directory[2 * self.next] as u32;
        let len = self.directory[2 * self.next + 1] as u32 + 1;
        let nbytes = block_payload_bytes(len);
        let payload = &self.payloads[self.offset..self.offset + nbytes];
        self.next += 1;
        self.offset += nbytes;
        Some(BlockRef { id, len, payload })
    }
}

fn parse_header(bytes: &[u8], ci: usize) -> ChunkHeader {
    let at = 2 + HEADER_BYTES * ci;
    let h = &bytes[at..at + HEADER_BYTES];
    ChunkHeader {
        id: u16::from_le_bytes(h[0..2].try_into().unwrap()) as u32,
        len: u16::from_le_bytes(h[2..4].try_into().unwrap()) as u32 + 1,
        encoded_bytes: u16::from_le_bytes(h[4..6].try_into().unwrap()) as usize,
        kind: ChunkKind::from_byte(h[6]).expect("kind byte was validated"),
        block_count: h[7] as u32 + 1,
    }
}

/// Builds the rank directory and totals the length; assumes a validated
/// (or freshly built) buffer.
fn scan_layout(bytes: &[u8]) -> Result<(Vec<DirectoryEntry>, usize)> {
    let m = u16::from_le_bytes(bytes[0..2].try_into().unwrap()) as usize + 1;
    let mut directory = Vec::with_capacity(m.div_ceil(DIRECTORY_STRIDE));
    let mut cum = 0u64;
    let mut offset = 2 + HEADER_BYTES * m;
    for ci in 0..m {
        if ci % DIRECTORY_STRIDE == 0 {
            directory.push(DirectoryEntry { values_before: cum, payload_offset: offset });
        }
        let h = parse_header(bytes, ci);
        cum += h.len as u64;
        offset += h.encoded_bytes;
    }
    if offset != bytes.len() {
        return Err(Error::malformed(format!(
            "payload region is {} bytes, headers declare {}",
            bytes.len() - (2 + HEADER_BYTES * m),
            offset - (2 + HEADER_BYTES * m),
        )));
    }
    Ok((directory, cum as usize))
}

/// Full structural validation of a serialized buffer.
fn validate_layout(bytes: &[u8]) -> Result<()> {
    if bytes.len() < 2 {
        return Err(Error::malformed("buffer shorter than the chunk count field"));
    }
    let m = u16::from_le_bytes(bytes[0..2].try_into().unwrap()) as usize + 1;
    let header_end = 2 + HEADER_BYTES * m;
    if bytes.len() < header_end {
        return Err(Error::malformed(format!(
            "buffer truncated inside the header table ({} of {} bytes)",
            bytes.len(),
            header_end
        )));
    }

    let mut prev_id: Option<u32> = None;
    let mut offset = header_end;
    for ci in 0..m {
        let at = 2 + HEADER_BYTES * ci;
        let h = &bytes[at..at + HEADER_BYTES];
        let id = u16::from_le_bytes(h[0..2].try_into().unwrap()) as u32;
        let len = u16::from_le_bytes(h[2..4].try_into().unwrap()) as u32 + 1;
        let encoded = u16::from_le_bytes(h[4..6].try_into().unwrap()) as usize;
        let Some(kind) = ChunkKind::from_byte(h[6]) else {
            return Err(Error::malformed(format!("chunk {ci}: invalid kind byte {}", h[6])));
        };
        let bc_byte = h[7];
        if let Some(p) = prev_id {
            if id <= p {
                return Err(Error::malformed(format!(
                    "chunk ids not strictly increasing at entry {ci} ({p} then {id})"
                )));
            }
        }
        prev_id = Some(id);
        if bytes.len() - offset < encoded {
            return Err(Error::malformed(format!("chunk {ci}: payload truncated")));
        }
        match kind {
            ChunkKind::Full => {
                if len != CHUNK_SPAN {
                    return Err(Error::malformed(format!(
                        "chunk {ci}: full kind with {len} values"
                    )));
                }
                if encoded != 0 || bc_byte != 0 {
                    return Err(Error::malformed(format!(
                        "chunk {ci}: full kind carries payload bytes"
                    )));
                }
            }
            ChunkKind::Dense => {
                if encoded != DENSE_CHUNK_BYTES {
                    return Err(Error::malformed(format!(
                        "chunk {ci}: dense kind declares {encoded} payload bytes"
                    )));
                }
                if len == CHUNK_SPAN {
                    return Err(Error::malformed(format!(
                        "chunk {ci}: complete chunk encoded as a bitmap"
                    )));
                }
                if bc_byte != 0 {
                    return Err(Error::malformed(format!(
                        "chunk {ci}: dense kind carries a block count"
                    )));
                }
            }
            ChunkKind::Sparse => {
                if len >= DENSE_CHUNK_MIN_LEN {
                    return Err(Error::malformed(format!(
                        "chunk {ci}: {len} values exceed the sparse range"
                    )));
                }
                if encoded >= DENSE_CHUNK_BYTES {
                    return Err(Error::malformed(format!(
                        "chunk {ci}: sparse payload of {encoded} bytes reaches bitmap size"
                    )));
                }
                let bc = bc_byte as usize + 1;
                if encoded < 2 * bc {
                    return Err(Error::malformed(format!(
                        "chunk {ci}: payload smaller than its block directory"
                    )));
                }
                let payload = &bytes[offset..offset + encoded];
                let mut prev_bid: Option<u32> = None;
                let mut total_len = 0u32;
                let mut total_bytes = 2 * bc;
                for bi in 0..bc {
                    let bid = payload[2 * bi] as u32;
                    let blen = payload[2 * bi + 1] as u32 + 1;
                    if let Some(p) = prev_bid {
                        if bid <= p {
                            return Err(Error::malformed(format!(
                                "chunk {ci}: block ids not strictly increasing at entry {bi}"
                            )));
                        }
                    }
                    prev_bid = Some(bid);
                    total_len += blen;
                    total_bytes += block_payload_bytes(blen);
                }
                if total_len != len {
                    return Err(Error::malformed(format!(
                        "chunk {ci}: blocks hold {total_len} values, header declares {len}"
                    )));
                }
                if total_bytes != encoded {
                    return Err(Error::malformed(format!(
                        "chunk {ci}: blocks occupy {total_bytes} bytes, header declares {encoded}"
                    )));
                }
                // Raw byte arrays must be sorted; bitmap bits are trusted.
                let mut boff = 2 * bc;
                for bi in 0..bc {
                    let blen = payload[2 * bi + 1] as u32 + 1;
                    let nbytes = block_payload_bytes(blen);
                    if blen <= SPARSE_BLOCK_MAX_LEN {
                        let arr = &payload[boff..boff + nbytes];
                        for i in 1..arr.len() {
                            if arr[i - 1] >= arr[i] {
                                return Err(Error::malformed(format!(
                                    "chunk {ci}: block {bi} values not strictly increasing"
                                )));
                            }
                        }
                    }
                    boff += nbytes;
                }
            }
        }
        offset += encoded;
    }
    if offset != bytes.len() {
        return Err(Error::malformed(format!(
            "{} trailing bytes after the last payload",
            bytes.len() - offset
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::SortedSequence;

    fn seq(values: Vec<u32>) -> SortedSequence {
        let max = *values.last().unwrap();
        SortedSequence::new(values, max).unwrap()
    }

    fn build(values: Vec<u32>) -> SlicedSet {
        SlicedSet::build(&seq(values))
    }

    #[test]
    fn singleton_is_one_sparse_block() {
        let s = build(vec![77]);
        let chunks: Vec<_> = s.chunks().collect();
        assert_eq!(chunks.len(), 1);
        assert_eq!(chunks[0].kind, ChunkKind::Sparse);
        // block directory (2) + one raw value (1)
        assert_eq!(chunks[0].encoded_bytes, 3);
        assert_eq!(s.size_bytes(), 2 + 8 + 3);
        let blocks = s.blocks(0);
        assert_eq!(blocks.len(), 1);
        assert!(!blocks[0].is_bitmap);
        assert_eq!(blocks[0].len, 1);
    }

    #[test]
    fn block_shape_flips_at_the_array_limit() {
        // 30 values in one block: raw array
        let s = build((0..30).collect());
        assert_eq!(s.blocks(0)[0].payload_bytes, 30);
        assert!(!s.blocks(0)[0].is_bitmap);
        // 31 values: bitmap
        let s = build((0..31).collect());
        assert_eq!(s.blocks(0)[0].payload_bytes, DENSE_BLOCK_BYTES);
        assert!(s.blocks(0)[0].is_bitmap);
    }

    #[test]
    fn complete_chunk_stores_no_payload() {
        let s = build((0..CHUNK_SPAN).collect());
        let chunks: Vec<_> = s.chunks().collect();
        assert_eq!(chunks[0].kind, ChunkKind::Full);
        assert_eq!(chunks[0].encoded_bytes, 0);
        assert_eq!(s.size_bytes(), 10);
    }

    #[test]
    fn half_occupancy_forces_a_chunk_bitmap() {
        let s = build((0..DENSE_CHUNK_MIN_LEN).map(|v| v * 2).collect());
        assert_eq!(s.chunks().next().unwrap().kind, ChunkKind::Dense);
        assert_eq!(s.chunks().next().unwrap().encoded_bytes, DENSE_CHUNK_BYTES);
    }

    #[test]
    fn oversized_block_encoding_promotes_to_bitmap() {
        // 256 blocks of 31 values each: block encoding would need
        // 256 * (2 + 32) = 8704 >= 8192 bytes, despite only 7936 values.
        let mut values = Vec::new();
        for b in 0..256u32 {
            for i in 0..31 {
                values.push(b * BLOCK_SPAN + i);
            }
        }
        let s = build(values);
        let info = s.chunks().next().unwrap();
        assert!(info.len < DENSE_CHUNK_MIN_LEN);
        assert_eq!(info.kind, ChunkKind::Dense);
        assert_eq!(info.encoded_bytes, DENSE_CHUNK_BYTES);
    }

    #[test]
    fn just_under_the_promotion_limit_stays_sparse() {
        // 240 blocks of 31 values: 240 * 34 = 8160 < 8192.
        let mut values = Vec::new();
        for b in 0..240u32 {
            for i in 0..31 {
                values.push(b * BLOCK_SPAN + i);
            }
        }
        let s = build(values);
        let info = s.chunks().next().unwrap();
        assert_eq!(info.kind, ChunkKind::Sparse);
        assert_eq!(info.encoded_bytes, 8160);
        assert_eq!(info.block_count, 240);
    }

    #[test]
    fn top_of_universe_values_land_in_the_last_chunk() {
        let s = build(vec![u32::MAX - 1, u32::MAX]);
        let info = s.chunks().next().unwrap();
        assert_eq!(info.id, 0xFFFF);
        assert_eq!(s.last_value(), u32::MAX);
    }

    #[test]
    fn breakdown_sums_match_totals() {
        let mut values: Vec<u32> = (0..CHUNK_SPAN).collect(); // full chunk
        values.extend((0..40_000).map(|v| CHUNK_SPAN + v)); // dense chunk
        values.extend((0..40).map(|v| 2 * CHUNK_SPAN + v)); // dense block
        values.extend((0..10).map(|v| 2 * CHUNK_SPAN + 1000 + v * 3)); // sparse block
        let s = build(values);
        let b = s.space_breakdown();
        assert_eq!(b.total_values(), s.len() as u64);
        assert_eq!(b.total_bytes(), s.size_bytes() as u64);
        assert_eq!(b.full_chunk_values, CHUNK_SPAN as u64);
        assert_eq!(b.dense_chunk_values, 40_000);
        assert_eq!(b.dense_block_values, 40);
        assert_eq!(b.sparse_block_values, 10);
        assert_eq!(b.dense_block_bytes, 32);
        assert_eq!(b.sparse_block_bytes, 10);
    }

    #[test]
    fn roundtrip_preserves_bytes_exactly() {
        let sets = [
            build(vec![0]),
            build((0..CHUNK_SPAN).collect()),
            build((0..100_000).map(|v| v * 7).collect()),
            build(vec![5, 300, 70_000, 200_000, u32::MAX]),
        ];
        for s in &sets {
            let restored = SlicedSet::from_bytes(s.to_bytes()).unwrap();
            assert_eq!(restored.as_bytes(), s.as_bytes());
            assert_eq!(restored.len(), s.len());
            assert_eq!(restored.last_value(), s.last_value());
        }
    }

    #[test]
    fn deserialize_recovers_universe_as_last_value() {
        let s = SlicedSet::build(&SortedSequence::new(vec![10, 20], 1000).unwrap());
        assert_eq!(s.universe(), 1000);
        let restored = SlicedSet::from_bytes(s.to_bytes()).unwrap();
        assert_eq!(restored.universe(), 20);
    }

    #[test]
    fn malformed_buffers_are_rejected() {
        let good = build(vec![3, 900, 70_000]).to_bytes();
        // truncations at every boundary
        assert!(SlicedSet::from_bytes(vec![]).is_err());
        assert!(SlicedSet::from_bytes(good[..1].to_vec()).is_err());
        assert!(SlicedSet::from_bytes(good[..5].to_vec()).is_err());
        assert!(SlicedSet::from_bytes(good[..good.len() - 1].to_vec()).is_err());
        // trailing garbage
        let mut long = good.clone();
        long.push(0);
        assert!(SlicedSet::from_bytes(long).is_err());
        // invalid kind byte
        let mut bad = good.clone();
        bad[2 + 6] = 9;
        assert!(SlicedSet::from_bytes(bad).is_err());
        // non-increasing chunk ids: duplicate the first header's id into
        // the second header
        let two = build(vec![3, 70_000]).to_bytes();
        let mut bad = two.clone();
        bad[2 + 8] = bad[2];
        bad[2 + 9] = bad[3];
        assert!(SlicedSet::from_bytes(bad).is_err());
        // declared payload size disagreeing with the block directory
        let mut bad = good;
        bad[2 + 4] = 200;
        assert!(SlicedSet::from_bytes(bad).is_err());
    }

    #[test]
    fn unsorted_block_array_is_rejected() {
        let mut buf = build(vec![10, 20]).to_bytes();
        // payload layout: block directory (2 bytes) then the raw values
        let n = buf.len();
        buf.swap(n - 1, n - 2);
        assert!(SlicedSet::from_bytes(buf).is_err());
    }
}
