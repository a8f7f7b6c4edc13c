//! Word-level bit utilities shared by the bitmap containers.
//!
//! Bitmaps are stored little-endian: bit `i` lives in byte `i / 8` at bit
//! `i % 8`, which is the same position as bit `i % 64` of the `i / 64`-th
//! little-endian `u64`. Helpers come in two flavors, one over `&[u64]`
//! words (parsed containers) and one over raw `&[u8]` payloads (containers
//! addressed inside a serialized buffer, which need not be word-aligned).

/// Bits per machine word used by the bitmap containers.
pub const WORD_BITS: u32 = 64;

/// Returns the position of the `(rank+1)`-th set bit of `word`, or `None`
/// if fewer than `rank + 1` bits are set.
///
/// Dispatches to a PDEP-based path when the CPU supports BMI2; the portable
/// path is always available and is what the fast path is tested against.
#[inline]
pub fn select_in_word(word: u64, rank: u32) -> Option<u32> {
    if rank >= word.count_ones() {
        return None;
    }
    #[cfg(target_arch = "x86_64")]
    if std::arch::is_x86_feature_detected!("bmi2") {
        // SAFETY: BMI2 support was just verified.
        return Some(unsafe { select_in_word_bmi2(word, rank) });
    }
    select_in_word_portable(word, rank)
}

/// Portable select: skip whole bytes by popcount, then clear low bits one
/// at a time inside the final byte.
#[inline]
pub fn select_in_word_portable(word: u64, rank: u32) -> Option<u32> {
    if rank >= word.count_ones() {
        return None;
    }
    let mut remaining = rank;
    let mut shift = 0u32;
    loop {
        let byte = (word >> shift) as u8;
        let ones = byte.count_ones();
        if remaining < ones {
            let mut b = byte;
            for _ in 0..remaining {
                b &= b - 1;
            }
            return Some(shift + b.trailing_zeros());
        }
        remaining -= ones;
        shift += 8;
        debug_assert!(shift < WORD_BITS);
    }
}

/// `tzcnt(pdep(1 << rank, word))` — the deposited bit lands on the
/// `(rank+1)`-th set bit of `word`.
#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "bmi2")]
unsafe fn select_in_word_bmi2(word: u64, rank: u32) -> u32 {
    std::arch::x86_64::_pdep_u64(1u64 << rank, word).trailing_zeros()
}

/// Sets bit `i` of a little-endian byte-addressed bitmap.
#[inline]
pub fn set_bit(bytes: &mut [u8], i: u32) {
    bytes[(i / 8) as usize] |= 1 << (i % 8);
}

/// Tests bit `i` of a little-endian byte-addressed bitmap.
#[inline]
pub fn test_bit(bytes: &[u8], i: u32) -> bool {
    bytes[(i / 8) as usize] >> (i % 8) & 1 == 1
}

/// Reads the `wi`-th little-endian word of a byte-addressed bitmap. A
/// trailing partial word reads as if zero-padded.
#[inline]
pub fn word_at(bytes: &[u8], wi: usize) -> u64 {
    let start = wi * 8;
    if bytes.len() - start >= 8 {
        u64::from_le_bytes(bytes[start..start + 8].try_into().unwrap())
    } else {
        let mut buf = [0u8; 8];
        buf[..bytes.len() - start].copy_from_slice(&bytes[start..]);
        u64::from_le_bytes(buf)
    }
}

/// Number of (possibly partial) words in a byte-addressed bitmap.
#[inline]
fn word_count(bytes: &[u8]) -> usize {
    bytes.len().div_ceil(8)
}

/// Number of set bits in a byte-addressed bitmap.
#[inline]
pub fn popcount(bytes: &[u8]) -> u64 {
    bytes.iter().map(|b| b.count_ones() as u64).sum()
}

/// Extracts every set bit of a byte-addressed bitmap as `base + position`,
/// writing into `out` (which the caller has sized beforehand). Returns the
/// number of values written.
#[inline]
pub fn decode_bitmap(bytes: &[u8], base: u32, out: &mut [u32]) -> usize {
    let mut k = 0;
    for wi in 0..word_count(bytes) {
        let mut w = word_at(bytes, wi);
        let word_base = base + wi as u32 * WORD_BITS;
        while w != 0 {
            out[k] = word_base + w.trailing_zeros();
            k += 1;
            w &= w - 1;
        }
    }
    k
}

/// Same as [`decode_bitmap`] over parsed words.
#[inline]
pub fn decode_words(words: &[u64], base: u32, out: &mut [u32]) -> usize {
    let mut k = 0;
    for (wi, &word) in words.iter().enumerate() {
        let mut w = word;
        let word_base = base + wi as u32 * WORD_BITS;
        while w != 0 {
            out[k] = word_base + w.trailing_zeros();
            k += 1;
            w &= w - 1;
        }
    }
    k
}

/// Position of the `(rank+1)`-th set bit of a byte-addressed bitmap.
#[inline]
pub fn select_in_bitmap(bytes: &[u8], rank: u32) -> Option<u32> {
    let mut remaining = rank;
    for wi in 0..word_count(bytes) {
        let w = word_at(bytes, wi);
        let ones = w.count_ones();
        if remaining < ones {
            return Some(wi as u32 * WORD_BITS + select_in_word(w, remaining).unwrap());
        }
        remaining -= ones;
    }
    None
}

/// Same as [`select_in_bitmap`] over parsed words.
#[inline]
pub fn select_in_words(words: &[u64], rank: u32) -> Option<u32> {
    let mut remaining = rank;
    for (wi, &w) in words.iter().enumerate() {
        let ones = w.count_ones();
        if remaining < ones {
            return Some(wi as u32 * WORD_BITS + select_in_word(w, remaining).unwrap());
        }
        remaining -= ones;
    }
    None
}

/// First set-bit position `>= from` in a byte-addressed bitmap.
#[inline]
pub fn next_set_bit(bytes: &[u8], from: u32) -> Option<u32> {
    let words = word_count(bytes);
    let mut wi = (from / WORD_BITS) as usize;
    if wi >= words {
        return None;
    }
    let mut w = word_at(bytes, wi) & (u64::MAX << (from % WORD_BITS));
    loop {
        if w != 0 {
            return Some(wi as u32 * WORD_BITS + w.trailing_zeros());
        }
        wi += 1;
        if wi >= words {
            return None;
        }
        w = word_at(bytes, wi);
    }
}

/// Position of the highest set bit of a byte-addressed bitmap.
#[inline]
pub fn last_set_bit(bytes: &[u8]) -> Option<u32> {
    for wi in (0..word_count(bytes)).rev() {
        let w = word_at(bytes, wi);
        if w != 0 {
            return Some(wi as u32 * WORD_BITS + 63 - w.leading_zeros());
        }
    }
    None
}

/// Same as [`next_set_bit`] over parsed words.
#[inline]
pub fn next_set_bit_words(words: &[u64], from: u32) -> Option<u32> {
    let mut wi = (from / WORD_BITS) as usize;
    if wi >= words.len() {
        return None;
    }
    let mut w = words[wi] & (u64::MAX << (from % WORD_BITS));
    loop {
        if w != 0 {
            return Some(wi as u32 * WORD_BITS + w.trailing_zeros());
        }
        wi += 1;
        if wi >= words.len() {
            return None;
        }
        w = words[wi];
    }
}

/// Writes `width` bits of `value` at bit offset `pos` of a little-endian
/// bit stream. `width <= 32`; the target bits must currently be zero.
#[inline]
pub fn write_bits(bytes: &mut [u8], pos: usize, width: u32, value: u64) {
    debug_assert!(width <= 32);
    debug_assert!(width == 64 || value < 1u64 << width);
    let mut v = value;
    let mut p = pos;
    let mut left = width;
    while left > 0 {
        let byte = p / 8;
        let bit = (p % 8) as u32;
        let take = (8 - bit).min(left);
        bytes[byte] |= ((v & ((1u64 << take) - 1)) as u8) << bit;
        v >>= take;
        p += take as usize;
        left -= take;
    }
}

/// Reads `width <= 32` bits at bit offset `pos` of a little-endian bit
/// stream.
#[inline]
pub fn read_bits(bytes: &[u8], pos: usize, width: u32) -> u64 {
    debug_assert!(width <= 32);
    if width == 0 {
        return 0;
    }
    let mut v = 0u64;
    let mut got = 0u32;
    let mut p = pos;
    while got < width {
        let byte = p / 8;
        let bit = (p % 8) as u32;
        let take = (8 - bit).min(width - got);
        let part = (bytes[byte] >> bit) as u64 & ((1u64 << take) - 1);
        v |= part << got;
        got += take;
        p += take as usize;
    }
    v
}

/// Reads a full 64-bit little-endian window starting at bit offset `pos`.
/// Bits past the end of the stream read as zero.
#[inline]
pub fn read_word(bytes: &[u8], pos: usize) -> u64 {
    let byte = pos / 8;
    let bit = (pos % 8) as u32;
    let mut buf = [0u8; 9];
    let avail = bytes.len().saturating_sub(byte).min(9);
    buf[..avail].copy_from_slice(&bytes[byte..byte + avail]);
    let lo = u64::from_le_bytes(buf[..8].try_into().unwrap());
    if bit == 0 {
        lo
    } else {
        lo >> bit | (buf[8] as u64) << (64 - bit)
    }
}
