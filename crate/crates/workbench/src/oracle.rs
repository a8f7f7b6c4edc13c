//! Plain-array reference semantics that every representation is checked
//! against. Deliberately boring: direct indexing, binary search, and
//! two-pointer merges over `&[u32]` — slow enough to trust, fast enough
//! to gate every benchmark.

use crate::{Error, Result};

/// The trivial reference for decoding: a copy of the values.
pub fn decode(values: &[u32]) -> Vec<u32> {
    values.to_vec()
}

/// Direct positional indexing.
pub fn access(values: &[u32], index: usize) -> Result<u32> {
    values
        .get(index)
        .copied()
        .ok_or(Error::IndexOutOfBounds { index, len: values.len() })
}

/// Smallest stored value `>= lower`, by binary search.
pub fn next_geq(values: &[u32], lower: u32) -> Option<u32> {
    let i = values.partition_point(|&v| v < lower);
    values.get(i).copied()
}

/// Two-pointer intersection of sorted inputs.
pub fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Two-pointer merge of sorted inputs, emitting common values once.
pub fn union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
