//! Collections of sorted lists over one shared universe, the binary file
//! format they travel in, and density filtering.
//!
//! The file format is a flat stream of 32-bit little-endian words. The
//! first record is a length-1 sequence holding the universe size; each
//! following record is `[length][values...]` with strictly increasing
//! values. Nothing else — no magic, no padding — so files concatenate and
//! diff cleanly.

use std::fs;
use std::path::Path;

use sliceset::SortedSequence;

use crate::{Error, Result};

/// A set of sorted lists over a shared universe. `universe` is exclusive:
/// every stored value is strictly below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collection {
    universe: u32,
    lists: Vec<SortedSequence>,
}

impl Collection {
    /// Wraps raw lists, validating each against the universe bound. Every
    /// list must be non-empty and strictly increasing with all values
    /// `< universe`.
    pub fn new(universe: u32, lists: Vec<Vec<u32>>) -> Result<Self> {
        if universe == 0 {
            return Err(Error::malformed("universe must be positive"));
        }
        let lists = lists
            .into_iter()
            .map(|values| SortedSequence::new(values, universe - 1))
            .collect::<sliceset::Result<Vec<_>>>()?;
        Ok(Collection { universe, lists })
    }

    /// Exclusive upper bound on stored values.
    pub fn universe(&self) -> u32 {
        self.universe
    }

    pub fn lists(&self) -> &[SortedSequence] {
        &self.lists
    }

    /// Number of lists.
    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    /// Total number of stored integers across all lists.
    pub fn total_integers(&self) -> u64 {
        self.lists.iter().map(|l| l.len() as u64).sum()
    }

    /// Keeps exactly the lists whose density exceeds `d` and reports what
    /// survived. `d = 0` keeps everything (every density is positive).
    pub fn filter_by_density(&self, d: f64) -> (Collection, FilterStats) {
        assert!(d >= 0.0, "density threshold must be non-negative");
        let kept: Vec<SortedSequence> = self
            .lists
            .iter()
            .filter(|l| l.density() > d)
            .cloned()
            .collect();
        let stats = FilterStats {
            threshold: d,
            total_lists: self.lists.len(),
            kept_lists: kept.len(),
            total_integers: self.total_integers(),
            kept_integers: kept.iter().map(|l| l.len() as u64).sum(),
        };
        (
            Collection { universe: self.universe, lists: kept },
            stats,
        )
    }
}

/// What a density filter kept: list counts and integer counts, the shape
/// collection statistics are usually quoted in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterStats {
    pub threshold: f64,
    pub total_lists: usize,
    pub kept_lists: usize,
    pub total_integers: u64,
    pub kept_integers: u64,
}

impl FilterStats {
    /// Percentage of integers retained; an empty input counts as fully
    /// retained.
    pub fn retained_integer_percent(&self) -> f64 {
        if self.total_integers == 0 {
            100.0
        } else {
            self.kept_integers as f64 * 100.0 / self.total_integers as f64
        }
    }
}

/// Serializes `collection` to its 32-bit little-endian word stream.
pub fn write_collection(collection: &Collection, path: impl AsRef<Path>) -> Result<()> {
    let mut words: Vec<u32> = Vec::with_capacity(2 + collection.total_integers() as usize);
    words.push(1);
    words.push(collection.universe());
    for list in collection.lists() {
        words.push(list.len() as u32);
        words.extend_from_slice(list.values());
    }
    let mut bytes = Vec::with_capacity(words.len() * 4);
    for w in words {
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    fs::write(path, bytes)?;
    Ok(())
}

/// Reads a collection back, rejecting truncation, bad record lengths,
/// non-increasing values, and values outside the universe.
pub fn read_collection(path: impl AsRef<Path>) -> Result<Collection> {
    let bytes = fs::read(path)?;
    if bytes.len() % 4 != 0 {
        return Err(Error::malformed("file length is not a multiple of 4"));
    }
    let words: Vec<u32> = bytes
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if words.len() < 2 || words[0] != 1 {
        return Err(Error::malformed(
            "first record must be a single word holding the universe",
        ));
    }
    let universe = words[1];
    if universe == 0 {
        return Err(Error::malformed("universe must be positive"));
    }

    let mut lists = Vec::new();
    let mut at = 2;
    while at < words.len() {
        let len = words[at] as usize;
        at += 1;
        if len == 0 {
            return Err(Error::malformed(format!("list {}: zero length", lists.len())));
        }
        if at + len > words.len() {
            return Err(Error::malformed(format!(
                "list {}: truncated ({} values declared, {} words left)",
                lists.len(),
                len,
                words.len() - at
            )));
        }
        let values = &words[at..at + len];
        at += len;
        for i in 1..values.len() {
            if values[i - 1] >= values[i] {
                return Err(Error::malformed(format!(
                    "list {}: values not strictly increasing at position {}",
                    lists.len(),
                    i
                )));
            }
        }
        if *values.last().unwrap() >= universe {
            return Err(Error::malformed(format!(
                "list {}: value {} outside universe {}",
                lists.len(),
                values.last().unwrap(),
                universe
            )));
        }
        lists.push(values.to_vec());
    }
    Collection::new(universe, lists)
}
