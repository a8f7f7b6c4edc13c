//! On-disk container for built indexes: a small tagged header followed by
//! one length-prefixed blob per list, each blob being the representation's
//! own serialization.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic  b"SSIX"
//! u8     format version (1)
//! u8     representation code
//! u32    list count
//! u32    universe (exclusive)
//! then, per list: u32 blob length, blob bytes
//! ```

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use sliceset::slicing::SpaceBreakdown;
use sliceset::{PcEfList, RoaringLiteSet, SlicedSet};

use crate::collection::Collection;
use crate::reps::{aggregate_breakdown, SetRep};
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"SSIX";
const VERSION: u8 = 1;

/// Which representation an index holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReprKind {
    Slicing,
    PcEf,
    RoaringLite,
}

impl ReprKind {
    pub const ALL: [ReprKind; 3] = [ReprKind::Slicing, ReprKind::PcEf, ReprKind::RoaringLite];

    pub fn name(self) -> &'static str {
        match self {
            ReprKind::Slicing => SlicedSet::NAME,
            ReprKind::PcEf => PcEfList::NAME,
            ReprKind::RoaringLite => RoaringLiteSet::NAME,
        }
    }

    fn code(self) -> u8 {
        match self {
            ReprKind::Slicing => 1,
            ReprKind::PcEf => 2,
            ReprKind::RoaringLite => 3,
        }
    }

    fn from_code(code: u8) -> Option<ReprKind> {
        Self::ALL.into_iter().find(|r| r.code() == code)
    }
}

impl fmt::Display for ReprKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReprKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown representation {s:?} (expected slicing, pc-ef, or roaring-lite)"))
    }
}

/// The sets of one index, tagged by representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexSets {
    Slicing(Vec<SlicedSet>),
    PcEf(Vec<PcEfList>),
    RoaringLite(Vec<RoaringLiteSet>),
}

/// A built index over one collection: every list of the collection encoded
/// in a single representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexFile {
    pub universe: u32,
    pub sets: IndexSets,
}

impl IndexFile {
    pub fn repr(&self) -> ReprKind {
        match self.sets {
            IndexSets::Slicing(_) => ReprKind::Slicing,
            IndexSets::PcEf(_) => ReprKind::PcEf,
            IndexSets::RoaringLite(_) => ReprKind::RoaringLite,
        }
    }

    /// Number of lists.
    pub fn len(&self) -> usize {
        match &self.sets {
            IndexSets::Slicing(v) => v.len(),
            IndexSets::PcEf(v) => v.len(),
            IndexSets::RoaringLite(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total_integers(&self) -> u64 {
        match &self.sets {
            IndexSets::Slicing(v) => v.iter().map(|s| s.len() as u64).sum(),
            IndexSets::PcEf(v) => v.iter().map(|s| s.len() as u64).sum(),
            IndexSets::RoaringLite(v) => v.iter().map(|s| s.len() as u64).sum(),
        }
    }

    /// Sum of the serialized sizes of all sets (headers and payloads, not
    /// counting this container's own framing).
    pub fn total_bytes(&self) -> u64 {
        match &self.sets {
            IndexSets::Slicing(v) => v.iter().map(|s| s.size_bytes() as u64).sum(),
            IndexSets::PcEf(v) => v.iter().map(|s| s.size_bytes() as u64).sum(),
            IndexSets::RoaringLite(v) => v.iter().map(|s| s.size_bytes() as u64).sum(),
        }
    }

    pub fn bits_per_int(&self) -> f64 {
        let ints = self.total_integers();
        if ints == 0 {
            0.0
        } else {
            self.total_bytes() as f64 * 8.0 / ints as f64
        }
    }

    /// Aggregated shape/byte attribution; present only for sliced indexes.
    pub fn slicing_breakdown(&self) -> Option<SpaceBreakdown> {
        match &self.sets {
            IndexSets::Slicing(v) => Some(aggregate_breakdown(v)),
            _ => None,
        }
    }
}

/// Encodes every list of `collection` in `repr`.
pub fn build_index(collection: &Collection, repr: ReprKind) -> IndexFile {
    fn all<R: SetRep>(c: &Collection) -> Vec<R> {
        c.lists().iter().map(R::build).collect()
    }
    let sets = match repr {
        ReprKind::Slicing => IndexSets::Slicing(all(collection)),
        ReprKind::PcEf => IndexSets::PcEf(all(collection)),
        ReprKind::RoaringLite => IndexSets::RoaringLite(all(collection)),
    };
    IndexFile { universe: collection.universe(), sets }
}

/// Serializes an index to its container format.
pub fn write_index(index: &IndexFile, path: impl AsRef<Path>) -> Result<()> {
    let mut bytes = Vec::new();
    bytes.extend_from_slice(MAGIC);
    bytes.push(VERSION);
    bytes.push(index.repr().code());
    bytes.extend_from_slice(&(index.len() as u32).to_le_bytes());
    bytes.extend_from_slice(&index.universe.to_le_bytes());

    fn append<R: SetRep>(out: &mut Vec<u8>, sets: &[R]) {
        for set in sets {
            let blob = set.to_bytes();
            out.extend_from_slice(&(blob.len() as u32).to_le_bytes());
            out.extend_from_slice(&blob);
        }
    }
    match &index.sets {
        IndexSets::Slicing(v) => append(&mut bytes, v),
        IndexSets::PcEf(v) => append(&mut bytes, v),
        IndexSets::RoaringLite(v) => append(&mut bytes, v),
    }
    fs::write(path, bytes)?;
    Ok(())
}

/// Reads an index back, validating the container framing and every blob.
pub fn read_index(path: impl AsRef<Path>) -> Result<IndexFile> {
    let bytes = fs::read(path)?;
    if bytes.len() < 14 {
        return Err(Error::malformed("index header is truncated"));
    }
    if &bytes[0..4] != MAGIC {
        return Err(Error::malformed("bad magic (not an index file)"));
    }
    if bytes[4] != VERSION {
        return Err(Error::malformed(format!("unsupported format version {}", bytes[4])));
    }
    let repr = ReprKind::from_code(bytes[5])
        .ok_or_else(|| Error::malformed(format!("unknown representation code {}", bytes[5])))?;
    let count = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
    let universe = u32::from_le_bytes(bytes[10..14].try_into().unwrap());

    fn parse_all<R: SetRep>(bytes: &[u8], mut at: usize, count: usize) -> Result<Vec<R>> {
        let mut sets = Vec::with_capacity(count);
        for i in 0..count {
            if at + 4 > bytes.len() {
                return Err(Error::malformed(format!("list {i}: missing length prefix")));
            }
            let len = u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
            at += 4;
            if at + len > bytes.len() {
                return Err(Error::malformed(format!("list {i}: blob truncated")));
            }
            let set = R::from_bytes(&bytes[at..at + len])
                .map_err(|e| Error::malformed(format!("list {i}: {e}")))?;
            at += len;
            sets.push(set);
        }
        if at != bytes.len() {
            return Err(Error::malformed("trailing bytes after the last list"));
        }
        Ok(sets)
    }

    let sets = match repr {
        ReprKind::Slicing => IndexSets::Slicing(parse_all(&bytes, 14, count)?),
        ReprKind::PcEf => IndexSets::PcEf(parse_all(&bytes, 14, count)?),
        ReprKind::RoaringLite => IndexSets::RoaringLite(parse_all(&bytes, 14, count)?),
    };
    Ok(IndexFile { universe, sets })
}
