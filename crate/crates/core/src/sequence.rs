//! Sorted integer sequences over a bounded universe, plus the two classic
//! ways of partitioning them: by cardinality (fixed element count per part)
//! and by universe (fixed value range per part).

use crate::{Error, Result};

/// A strictly increasing sequence of 32-bit integers together with a
/// universe bound `universe >= max value`.
///
/// Sequences are never empty; [`SortedSequence::new`] enforces this along
/// with strict monotonicity and the universe bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedSequence {
    values: Vec<u32>,
    universe: u32,
}

impl SortedSequence {
    /// Validates `values` and wraps it with its universe bound.
    pub fn new(values: Vec<u32>, universe: u32) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        for i in 1..values.len() {
            if values[i - 1] >= values[i] {
                return Err(Error::NotStrictlyIncreasing { index: i });
            }
        }
        let max = *values.last().unwrap();
        if universe < max {
            return Err(Error::UniverseTooSmall { max, universe });
        }
        Ok(SortedSequence { values, universe })
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Number of stored integers (always at least one).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The declared upper bound on stored values (inclusive).
    pub fn universe(&self) -> u32 {
        self.universe
    }

    /// Largest stored value.
    pub fn max_value(&self) -> u32 {
        *self.values.last().unwrap()
    }

    /// `len / max_value`, the fraction of the occupied range that is
    /// populated. A sequence whose largest value is zero (the singleton
    /// `[0]`) has density 1.0 by convention.
    pub fn density(&self) -> f64 {
        let max = self.max_value();
        if max == 0 {
            1.0
        } else {
            self.len() as f64 / max as f64
        }
    }
}

/// Which rule produced a [`Partitioning`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionMode {
    /// Consecutive runs of a fixed number of elements.
    ByCardinality,
    /// Fixed-width value ranges `[k*span, (k+1)*span)`, empties retained.
    ByUniverse,
}

/// The result of cutting a sequence into parts. Concatenating `parts` in
/// order (empty ones contribute nothing) restores the original sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partitioning {
    parts: Vec<Vec<u32>>,
    mode: PartitionMode,
    parameter: u32,
}

impl Partitioning {
    pub fn parts(&self) -> &[Vec<u32>] {
        &self.parts
    }

    pub fn mode(&self) -> PartitionMode {
        self.mode
    }

    /// The part length (by cardinality) or span width (by universe) that
    /// produced this partitioning.
    pub fn parameter(&self) -> u32 {
        self.parameter
    }

    /// Concatenates the parts back into a flat sequence.
    pub fn flatten(&self) -> Vec<u32> {
        self.parts.iter().flatten().copied().collect()
    }
}

/// Cuts `seq` into `ceil(len / part_len)` consecutive parts of `part_len`
/// elements each; only the last part may be shorter. `part_len >= 1`.
pub fn partition_by_cardinality(seq: &SortedSequence, part_len: u32) -> Partitioning {
    assert!(part_len >= 1, "part length must be positive");
    let parts = seq
        .values()
        .chunks(part_len as usize)
        .map(|c| c.to_vec())
        .collect();
    Partitioning {
        parts,
        mode: PartitionMode::ByCardinality,
        parameter: part_len,
    }
}

/// Cuts `seq` into `ceil((universe + 1) / span)` value ranges of width
/// `span`; part `k` holds exactly the values in `[k*span, (k+1)*span)`,
/// and parts whose range is unpopulated are retained empty. `span >= 1`.
///
/// The part count depends only on the universe bound and `span`, never on
/// which values happen to be present. Note that a small `span` under a
/// large universe materializes one `Vec` per range.
pub fn partition_by_universe(seq: &SortedSequence, span: u32) -> Partitioning {
    assert!(span >= 1, "span must be positive");
    let part_count = ((seq.universe() as u64 + 1).div_ceil(span as u64)) as usize;
    let mut parts = vec![Vec::new(); part_count];
    for &v in seq.values() {
        parts[(v / span) as usize].push(v);
    }
    Partitioning {
        parts,
        mode: PartitionMode::ByUniverse,
        parameter: span,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(values: &[u32], universe: u32) -> SortedSequence {
        SortedSequence::new(values.to_vec(), universe).unwrap()
    }

    #[test]
    fn rejects_empty_input() {
        assert_eq!(SortedSequence::new(vec![], 10), Err(Error::EmptyInput));
    }

    #[test]
    fn rejects_duplicates_and_disorder() {
        assert_eq!(
            SortedSequence::new(vec![1, 1], 10),
            Err(Error::NotStrictlyIncreasing { index: 1 })
        );
        assert_eq!(
            SortedSequence::new(vec![1, 5, 4], 10),
            Err(Error::NotStrictlyIncreasing { index: 2 })
        );
    }

    #[test]
    fn rejects_undersized_universe() {
        assert_eq!(
            SortedSequence::new(vec![3, 9], 8),
            Err(Error::UniverseTooSmall { max: 9, universe: 8 })
        );
        // the bound is inclusive: universe == max is fine
        assert!(SortedSequence::new(vec![3, 9], 9).is_ok());
    }

    #[test]
    fn density_conventions() {
        assert_eq!(seq(&[0], 0).density(), 1.0);
        assert_eq!(seq(&[0, 5], 10).density(), 2.0 / 5.0);
        // a run starting at zero is slightly denser than 1
        assert_eq!(seq(&[0, 1, 2, 3], 3).density(), 4.0 / 3.0);
    }

    #[test]
    fn cardinality_parts_have_fixed_length() {
        let s = seq(&(0..10).map(|i| i * 3).collect::<Vec<_>>(), 27);
        let p = partition_by_cardinality(&s, 4);
        assert_eq!(p.parts().len(), 3);
        assert_eq!(p.parts()[0].len(), 4);
        assert_eq!(p.parts()[1].len(), 4);
        assert_eq!(p.parts()[2].len(), 2);
        assert_eq!(p.flatten(), s.values());
        assert_eq!(p.mode(), PartitionMode::ByCardinality);
        assert_eq!(p.parameter(), 4);
    }

    #[test]
    fn universe_parts_follow_value_ranges() {
        let s = seq(&[0, 1, 9, 10, 19], 21);
        let p = partition_by_universe(&s, 10);
        // ceil(22 / 10) = 3 parts, one per value decade
        assert_eq!(p.parts().len(), 3);
        assert_eq!(p.parts()[0], vec![0, 1, 9]);
        assert_eq!(p.parts()[1], vec![10, 19]);
        assert!(p.parts()[2].is_empty());
        assert_eq!(p.flatten(), s.values());
    }

    #[test]
    fn universe_part_count_ignores_population() {
        // same universe, very different contents: identical part counts
        let a = partition_by_universe(&seq(&[0], 55), 8);
        let b = partition_by_universe(&seq(&(0..=55).collect::<Vec<_>>(), 55), 8);
        assert_eq!(a.parts().len(), 7);
        assert_eq!(b.parts().len(), 7);
    }

    #[test]
    fn span_larger_than_universe_gives_single_part() {
        let s = seq(&[2, 3, 5], 7);
        let p = partition_by_universe(&s, 100);
        assert_eq!(p.parts().len(), 1);
        assert_eq!(p.parts()[0], s.values());
    }

    #[test]
    fn empty_ranges_between_values_are_kept() {
        let s = seq(&[0, 35], 39);
        let p = partition_by_universe(&s, 10);
        assert_eq!(p.parts().len(), 4);
        assert!(p.parts()[1].is_empty());
        assert!(p.parts()[2].is_empty());
        assert_eq!(p.parts()[3], vec![35]);
    }
}
