//! Seeded query workloads: list pairs for the boolean operations,
//! unsorted access positions, and bounded successor keys. A workload is a
//! pure function of (collection, seed), so two benchmark invocations over
//! the same data answer exactly the same queries.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::collection::Collection;

/// Queries of each kind per target (pairs overall; positions and keys per
/// list).
pub const QUERIES_PER_KIND: usize = 1000;

/// A fixed query set over one collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workload {
    pub seed: u64,
    /// List-id pairs for intersection and union.
    pub pairs: Vec<(usize, usize)>,
    /// Per list: positions below the list length, in no particular order.
    pub access_positions: Vec<Vec<usize>>,
    /// Per list: successor keys, each at most the list maximum so the
    /// answer always exists.
    pub next_geq_keys: Vec<Vec<u32>>,
}

impl Workload {
    pub fn generate(collection: &Collection, seed: u64) -> Workload {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lists = collection.lists();
        let pairs = if lists.is_empty() {
            Vec::new()
        } else {
            (0..QUERIES_PER_KIND)
                .map(|_| (rng.gen_range(0..lists.len()), rng.gen_range(0..lists.len())))
                .collect()
        };
        let access_positions = lists
            .iter()
            .map(|l| (0..QUERIES_PER_KIND).map(|_| rng.gen_range(0..l.len())).collect())
            .collect();
        let next_geq_keys = lists
            .iter()
            .map(|l| {
                (0..QUERIES_PER_KIND)
                    .map(|_| rng.gen_range(0..=l.max_value()))
                    .collect()
            })
            .collect();
        Workload { seed, pairs, access_positions, next_geq_keys }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_collection() -> Collection {
        Collection::new(
            1 << 12,
            vec![
                (0..64).map(|i| i * 9).collect(),
                vec![5, 100, 2000],
                (0..500).map(|i| i * 8 + 3).collect(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn workloads_are_deterministic_in_the_seed() {
        let c = sample_collection();
        assert_eq!(Workload::generate(&c, 9), Workload::generate(&c, 9));
        assert_ne!(Workload::generate(&c, 9), Workload::generate(&c, 10));
    }

    #[test]
    fn queries_stay_in_bounds() {
        let c = sample_collection();
        let w = Workload::generate(&c, 123);
        assert_eq!(w.pairs.len(), QUERIES_PER_KIND);
        for &(a, b) in &w.pairs {
            assert!(a < c.len() && b < c.len());
        }
        for (list, positions) in c.lists().iter().zip(&w.access_positions) {
            assert_eq!(positions.len(), QUERIES_PER_KIND);
            assert!(positions.iter().all(|&p| p < list.len()));
        }
        for (list, keys) in c.lists().iter().zip(&w.next_geq_keys) {
            assert_eq!(keys.len(), QUERIES_PER_KIND);
            assert!(keys.iter().all(|&k| k <= list.max_value()));
        }
    }

    #[test]
    fn positions_are_not_sorted() {
        // astronomically unlikely to come out sorted if genuinely random
        let c = sample_collection();
        let w = Workload::generate(&c, 5);
        let positions = &w.access_positions[2];
        assert!(positions.windows(2).any(|p| p[0] > p[1]));
    }
}
