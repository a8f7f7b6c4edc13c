//! Synthetic clustered sequences: runs of consecutive integers separated
//! by geometric jumps.
//!
//! Real document identifier lists are bursty — hits arrive in clusters of
//! near-consecutive values with long empty stretches between them. The
//! generator reproduces that texture with a two-state gap process: with
//! probability `run_prob` the next gap is exactly 1 (the run continues),
//! otherwise it is `1 + Geometric(p)` (a jump). The jump mean is rescaled
//! from the configured [`ClusterParams::gap_mean`] so that the expected
//! gap is `1 / target_density`; each list is re-drawn (up to a bounded
//! number of attempts) until its realized density lands within ±20% of
//! the target and its maximum stays inside the universe.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::collection::Collection;
use crate::{Error, Result};

/// Shape of the gap process: the probability of continuing a run with a
/// gap of one, and the pre-scale mean of the geometric jump taken
/// otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterParams {
    /// Probability of emitting a gap of exactly 1; must lie in (0, 1).
    pub run_prob: f64,
    /// Mean jump length before density rescaling; must exceed 1.
    pub gap_mean: f64,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams { run_prob: 0.9, gap_mean: 4.0 }
    }
}

/// How many times one list may be re-drawn before the parameters are
/// declared infeasible.
const MAX_ATTEMPTS: usize = 64;

/// Relative tolerance on the realized density of every generated list.
const DENSITY_TOLERANCE: f64 = 0.2;

/// Generates `lists` clustered sequences over `[0, universe)` whose
/// realized densities land within ±20% of `target_density`.
///
/// Deterministic: each list is drawn from its own stream of a counter
/// RNG keyed by (`seed`, list index), so a collection depends only on the
/// arguments, and changing `lists` does not reshuffle earlier lists.
pub fn generate_clustered(
    lists: usize,
    universe: u32,
    target_density: f64,
    params: ClusterParams,
    seed: u64,
) -> Result<Collection> {
    let infeasible = |reason: String| Err(Error::InfeasibleParameters { reason });
    if lists == 0 {
        return infeasible("at least one list is required".into());
    }
    if universe < 2 {
        return infeasible(format!("universe {universe} is too small to cluster"));
    }
    if !(target_density > 0.0 && target_density <= 1.0) {
        return infeasible(format!("target density {target_density} outside (0, 1]"));
    }
    if !(params.run_prob > 0.0 && params.run_prob < 1.0) {
        return infeasible(format!("run probability {} outside (0, 1)", params.run_prob));
    }
    if !(params.gap_mean > 1.0 && params.gap_mean.is_finite()) {
        return infeasible(format!("gap mean {} must be finite and exceed 1", params.gap_mean));
    }
    if target_density * f64::from(universe - 1) < 1.0 {
        return infeasible(format!(
            "density {target_density} is unreachable: fewer than one expected value in universe {universe}"
        ));
    }

    // Rescale the jump mean so the expected gap over both states is the
    // reciprocal of the target density.
    let mean_gap = 1.0 / target_density;
    let jump_mean = (mean_gap - params.run_prob) / (1.0 - params.run_prob);
    let jump = Geometric::new((1.0 / jump_mean).min(1.0))
        .expect("jump probability is in (0, 1] by construction");

    let mut out = Vec::with_capacity(lists);
    for list in 0..lists {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(list as u64 + 1);
        out.push(draw_list(&mut rng, universe, target_density, params.run_prob, &jump).ok_or_else(
            || Error::InfeasibleParameters {
                reason: format!(
                    "list {list}: no draw hit density {target_density} (±20%) inside universe {universe} after {MAX_ATTEMPTS} attempts"
                ),
            },
        )?);
    }
    Collection::new(universe, out)
}

/// One list: picks a span, walks gaps until the target count is reached,
/// and retries whenever the walk leaves the universe or misses the
/// density window.
fn draw_list(
    rng: &mut ChaCha8Rng,
    universe: u32,
    target_density: f64,
    run_prob: f64,
    jump: &Geometric,
) -> Option<Vec<u32>> {
    'attempt: for _ in 0..MAX_ATTEMPTS {
        let span = (universe - 1) as f64 * rng.gen_range(0.5..=1.0);
        let target_len = ((target_density * span).round() as usize).max(1);

        let mut values = Vec::with_capacity(target_len);
        let mut cur: i64 = -1;
        for _ in 0..target_len {
            let gap: i64 = if rng.gen::<f64>() < run_prob {
                1
            } else {
                1 + jump.sample(rng).min(u32::MAX as u64) as i64
            };
            cur += gap;
            if cur >= universe as i64 {
                continue 'attempt;
            }
            values.push(cur as u32);
        }

        let max = *values.last().unwrap();
        let realized = if max == 0 { 1.0 } else { values.len() as f64 / max as f64 };
        if (realized - target_density).abs() <= DENSITY_TOLERANCE * target_density {
            return Some(values);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_gives_identical_collections() {
        let p = ClusterParams::default();
        let a = generate_clustered(20, 1 << 18, 1e-2, p, 7).unwrap();
        let b = generate_clustered(20, 1 << 18, 1e-2, p, 7).unwrap();
        assert_eq!(a, b);
        let c = generate_clustered(20, 1 << 18, 1e-2, p, 8).unwrap();
        assert_ne!(a, c, "a different seed should reshuffle the data");
    }

    #[test]
    fn prefixes_are_stable_under_list_count() {
        let p = ClusterParams::default();
        let small = generate_clustered(5, 1 << 16, 1e-2, p, 11).unwrap();
        let large = generate_clustered(9, 1 << 16, 1e-2, p, 11).unwrap();
        assert_eq!(small.lists(), &large.lists()[..5]);
    }

    #[test]
    fn realized_density_stays_within_tolerance() {
        let c = generate_clustered(32, 1 << 20, 1e-2, ClusterParams::default(), 42).unwrap();
        assert_eq!(c.len(), 32);
        for list in c.lists() {
            let d = list.density();
            assert!(
                (0.8e-2..=1.2e-2).contains(&d),
                "density {d} escaped the ±20% window"
            );
            assert!(list.max_value() < c.universe());
        }
    }

    #[test]
    fn high_run_probability_yields_consecutive_runs() {
        let p = ClusterParams { run_prob: 0.995, gap_mean: 4.0 };
        let c = generate_clustered(4, 1 << 16, 0.9, p, 3).unwrap();
        for list in c.lists() {
            let gaps_of_one = list
                .values()
                .windows(2)
                .filter(|w| w[1] - w[0] == 1)
                .count();
            let frac = gaps_of_one as f64 / (list.len() - 1) as f64;
            assert!(frac > 0.98, "expected near-consecutive runs, got {frac}");
            assert!(list.density() > 0.72, "density {} far from 0.9", list.density());
        }
    }

    #[test]
    fn impossible_parameters_are_rejected() {
        let p = ClusterParams::default();
        let bad = |r: Result<Collection>| {
            assert!(matches!(r, Err(Error::InfeasibleParameters { .. })));
        };
        bad(generate_clustered(0, 1 << 16, 1e-2, p, 1));
        bad(generate_clustered(4, 1, 1e-2, p, 1));
        bad(generate_clustered(4, 1 << 16, 0.0, p, 1));
        bad(generate_clustered(4, 1 << 16, 1.5, p, 1));
        bad(generate_clustered(4, 1 << 16, 1e-2, ClusterParams { run_prob: 0.0, ..p }, 1));
        bad(generate_clustered(4, 1 << 16, 1e-2, ClusterParams { run_prob: 1.0, ..p }, 1));
        bad(generate_clustered(4, 1 << 16, 1e-2, ClusterParams { gap_mean: 1.0, ..p }, 1));
        // fewer than one expected value in the whole universe
        bad(generate_clustered(4, 64, 1e-3, p, 1));
    }
}
