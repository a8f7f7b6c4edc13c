//! Representation-generic intersection drivers.
//!
//! Two cursor contracts cover the two partitioning paradigms:
//!
//! * [`ValueCursor`] steps through individual elements and supports a
//!   monotone `next_geq` probe — the natural interface for encodings that
//!   partition by cardinality and carry skip pointers.
//! * [`PartitionCursor`] steps through universe-aligned containers by
//!   identifier — the natural interface for encodings that partition by
//!   value range, where whole containers can be matched or skipped.
//!
//! The drivers own the traversal logic only; element-level work is done by
//! the cursors (candidate propagation) or by a caller-supplied container
//! kernel (identifier matching).

use crate::{Error, Result};

/// Element-level cursor over a sorted set.
///
/// A fresh cursor is parked on the smallest element. Values returned over
/// the lifetime of a cursor are strictly increasing, and `next_geq` must
/// never be called with a smaller argument than a previous call.
pub trait ValueCursor {
    /// The element the cursor is parked on, or `None` once exhausted.
    fn current(&self) -> Option<u32>;

    /// Advances past the current element; returns the new current element.
    fn next(&mut self) -> Option<u32>;

    /// Advances to the first element `>= lower` (a no-op if the current
    /// element already qualifies); returns it, or `None` if the set has no
    /// such element.
    fn next_geq(&mut self, lower: u32) -> Option<u32>;
}

/// Container-level cursor over a set partitioned by value range.
// `len` describes the current partition, which is never empty; pairing it
// with an `is_empty` would suggest otherwise (`at_end` covers exhaustion).
#[allow(clippy::len_without_is_empty)]
pub trait PartitionCursor {
    /// Borrowed handle onto the payload of the current partition.
    type Container<'a>
    where
        Self: 'a;

    /// True once the cursor has moved past the last partition.
    fn at_end(&self) -> bool;

    /// Identifier of the current partition. Only valid while `!at_end()`.
    fn id(&self) -> u32;

    /// Number of elements in the current partition.
    fn len(&self) -> usize;

    /// Moves to the next partition.
    fn next(&mut self);

    /// Moves forward to the first partition whose identifier is `>= id`
    /// (a no-op if the current one already qualifies).
    fn advance(&mut self, id: u32);

    /// Payload of the current partition. Only valid while `!at_end()`.
    fn container(&self) -> Self::Container<'_>;
}

/// Intersects two sets through their value cursors by candidate
/// propagation: seed the candidate from `a`, probe `b` for the first
/// element `>= candidate`, and on a miss adopt the probe result as the new
/// candidate and swing back to `a`. Every equal pair is emitted once.
///
/// Designating the shorter input as `a` minimizes cursor steps but is not
/// required for correctness. Returns the number of values written.
pub fn intersect_by_candidate<A, B>(a: &mut A, b: &mut B, out: &mut [u32]) -> Result<usize>
where
    A: ValueCursor,
    B: ValueCursor,
{
    let mut size = 0;
    let Some(mut candidate) = a.current() else {
        return Ok(0);
    };
    loop {
        match b.next_geq(candidate) {
            None => break,
            Some(z) if z == candidate => {
                if size == out.len() {
                    return Err(Error::BufferTooSmall { needed: size + 1, got: out.len() });
                }
                out[size] = candidate;
                size += 1;
                match a.next() {
                    Some(v) => candidate = v,
                    None => break,
                }
            }
            Some(z) => {
                // z > candidate: the candidate is missing from b. z becomes
                // the new candidate, and the probe swings back to a. If a
                // also holds z, the next b probe re-confirms it (its cursor
                // is already parked there) and the match is emitted.
                match a.next_geq(z) {
                    Some(w) => candidate = w,
                    None => break,
                }
            }
        }
    }
    Ok(size)
}

/// Intersects two sets through their partition cursors: walk both by
/// identifier, skip non-matching partitions with `advance`, and hand each
/// matched pair to `container_and`, which reads the two cursors' current
/// containers, intersects them into `out`, and returns the count written.
pub fn intersect_by_partition<L, R, K>(
    l: &mut L,
    r: &mut R,
    mut container_and: K,
    out: &mut [u32],
) -> Result<usize>
where
    L: PartitionCursor,
    R: PartitionCursor,
    K: FnMut(u32, &L, &R, &mut [u32]) -> usize,
{
    let mut size = 0;
    while !l.at_end() && !r.at_end() {
        let (il, ir) = (l.id(), r.id());
        if il == ir {
            let worst = l.len().min(r.len());
            if out.len() - size < worst {
                return Err(Error::BufferTooSmall { needed: size + worst, got: out.len() });
            }
            size += container_and(il, l, r, &mut out[size..]);
            l.next();
            r.next();
        } else if il < ir {
            l.advance(ir);
        } else {
            r.advance(il);
        }
    }
    Ok(size)
}

/// A [`ValueCursor`] over a plain sorted slice. Used as the reference
/// cursor in tests and by callers that want to run the candidate driver
/// against already-decoded data.
#[derive(Debug, Clone)]
pub struct SliceCursor<'a> {
    values: &'a [u32],
    pos: usize,
}

impl<'a> SliceCursor<'a> {
    pub fn new(values: &'a [u32]) -> Self {
        SliceCursor { values, pos: 0 }
    }
}

impl ValueCursor for SliceCursor<'_> {
    fn current(&self) -> Option<u32> {
        self.values.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<u32> {
        self.pos += 1;
        self.current()
    }

    fn next_geq(&mut self, lower: u32) -> Option<u32> {
        match self.current() {
            Some(v) if v >= lower => Some(v),
            Some(_) => {
                self.pos += self.values[self.pos..].partition_point(|&v| v < lower);
                self.current()
            }
            None => None,
        }
    }
}
