//! Intersection kernel for the raw byte arrays held by sparse blocks.
//!
//! Inputs are strictly increasing `u8` slices of at most [`MAX_LEN`]
//! values; the output is `base + v` for every common `v`, in order. Two
//! interchangeable paths exist: a scalar two-pointer loop (always
//! available, and the reference the other is tested against) and a
//! string-match path using `PCMPESTRM` that compares a whole array against
//! sixteen bytes at once, compacts the hits with a pre-computed shuffle
//! table, and widens them to `u32` in one step. The vector path is picked
//! at runtime when the CPU supports it.

/// Upper bound on input lengths (sparse block arrays never exceed it).
pub const MAX_LEN: usize = 30;

/// Intersects two sorted byte arrays into `out` (which must hold at least
/// `min(left.len(), right.len())` slots); returns the count written.
#[inline]
pub fn small_array_intersect(left: &[u8], right: &[u8], base: u32, out: &mut [u32]) -> usize {
    debug_assert!(left.len() <= MAX_LEN && right.len() <= MAX_LEN);
    #[cfg(target_arch = "x86_64")]
    if x86::available() && !left.is_empty() && !right.is_empty() {
        // SAFETY: SSE4.2 and AVX2 support was just verified.
        return unsafe { x86::intersect(left, right, base, out) };
    }
    small_array_intersect_scalar(left, right, base, out)
}

/// Plain two-pointer merge; the portable path and the testing reference.
pub fn small_array_intersect_scalar(left: &[u8], right: &[u8], base: u32, out: &mut [u32]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < left.len() && j < right.len() {
        match left[i].cmp(&right[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out[k] = base + left[i] as u32;
                k += 1;
                i += 1;
                j += 1;
            }
        }
    }
    k
}

#[cfg(target_arch = "x86_64")]
mod x86 {
    use std::arch::x86_64::*;
    use std::sync::OnceLock;

    /// Shuffle masks indexed by a 16-bit match mask: entry `m` moves the
    /// byte positions of the set bits of `m` to the front; the rest of the
    /// row is 0x80, which `pshufb` turns into zero bytes.
    static COMPACT: OnceLock<Vec<[u8; 16]>> = OnceLock::new();

    fn compact_table() -> &'static [[u8; 16]] {
        COMPACT.get_or_init(|| {
            let mut table = vec![[0x80u8; 16]; 1 << 16];
            for (mask, row) in table.iter_mut().enumerate() {
                let mut k = 0;
                for j in 0..16 {
                    if mask >> j & 1 == 1 {
                        row[k] = j as u8;
                        k += 1;
                    }
                }
            }
            table
        })
    }

    #[inline]
    pub fn available() -> bool {
        static OK: OnceLock<bool> = OnceLock::new();
        *OK.get_or_init(|| {
            std::arch::is_x86_feature_detected!("sse4.2")
                && std::arch::is_x86_feature_detected!("avx2")
        })
    }

    /// Matches up to sixteen bytes of `l` against up to sixteen bytes of
    /// `r`, appending `base + v` for every byte of `r` that occurs in `l`.
    /// Stores in 8-lane groups, so `dst` needs 16 slots of slack; returns
    /// the true match count.
    ///
    /// # Safety
    /// Requires SSE4.2 + AVX2, 16 readable bytes at `l` and `r`, and the
    /// slack described above.
    #[target_feature(enable = "sse4.2,avx2")]
    unsafe fn probe16(l: *const u8, ll: i32, r: *const u8, rl: i32, dst: *mut u32, base: u32) -> usize {
        const IMM: i32 = _SIDD_UBYTE_OPS | _SIDD_CMP_EQUAL_ANY | _SIDD_BIT_MASK;
        let vl = _mm_lddqu_si128(l as *const __m128i);
        let vr = _mm_lddqu_si128(r as *const __m128i);
        let mask = _mm_extract_epi32::<0>(_mm_cmpestrm::<IMM>(vl, ll, vr, rl)) as u32 as usize;
        let matched = mask.count_ones() as usize;
        if matched == 0 {
            return 0;
        }
        let shuffle = _mm_lddqu_si128(compact_table()[mask].as_ptr() as *const __m128i);
        let packed = _mm_shuffle_epi8(vr, shuffle);
        let vbase = _mm256_set1_epi32(base as i32);
        let lo = _mm256_add_epi32(_mm256_cvtepu8_epi32(packed), vbase);
        _mm256_storeu_si256(dst as *mut __m256i, lo);
        if matched > 8 {
            let hi = _mm256_add_epi32(_mm256_cvtepu8_epi32(_mm_bsrli_si128::<8>(packed)), vbase);
            _mm256_storeu_si256(dst.add(8) as *mut __m256i, hi);
        }
        matched
    }

    /// # Safety
    /// Requires SSE4.2 + AVX2 and non-empty inputs of at most
    /// [`super::MAX_LEN`] bytes each.
    #[target_feature(enable = "sse4.2,avx2")]
    pub unsafe fn intersect(left: &[u8], right: &[u8], base: u32, out: &mut [u32]) -> usize {
        // Padded copies make the 16-byte loads safe regardless of input
        // length; the explicit lengths passed to the string comparison
        // keep padding out of the result. Matches land in a scratch area
        // first because the stores write whole 8-lane groups.
        let mut lbuf = [0u8; 32];
        let mut rbuf = [0u8; 32];
        lbuf[..left.len()].copy_from_slice(left);
        rbuf[..right.len()].copy_from_slice(right);
        let (ll, rl) = (left.len() as i32, right.len() as i32);
        let mut scratch = [0u32; 48];
        let dst = scratch.as_mut_ptr();

        let matched = if ll <= 16 && rl <= 16 {
            probe16(lbuf.as_ptr(), ll, rbuf.as_ptr(), rl, dst, base)
        } else if ll <= 16 {
            // right spills into a second group; hits stay in right-order
            let m = probe16(lbuf.as_ptr(), ll, rbuf.as_ptr(), 16, dst, base);
            m + probe16(lbuf.as_ptr(), ll, rbuf.as_ptr().add(16), rl - 16, dst.add(m), base)
        } else if rl <= 16 {
            // left spills: later left bytes only match later right bytes,
            // so concatenating the two probes keeps the output sorted
            let m = probe16(lbuf.as_ptr(), 16, rbuf.as_ptr(), rl, dst, base);
            m + probe16(lbuf.as_ptr().add(16), ll - 16, rbuf.as_ptr(), rl, dst.add(m), base)
        } else {
            return super::small_array_intersect_scalar(left, right, base, out);
        };
        out[..matched].copy_from_slice(&scratch[..matched]);
        matched
    }
}
