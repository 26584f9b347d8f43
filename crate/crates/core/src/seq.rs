//! Static sequences over `[1..σ]` with access, rank, select and partial rank.
//!
//! The representation is a wavelet matrix: symbol `a` is stored as the
//! `L`-bit value `a − 1` (`L` = bit width of `σ − 1`), one bitvector per bit,
//! most significant bit first. Each level stably moves the zeros ahead of
//! the ones, so every operation is one walk over `L` levels with O(1) rank or
//! select per level.

use serde::{Deserialize, Serialize};

use crate::bitvec::{BitVec, BitVecBuilder};
use crate::error::{Error, Result};

/// Summary of a sequence: length, alphabet, zero-order entropy and counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceStats {
    pub n: usize,
    pub sigma: usize,
    /// Empirical zero-order entropy in bits per symbol.
    pub entropy_h: f64,
    /// `counts[a − 1]` is the number of occurrences of `a`.
    pub counts: Vec<usize>,
}

impl SequenceStats {
    pub fn from_counts(counts: Vec<usize>) -> Self {
        let n: usize = counts.iter().sum();
        let mut h = 0.0;
        for &c in counts.iter().filter(|&&c| c > 0) {
            let p = c as f64 / n as f64;
            h -= p * p.log2();
        }
        SequenceStats {
            n,
            sigma: counts.len(),
            entropy_h: h.max(0.0),
            counts,
        }
    }

    /// Occurrences of `a` in the whole sequence (0 for out-of-range symbols).
    pub fn count(&self, a: usize) -> usize {
        if a == 0 {
            return 0;
        }
        self.counts.get(a - 1).copied().unwrap_or(0)
    }
}

/// An immutable sequence `S[1..n]` over the alphabet `[1..σ]`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "SequenceData")]
pub struct Sequence {
    n: usize,
    sigma: usize,
    levels: Vec<BitVec>,
    zeros: Vec<usize>,
    stats: SequenceStats,
    /// `starts[a − 1]`: where the occurrences of `a` begin after the last
    /// level, derived from the counts.
    #[serde(skip)]
    starts: Vec<usize>,
}

#[derive(Deserialize)]
struct SequenceData {
    n: usize,
    sigma: usize,
    levels: Vec<BitVec>,
    zeros: Vec<usize>,
    stats: SequenceStats,
}

impl TryFrom<SequenceData> for Sequence {
    type Error = Error;

    fn try_from(d: SequenceData) -> Result<Self> {
        let depth = if d.sigma == 0 {
            0
        } else {
            bit_width(d.sigma - 1) as usize
        };
        if d.sigma == 0
            || d.levels.len() != depth
            || d.zeros.len() != depth
            || d.stats.counts.len() != d.sigma
            || d.stats.n != d.n
            || d.levels
                .iter()
                .zip(&d.zeros)
                .any(|(bv, &z)| bv.len() != d.n || bv.count_zeros() != z)
        {
            return Err(Error::Corrupt("sequence layout is inconsistent".into()));
        }
        Ok(Sequence {
            starts: bottom_starts(&d.stats.counts, depth as u32),
            n: d.n,
            sigma: d.sigma,
            levels: d.levels,
            zeros: d.zeros,
            stats: d.stats,
        })
    }
}

/// Start of each value's run in the last level, where values appear ordered
/// by their bit-reversed codes.
fn bottom_starts(counts: &[usize], depth: u32) -> Vec<usize> {
    let rev = |v: usize| {
        if depth == 0 {
            0
        } else {
            v.reverse_bits() >> (usize::BITS - depth)
        }
    };
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_unstable_by_key(|&v| rev(v));
    let mut starts = vec![0; counts.len()];
    let mut acc = 0;
    for v in order {
        starts[v] = acc;
        acc += counts[v];
    }
    starts
}

impl std::fmt::Debug for Sequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Sequence")
            .field("n", &self.n)
            .field("sigma", &self.sigma)
            .field("levels", &self.levels.len())
            .finish()
    }
}

impl PartialEq for Sequence {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.sigma == other.sigma && self.levels == other.levels && self.zeros == other.zeros
    }
}

/// Number of bits needed to write `x`.
pub(crate) fn bit_width(x: usize) -> u32 {
    usize::BITS - x.leading_zeros()
}

impl Sequence {
    /// Builds a sequence; every symbol must lie in `[1..sigma]`.
    ///
    /// ```
    /// use rangefreq::Sequence;
    /// let s = Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap();
    /// assert_eq!(s.access(4).unwrap(), 3);
    /// assert_eq!(s.rank(1, 5).unwrap(), 3);
    /// assert_eq!(s.select(2, 2).unwrap(), 6);
    /// ```
    pub fn new(symbols: &[usize], sigma: usize) -> Result<Self> {
        if sigma == 0 {
            return Err(Error::Validation("alphabet size must be at least 1".into()));
        }
        let mut counts = vec![0usize; sigma];
        for (p, &a) in symbols.iter().enumerate() {
            if a == 0 || a > sigma {
                return Err(Error::Validation(format!(
                    "symbol {a} at position {} is outside [1..{sigma}]",
                    p + 1
                )));
            }
            counts[a - 1] += 1;
        }
        let n = symbols.len();
        let depth = bit_width(sigma - 1);
        let mut cur: Vec<usize> = symbols.iter().map(|&a| a - 1).collect();
        let mut levels = Vec::with_capacity(depth as usize);
        let mut zeros = Vec::with_capacity(depth as usize);
        let mut next = Vec::with_capacity(n);
        for l in 0..depth {
            let shift = depth - 1 - l;
            let mut b = BitVecBuilder::with_capacity(n);
            next.clear();
            for &v in &cur {
                let bit = (v >> shift) & 1 == 1;
                b.push(bit);
                if !bit {
                    next.push(v);
                }
            }
            zeros.push(next.len());
            next.extend(cur.iter().copied().filter(|&v| (v >> shift) & 1 == 1));
            std::mem::swap(&mut cur, &mut next);
            levels.push(b.build());
        }
        Ok(Sequence {
            n,
            sigma,
            levels,
            zeros,
            starts: bottom_starts(&counts, depth),
            stats: SequenceStats::from_counts(counts),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn stats(&self) -> &SequenceStats {
        &self.stats
    }

    /// Occurrences of `a` in the whole sequence.
    pub fn count(&self, a: usize) -> usize {
        self.stats.count(a)
    }

    /// Heap bits of the level bitvectors and their directories.
    pub fn size_bits(&self) -> usize {
        self.levels.iter().map(BitVec::size_bits).sum::<usize>() + 64 * self.zeros.len()
    }

    fn check_pos(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.n {
            return Err(Error::OutOfBounds { pos: k, len: self.n });
        }
        Ok(())
    }

    fn check_symbol(&self, a: usize) -> Result<()> {
        if a == 0 || a > self.sigma {
            return Err(Error::Validation(format!("symbol {a} is outside [1..{}]", self.sigma)));
        }
        Ok(())
    }

    /// `S[k]`.
    pub fn access(&self, k: usize) -> Result<usize> {
        self.check_pos(k)?;
        Ok(self.access_unchecked(k))
    }

    pub fn access_unchecked(&self, k: usize) -> usize {
        let mut p = k - 1;
        let mut v = 0;
        for (bv, &z) in self.levels.iter().zip(&self.zeros) {
            v <<= 1;
            if bv.get_unchecked(p + 1) {
                v |= 1;
                p = z + bv.rank1_unchecked(p);
            } else {
                p = bv.rank0_unchecked(p);
            }
        }
        v + 1
    }

    /// Occurrences of `a` in `S[1..k]`.
    pub fn rank(&self, a: usize, k: usize) -> Result<usize> {
        self.check_symbol(a)?;
        if k > self.n {
            return Err(Error::OutOfBounds { pos: k, len: self.n });
        }
        Ok(self.rank_unchecked(a, k))
    }

    pub fn rank_unchecked(&self, a: usize, k: usize) -> usize {
        let v = a - 1;
        let depth = self.levels.len();
        let mut e = k;
        for (l, (bv, &z)) in self.levels.iter().zip(&self.zeros).enumerate() {
            if (v >> (depth - 1 - l)) & 1 == 1 {
                e = z + bv.rank1_unchecked(e);
            } else {
                e = bv.rank0_unchecked(e);
            }
        }
        e - self.starts[v]
    }

    /// Position of the `r`-th occurrence of `a`.
    pub fn select(&self, a: usize, r: usize) -> Result<usize> {
        self.check_symbol(a)?;
        if r == 0 || r > self.count(a) {
            return Err(Error::NotFound(format!(
                "occurrence #{r} of symbol {a} (it occurs {} times)",
                self.count(a)
            )));
        }
        Ok(self.select_unchecked(a, r))
    }

    pub fn select_unchecked(&self, a: usize, r: usize) -> usize {
        let v = a - 1;
        let depth = self.levels.len();
        let mut p = self.starts[v] + r - 1;
        for l in (0..depth).rev() {
            let bv = &self.levels[l];
            if (v >> (depth - 1 - l)) & 1 == 1 {
                p = bv.select1_unchecked(p - self.zeros[l] + 1) - 1;
            } else {
                p = bv.select0_unchecked(p + 1) - 1;
            }
        }
        p + 1
    }

    /// `rank(S[k], k)`: how many times the symbol at `k` occurs up to `k`.
    pub fn partial_rank(&self, k: usize) -> Result<usize> {
        self.check_pos(k)?;
        Ok(self.access_and_partial_rank(k).1)
    }

    /// `(S[k], rank(S[k], k))` from a single walk down the levels.
    pub fn access_and_partial_rank(&self, k: usize) -> (usize, usize) {
        let mut p = k - 1;
        let mut v = 0;
        for (bv, &z) in self.levels.iter().zip(&self.zeros) {
            v <<= 1;
            if bv.get_unchecked(p + 1) {
                v |= 1;
                p = z + bv.rank1_unchecked(p);
            } else {
                p = bv.rank0_unchecked(p);
            }
        }
        (v + 1, p - self.starts[v] + 1)
    }

    /// Position of the previous occurrence of `S[k]`, or 0 if there is none.
    pub fn prev_occurrence(&self, k: usize) -> Result<usize> {
        self.check_pos(k)?;
        Ok(self.prev_occurrence_unchecked(k))
    }

    pub fn prev_occurrence_unchecked(&self, k: usize) -> usize {
        let (a, r) = self.access_and_partial_rank(k);
        if r == 1 {
            0
        } else {
            self.select_unchecked(a, r - 1)
        }
    }

    /// Calls `emit(a, occ)` for every symbol `a` occurring `occ >= at_least`
    /// times in `S[i..j]`, ascending by symbol (unchecked; `at_least >= 1`).
    /// Subtrees holding fewer than `at_least` positions are skipped. Returns
    /// the number of bitvector rank lookups made.
    pub fn range_counts_unchecked(
        &self,
        i: usize,
        j: usize,
        at_least: usize,
        mut emit: impl FnMut(usize, usize),
    ) -> u64 {
        let depth = self.levels.len();
        let mut lookups = 0;
        let mut stack = vec![(0usize, 0usize, i - 1, j)];
        while let Some((l, v, s, e)) = stack.pop() {
            if e - s < at_least {
                continue;
            }
            if l == depth {
                emit(v + 1, e - s);
                continue;
            }
            let (bv, z) = (&self.levels[l], self.zeros[l]);
            let (s1, e1) = (bv.rank1_unchecked(s), bv.rank1_unchecked(e));
            lookups += 2;
            stack.push((l + 1, (v << 1) | 1, z + s1, z + e1));
            stack.push((l + 1, v << 1, s - s1, e - e1));
        }
        lookups
    }

    /// Decodes the whole sequence.
    pub fn to_vec(&self) -> Vec<usize> {
        // Replay the stable partitions, tracking each slot's original index.
        let mut vals = vec![0usize; self.n];
        let mut origin: Vec<usize> = (0..self.n).collect();
        let mut next = Vec::with_capacity(self.n);
        for bv in &self.levels {
            next.clear();
            for (p, &o) in origin.iter().enumerate() {
                let bit = bv.get_unchecked(p + 1);
                vals[o] = (vals[o] << 1) | bit as usize;
                if !bit {
                    next.push(o);
                }
            }
            next.extend(
                origin
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| bv.get_unchecked(p + 1))
                    .map(|(_, &o)| o),
            );
            std::mem::swap(&mut origin, &mut next);
        }
        vals.iter().map(|v| v + 1).collect()
    }

    /// The previous-occurrence array `C[1..n]` (0-indexed storage).
    pub fn prev_array(&self) -> Vec<usize> {
        prev_links(&self.to_vec(), self.sigma)
    }
}

/// `C[k]` for every `k` of a raw symbol slice, by a last-seen table.
pub(crate) fn prev_links(symbols: &[usize], sigma: usize) -> Vec<usize> {
    let mut last = vec![0usize; sigma + 1];
    symbols
        .iter()
        .enumerate()
        .map(|(p, &a)| std::mem::replace(&mut last[a], p + 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const S: [usize; 7] = [1, 2, 1, 3, 1, 2, 1];

    fn example() -> Sequence {
        Sequence::new(&S, 3).unwrap()
    }

    #[test]
    fn build_examples() {
        let s = example();
        assert_eq!(s.stats().counts, vec![4, 2, 1]);
        let e = Sequence::new(&[], 1).unwrap();
        assert_eq!(e.len(), 0);
        assert!(e.access(1).is_err());
        assert!(matches!(Sequence::new(&[5], 3), Err(Error::Validation(_))));
        assert!(Sequence::new(&[0], 3).is_err());
    }

    #[test]
    fn access_rank_select_examples() {
        let s = example();
        assert_eq!(s.access(4).unwrap(), 3);
        assert!(s.access(8).is_err());
        assert_eq!(Sequence::new(&[9], 9).unwrap().access(1).unwrap(), 9);
        assert_eq!(s.rank(1, 5).unwrap(), 3);
        assert_eq!(s.rank(2, 0).unwrap(), 0);
        assert_eq!(s.rank(3, 7).unwrap(), 1);
        assert_eq!(s.select(2, 2).unwrap(), 6);
        assert_eq!(s.select(3, 1).unwrap(), 4);
        assert!(matches!(s.select(3, 2), Err(Error::NotFound(_))));
    }

    #[test]
    fn partial_rank_and_prev_examples() {
        let s = example();
        assert_eq!(s.partial_rank(5).unwrap(), 3);
        assert_eq!(s.partial_rank(1).unwrap(), 1);
        assert_eq!(s.partial_rank(6).unwrap(), 2);
        let c: Vec<usize> = (1..=7).map(|k| s.prev_occurrence(k).unwrap()).collect();
        assert_eq!(c, vec![0, 0, 1, 0, 3, 2, 5]);
        assert_eq!(s.prev_array(), c);
    }

    #[test]
    fn entropy_matches_formula() {
        let s = example();
        let h = 4.0 / 7.0 * (7.0f64 / 4.0).log2() + 2.0 / 7.0 * (7.0f64 / 2.0).log2() + 1.0 / 7.0 * 7.0f64.log2();
        assert!((s.stats().entropy_h - h).abs() < 1e-12);
        assert!(s.stats().entropy_h <= 3f64.log2());
    }

    #[test]
    fn unary_alphabet() {
        let s = Sequence::new(&[1, 1, 1], 1).unwrap();
        assert_eq!(s.access(2).unwrap(), 1);
        assert_eq!(s.rank(1, 2).unwrap(), 2);
        assert_eq!(s.select(1, 3).unwrap(), 3);
        assert_eq!(s.prev_occurrence(3).unwrap(), 2);
    }

    #[test]
    fn random_sequences_match_scans() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for round in 0..200 {
            let sigma = [2, 5, 64, 300][round % 4];
            let n = rng.gen_range(0..=5000);
            let sym: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=sigma)).collect();
            let s = Sequence::new(&sym, sigma).unwrap();
            assert_eq!(s.to_vec(), sym);
            let c = prev_links(&sym, sigma);
            let mut seen = vec![0usize; sigma + 1];
            for k in 1..=n {
                let a = sym[k - 1];
                seen[a] += 1;
                assert_eq!(s.access(k).unwrap(), a);
                assert_eq!(s.partial_rank(k).unwrap(), seen[a]);
                assert_eq!(s.select(a, seen[a]).unwrap(), k);
                assert_eq!(s.prev_occurrence(k).unwrap(), c[k - 1]);
            }
            for _ in 0..200 {
                let a = rng.gen_range(1..=sigma);
                let k = rng.gen_range(0..=n);
                let naive = sym[..k].iter().filter(|&&x| x == a).count();
                assert_eq!(s.rank(a, k).unwrap(), naive);
            }
        }
    }
}
