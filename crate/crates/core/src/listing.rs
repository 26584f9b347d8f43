//! Online listing of the distinct symbols of a range, each with its leftmost
//! occurrence, driven by range minima over the previous-occurrence array `C`.
//!
//! Both variants mark symbols in a [`MarkSet`] instead of comparing `C`
//! values against the range start, and both stop as soon as `limit` items
//! have been produced.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::rmq::{ImplicitRmq, SparseRmqIndex};
use crate::seq::Sequence;
use crate::stats::QueryStats;

/// A distinct symbol of a range and the position of its first occurrence
/// there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DistinctItem {
    pub symbol: usize,
    pub leftmost_pos: usize,
}

/// A σ-bit bitmap plus the list of set symbols, so clearing costs time
/// proportional to what was marked.
#[derive(Debug, Clone, Default)]
pub struct MarkSet {
    seen: Vec<u64>,
    touched: Vec<usize>,
}

impl MarkSet {
    pub fn new(sigma: usize) -> Self {
        MarkSet {
            seen: vec![0; (sigma + 1).div_ceil(64)],
            touched: Vec::new(),
        }
    }

    /// Grows the bitmap so symbols up to `sigma` fit.
    pub fn ensure(&mut self, sigma: usize) {
        let words = (sigma + 1).div_ceil(64);
        if self.seen.len() < words {
            self.seen.resize(words, 0);
        }
    }

    pub fn is_marked(&self, a: usize) -> bool {
        (self.seen[a / 64] >> (a % 64)) & 1 == 1
    }

    /// Marks `a`; returns false if it was already marked.
    pub fn mark(&mut self, a: usize) -> bool {
        let w = &mut self.seen[a / 64];
        let bit = 1u64 << (a % 64);
        if *w & bit != 0 {
            return false;
        }
        *w |= bit;
        self.touched.push(a);
        true
    }

    pub fn len(&self) -> usize {
        self.touched.len()
    }

    pub fn is_empty(&self) -> bool {
        self.touched.is_empty()
    }

    pub fn clear(&mut self) {
        for a in self.touched.drain(..) {
            self.seen[a / 64] &= !(1u64 << (a % 64));
        }
        debug_assert!(self.is_clean());
    }

    /// No bit set anywhere.
    pub fn is_clean(&self) -> bool {
        self.touched.is_empty() && self.seen.iter().all(|&w| w == 0)
    }
}

fn check_args(seq: &Sequence, index_len: usize, i: usize, j: usize, limit: usize) -> Result<()> {
    if index_len != seq.len() {
        return Err(Error::Validation(format!(
            "index covers {index_len} positions but the sequence has {}",
            seq.len()
        )));
    }
    check_range(i, j, seq.len())?;
    if limit == 0 {
        return Err(Error::Validation("listing limit must be at least 1".into()));
    }
    Ok(())
}

/// Reports every symbol occurring at least `at_least` times in `S[i..j]`
/// with its count, ascending by symbol, by descending the sequence levels
/// and pruning subtrees with too few positions. Returns the number of
/// bitvector lookups.
///
/// ```
/// use rangefreq::{listing, Sequence};
/// let s = Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap();
/// let mut out = Vec::new();
/// listing::distinct_counts(&s, 2, 6, 1, |a, c| out.push((a, c))).unwrap();
/// assert_eq!(out, vec![(1, 2), (2, 2), (3, 1)]);
/// ```
pub fn distinct_counts(
    seq: &Sequence,
    i: usize,
    j: usize,
    at_least: usize,
    emit: impl FnMut(usize, usize),
) -> Result<u64> {
    check_range(i, j, seq.len())?;
    Ok(seq.range_counts_unchecked(i, j, at_least.max(1), emit))
}

/// Lists up to `limit` distinct symbols of `S[i..j]` with their leftmost
/// positions, using range minima over `C`.
///
/// Each popped range costs one range-minimum query. If the symbol at the
/// minimum is already marked, every symbol of the range has already been
/// reported and the range is dropped; otherwise the symbol is reported, then
/// the left part and the right part are explored, left first. At most
/// `2 · limit + 1` range-minimum queries are issued.
///
/// ```
/// use rangefreq::{listing, ImplicitRmq, MarkSet, QueryStats, Sequence};
/// let s = Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap();
/// let rmq = ImplicitRmq::new(&s);
/// let mut marks = MarkSet::new(3);
/// let mut stats = QueryStats::new();
/// let mut items = listing::list_distinct(&s, &rmq, 2, 6, 10, &mut marks, &mut stats).unwrap();
/// items.sort();
/// let pairs: Vec<_> = items.iter().map(|x| (x.symbol, x.leftmost_pos)).collect();
/// assert_eq!(pairs, vec![(1, 3), (2, 2), (3, 4)]);
/// ```
pub fn list_distinct(
    seq: &Sequence,
    rmq: &ImplicitRmq,
    i: usize,
    j: usize,
    limit: usize,
    marks: &mut MarkSet,
    stats: &mut QueryStats,
) -> Result<Vec<DistinctItem>> {
    check_args(seq, rmq.len(), i, j, limit)?;
    marks.ensure(seq.sigma());
    let mut out = Vec::new();
    let mut stack = vec![(i, j)];
    while let Some((l, r)) = stack.pop() {
        stats.rmq_queries += 1;
        let (m, _, a) = rmq.argmin_with_symbol(seq, l, r);
        if !marks.mark(a) {
            continue;
        }
        out.push(DistinctItem {
            symbol: a,
            leftmost_pos: m,
        });
        if out.len() == limit {
            break;
        }
        if m < r {
            stack.push((m + 1, r));
        }
        if l < m {
            stack.push((l, m - 1));
        }
    }
    marks.clear();
    stats.items_listed += out.len() as u64;
    Ok(out)
}

/// Same contract as [`list_distinct`], over block minima of `C`.
///
/// Cells in the partial blocks at either end are scanned one by one, first
/// the left tail and last the right tail. Full blocks are explored in order:
/// a block range is dropped when the symbol at its minimum is already marked;
/// otherwise its left part is explored, then the minimum block is scanned
/// cell by cell, then its right part. Every scanned block reports at least
/// one new symbol, so at most `f · items + 2f` cells are scanned.
pub fn list_distinct_sparse(
    seq: &Sequence,
    srmq: &SparseRmqIndex,
    i: usize,
    j: usize,
    limit: usize,
    marks: &mut MarkSet,
    stats: &mut QueryStats,
) -> Result<Vec<DistinctItem>> {
    check_args(seq, srmq.len(), i, j, limit)?;
    marks.ensure(seq.sigma());
    let mut out = Vec::new();
    let f = srmq.block_len();
    // 1-based block numbers of the first and last full blocks.
    let first_full = (i - 1).div_ceil(f) + 1;
    let last_full = j / f;
    let scan = |lo: usize, hi: usize, out: &mut Vec<DistinctItem>, marks: &mut MarkSet, stats: &mut QueryStats| {
        for p in lo..=hi {
            stats.cells_scanned += 1;
            let a = seq.access_unchecked(p);
            if marks.mark(a) {
                out.push(DistinctItem {
                    symbol: a,
                    leftmost_pos: p,
                });
                if out.len() == limit {
                    return true;
                }
            }
        }
        false
    };

    'listing: {
        if first_full > last_full {
            scan(i, j, &mut out, marks, stats);
            break 'listing;
        }
        let full_start = (first_full - 1) * f + 1;
        if i < full_start && scan(i, full_start - 1, &mut out, marks, stats) {
            break 'listing;
        }
        enum Step {
            Range(usize, usize),
            Block(usize),
        }
        let mut stack = vec![Step::Range(first_full, last_full)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Range(l, r) => {
                    stats.rmq_queries += 1;
                    let b = srmq.query_blocks_unchecked(l, r);
                    if marks.is_marked(seq.access_unchecked(srmq.block_min_pos(b))) {
                        continue;
                    }
                    if b < r {
                        stack.push(Step::Range(b + 1, r));
                    }
                    stack.push(Step::Block(b));
                    if l < b {
                        stack.push(Step::Range(l, b - 1));
                    }
                }
                Step::Block(b) => {
                    let (lo, hi) = srmq.block_span(b);
                    if scan(lo, hi, &mut out, marks, stats) {
                        break 'listing;
                    }
                }
            }
        }
        let full_end = last_full * f;
        if j > full_end {
            scan(full_end + 1, j, &mut out, marks, stats);
        }
    }
    marks.clear();
    stats.items_listed += out.len() as u64;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn example() -> Sequence {
        Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap()
    }

    fn sorted(mut v: Vec<DistinctItem>) -> Vec<(usize, usize)> {
        v.sort();
        v.into_iter().map(|x| (x.symbol, x.leftmost_pos)).collect()
    }

    #[test]
    fn full_examples() {
        let s = example();
        let rmq = ImplicitRmq::new(&s);
        let mut m = MarkSet::new(3);
        let mut st = QueryStats::new();
        let got = list_distinct(&s, &rmq, 2, 6, 10, &mut m, &mut st).unwrap();
        assert_eq!(sorted(got), vec![(1, 3), (2, 2), (3, 4)]);
        for k in 1..=7 {
            let got = list_distinct(&s, &rmq, k, k, 10, &mut m, &mut st).unwrap();
            assert_eq!(sorted(got), vec![(s.access(k).unwrap(), k)]);
        }
        let two = list_distinct(&s, &rmq, 1, 7, 2, &mut m, &mut st).unwrap();
        assert_eq!(two.len(), 2);
        let truth = sorted(oracle::listing(&s.to_vec(), 1, 7).unwrap());
        for x in two {
            assert!(truth.contains(&(x.symbol, x.leftmost_pos)));
        }
        assert!(m.is_clean());
        assert!(list_distinct(&s, &rmq, 0, 3, 1, &mut m, &mut st).is_err());
        assert!(list_distinct(&s, &rmq, 1, 3, 0, &mut m, &mut st).is_err());
    }

    #[test]
    fn sparse_examples() {
        let s = example();
        let rmq = ImplicitRmq::new(&s);
        let mut m = MarkSet::new(3);
        let mut st = QueryStats::new();
        for f in 1..=7 {
            let sp = SparseRmqIndex::new(&s, f).unwrap();
            for i in 1..=7 {
                for j in i..=7 {
                    let a = list_distinct(&s, &rmq, i, j, 10, &mut m, &mut st).unwrap();
                    let b = list_distinct_sparse(&s, &sp, i, j, 10, &mut m, &mut st).unwrap();
                    assert_eq!(sorted(a), sorted(b), "f={f} [{i},{j}]");
                }
            }
        }
    }

    #[test]
    fn random_ranges_match_oracle_and_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for round in 0..40 {
            let n = 2000;
            let sigma = if round % 2 == 0 { 50 } else { 7 };
            let sym: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=sigma)).collect();
            let s = Sequence::new(&sym, sigma).unwrap();
            let rmq = ImplicitRmq::new(&s);
            let f = [1, 3, 8, 33][round % 4];
            let sp = SparseRmqIndex::new(&s, f).unwrap();
            let mut m = MarkSet::new(sigma);
            for _ in 0..100 {
                let i = rng.gen_range(1..=n);
                let j = rng.gen_range(i..=n);
                let truth = sorted(oracle::listing(&sym, i, j).unwrap());
                let mut st = QueryStats::new();
                let full = list_distinct(&s, &rmq, i, j, sigma, &mut m, &mut st).unwrap();
                assert_eq!(sorted(full), truth);
                let mut st = QueryStats::new();
                let sparse = list_distinct_sparse(&s, &sp, i, j, sigma, &mut m, &mut st).unwrap();
                assert_eq!(sorted(sparse.clone()), truth);
                assert!(st.cells_scanned <= (f * sparse.len() + 2 * f) as u64);
                let t = rng.gen_range(1..=truth.len());
                let mut st = QueryStats::new();
                let part = list_distinct(&s, &rmq, i, j, t, &mut m, &mut st).unwrap();
                assert_eq!(part.len(), t);
                assert!(st.rmq_queries <= 2 * t as u64 + 1);
                for x in &part {
                    assert!(truth.contains(&(x.symbol, x.leftmost_pos)));
                }
                let mut st = QueryStats::new();
                let part = list_distinct_sparse(&s, &sp, i, j, t, &mut m, &mut st).unwrap();
                assert_eq!(part.len(), t);
                assert!(st.cells_scanned <= (f * t + 2 * f) as u64);
                for x in &part {
                    assert!(truth.contains(&(x.symbol, x.leftmost_pos)));
                }
                assert!(m.is_clean());
            }
        }
    }

    #[test]
    fn markset_resets() {
        let mut m = MarkSet::new(200);
        assert!(m.mark(7));
        assert!(!m.mark(7));
        assert!(m.mark(199));
        assert_eq!(m.len(), 2);
        m.clear();
        assert!(m.is_clean());
        assert!(!m.is_marked(7));
    }
}
