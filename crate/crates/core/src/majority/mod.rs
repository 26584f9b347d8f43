//! Range majority: every symbol occurring at least `⌈τ·(j − i + 1)⌉` times in
//! `S[i..j]`.
//!
//! All query paths share one pattern. Flags computed at build time pick, for
//! each level `b`, positions whose symbol is frequent in a window of width
//! about `2^b` around them. A query on a range of length in `[2^b, 2^(b+1))`
//! lists the distinct flagged symbols of the range (a short list) and
//! verifies each one.

mod block;
mod fixed;
mod misra_gries;
mod mode;
mod sensitive;
mod var;

pub use block::{BlockBody, BlockMajIndex, DEFAULT_SLACK};
pub use fixed::{FixedBody, FixedMajIndex};
pub use misra_gries::misra_gries;
pub use mode::ModeAnswer;
pub use sensitive::SensitiveMajIndex;
pub use var::{VarBody, VarMajIndex};

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Result};
use crate::rmq::BlockRmq;
use crate::seq::Sequence;
use crate::stats::QueryStats;
use crate::threshold::Threshold;

/// The τ-majorities of a range, ascending by symbol, with their counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MajorityAnswer {
    pub symbols: Vec<usize>,
    pub counts: Vec<usize>,
    pub stats: QueryStats,
}

impl MajorityAnswer {
    fn from_pairs(mut pairs: Vec<(usize, usize)>, stats: QueryStats) -> Self {
        pairs.sort_unstable();
        pairs.dedup_by_key(|p| p.0);
        MajorityAnswer {
            symbols: pairs.iter().map(|p| p.0).collect(),
            counts: pairs.iter().map(|p| p.1).collect(),
            stats,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// `(symbol, count)` pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.symbols.iter().copied().zip(self.counts.iter().copied())
    }
}

/// Outcome of [`check_candidate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateCheck {
    pub symbol: usize,
    pub is_majority: bool,
    /// Occurrences of `symbol` in `S[k..j]`: a lower bound on its count in
    /// `S[i..j]`, exact when `k` is its leftmost occurrence there.
    pub count_from_k: usize,
}

/// Classifies `S[k]` for the range `[i..j]` with one partial rank and one
/// select: it is a τ-majority iff its `⌈τ·(j − i + 1)⌉`-th occurrence from
/// `k` on is at or before `j`.
///
/// ```
/// use rangefreq::{majority, Sequence, Threshold};
/// let s = Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap();
/// let tau = Threshold::from_f64(0.4).unwrap();
/// assert!(majority::check_candidate(&s, 3, 2, 6, tau).unwrap().is_majority);
/// assert!(!majority::check_candidate(&s, 4, 2, 6, tau).unwrap().is_majority);
/// ```
pub fn check_candidate(seq: &Sequence, k: usize, i: usize, j: usize, tau: Threshold) -> Result<CandidateCheck> {
    check_range(i, j, seq.len())?;
    check_range(i, k, j)?;
    let mut stats = QueryStats::new();
    Ok(check_at(seq, k, j, tau.required(j - i + 1), &mut stats))
}

pub(crate) fn check_at(seq: &Sequence, k: usize, j: usize, need: usize, stats: &mut QueryStats) -> CandidateCheck {
    stats.candidates += 1;
    let (a, r) = seq.access_and_partial_rank(k);
    let target = r + need - 1;
    let is_majority = target <= seq.count(a) && seq.select_unchecked(a, target) <= j;
    CandidateCheck {
        symbol: a,
        is_majority,
        count_from_k: if is_majority {
            seq.rank_unchecked(a, j) - r + 1
        } else {
            0
        },
    }
}

/// Level of a range: `⌊log2 len⌋`.
pub(crate) fn level_of(len: usize) -> usize {
    len.ilog2() as usize
}

/// Lists the entries `idx` in `[lo..hi]` whose value is below `i`, by
/// recursive range minima. `val` maps an entry to its previous-occurrence
/// link.
pub(crate) fn list_below(
    rmq: &BlockRmq,
    lo: usize,
    hi: usize,
    i: usize,
    mut val: impl FnMut(usize) -> u64,
    stats: &mut QueryStats,
    mut emit: impl FnMut(usize),
) {
    if lo > hi {
        return;
    }
    let mut stack = vec![(lo, hi)];
    while let Some((l, r)) = stack.pop() {
        stats.rmq_queries += 1;
        let (m, v) = rmq.argmin_with_value(l, r, &mut val);
        if v as usize >= i {
            continue;
        }
        emit(m);
        if m < r {
            stack.push((m + 1, r));
        }
        if l < m {
            stack.push((l, m - 1));
        }
    }
}

/// Occurrence lists in compressed form: the positions of symbol `a` are
/// `pos[start[a − 1]..start[a]]`, ascending.
pub(crate) struct Occurrences {
    pub start: Vec<usize>,
    pub pos: Vec<u32>,
}

impl Occurrences {
    pub fn new(symbols: &[usize], sigma: usize) -> Self {
        let mut start = vec![0usize; sigma + 1];
        for &a in symbols {
            start[a] += 1;
        }
        for a in 1..=sigma {
            start[a] += start[a - 1];
        }
        let mut fill = start.clone();
        let mut pos = vec![0u32; symbols.len()];
        for (p, &a) in symbols.iter().enumerate() {
            pos[fill[a - 1]] = (p + 1) as u32;
            fill[a - 1] += 1;
        }
        Occurrences { start, pos }
    }

    pub fn of(&self, a: usize) -> &[u32] {
        &self.pos[self.start[a - 1]..self.start[a]]
    }

    pub fn symbols(&self) -> usize {
        self.start.len() - 1
    }
}

/// For each position `p`, the occurrences of `S[p]` in `S[p..p + w − 1]`.
pub(crate) fn forward_window_counts(occ: &Occurrences, n: usize, w: usize) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for a in 1..=occ.symbols() {
        let list = occ.of(a);
        let mut hi = 0;
        for (r, &p) in list.iter().enumerate() {
            let last = p as usize + w - 1;
            while hi < list.len() && list[hi] as usize <= last {
                hi += 1;
            }
            out[p as usize - 1] = (hi - r) as u32;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_candidate_examples() {
        let s = Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap();
        let t = Threshold::from_f64(0.4).unwrap();
        let c = check_candidate(&s, 3, 2, 6, t).unwrap();
        assert!(c.is_majority);
        assert_eq!((c.symbol, c.count_from_k), (1, 2));
        assert!(!check_candidate(&s, 4, 2, 6, t).unwrap().is_majority);
        let one = Threshold::new(1, 1).unwrap();
        assert!(check_candidate(&s, 1, 1, 1, one).unwrap().is_majority);
        assert!(check_candidate(&s, 7, 2, 6, t).is_err());
        assert!(check_candidate(&s, 3, 2, 8, t).is_err());
    }

    #[test]
    fn window_counts() {
        let sym = [1, 2, 1, 3, 1, 2, 1];
        let occ = Occurrences::new(&sym, 3);
        assert_eq!(occ.of(1), &[1, 3, 5, 7]);
        assert_eq!(forward_window_counts(&occ, 7, 8), vec![4, 2, 3, 1, 2, 1, 1]);
        assert_eq!(forward_window_counts(&occ, 7, 2), vec![1, 1, 1, 1, 1, 1, 1]);
    }
}
