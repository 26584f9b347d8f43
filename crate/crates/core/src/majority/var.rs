use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{check_at, forward_window_counts, level_of, list_below, MajorityAnswer, Occurrences};
use crate::error::{check_range, Error, Result};
use crate::listing::{self, list_distinct, MarkSet};
use crate::rmq::{BlockRmq, ImplicitRmq};
use crate::seq::{bit_width, prev_links, Sequence};
use crate::stats::QueryStats;
use crate::threshold::Threshold;

/// Symbol used in `T_b` for "no finite level".
pub(crate) const INFINITE: usize = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct VarLevel {
    /// `T_b` with `t` written as `t + 2` and "no level" as 1.
    tb: Sequence,
    /// `rmqs[t]`: range minima of `C` over the positions with `T_b = t`.
    rmqs: Vec<BlockRmq>,
}

/// The sequence-independent part of a [`VarMajIndex`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarBody {
    n: usize,
    /// Largest finite level value, `⌈log2 σ⌉`.
    max_t: usize,
    levels: Vec<VarLevel>,
    /// Range minima over all of `C`, for thresholds with `1/τ >= σ`.
    full: ImplicitRmq,
}

/// Range majority for any threshold given at query time.
///
/// For level `b` and position `k`, let `c` be the occurrences of `S[k]` in
/// `S[k..k + 2^(b+1) − 1]`. Then `T_b[k] = b − ⌊log2 c⌋` (so `2^(b−t) <= c <
/// 2^(b−t+1)`, except that `t = 0` also takes `c = 2^(b+1)`), or "none" when
/// that exceeds `⌈log2 σ⌉`. A query with threshold τ lists leftmost
/// occurrences among positions with `T_b <= ⌈log2(1/τ)⌉`.
///
/// When `1/τ >= σ` the flags cannot prune anything, so the query reports
/// the symbols with enough occurrences in one pruned descent over the
/// sequence levels instead.
///
/// ```
/// use std::sync::Arc;
/// use rangefreq::{Sequence, Threshold, VarMajIndex};
/// let s = Arc::new(Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap());
/// let ix = VarMajIndex::new(s);
/// let tau = Threshold::from_f64(0.4).unwrap();
/// assert_eq!(ix.query(2, 6, tau).unwrap().symbols, vec![1, 2]);
/// ```
#[derive(Debug, Clone)]
pub struct VarMajIndex {
    seq: Arc<Sequence>,
    body: VarBody,
}

/// `T_b[k]` from a window count, `None` for "no finite level".
pub(crate) fn level_value(b: usize, c: usize, max_t: usize) -> Option<usize> {
    let t = b.saturating_sub(c.ilog2() as usize);
    (t <= max_t).then_some(t)
}

impl VarMajIndex {
    pub fn new(seq: Arc<Sequence>) -> Self {
        let n = seq.len();
        let sigma = seq.sigma();
        let max_t = bit_width(sigma - 1) as usize;
        let symbols = seq.to_vec();
        let occ = Occurrences::new(&symbols, sigma);
        let c = prev_links(&symbols, sigma);
        let mut levels = Vec::new();
        if n > 0 {
            for b in 0..=level_of(n) {
                let counts = forward_window_counts(&occ, n, 1 << (b + 1));
                let codes: Vec<usize> = counts
                    .iter()
                    .map(|&x| level_value(b, x as usize, max_t).map_or(INFINITE, |t| t + 2))
                    .collect();
                let mut by_t: Vec<Vec<u64>> = vec![Vec::new(); max_t + 1];
                for (p, &code) in codes.iter().enumerate() {
                    if code != INFINITE {
                        by_t[code - 2].push(c[p] as u64);
                    }
                }
                let tb = Sequence::new(&codes, max_t + 2).expect("codes are in range");
                let rmqs = by_t.iter().map(|v| BlockRmq::new(v)).collect();
                levels.push(VarLevel { tb, rmqs });
            }
        }
        VarMajIndex {
            body: VarBody {
                n,
                max_t,
                levels,
                full: ImplicitRmq::new(&seq),
            },
            seq,
        }
    }

    pub fn from_parts(seq: Arc<Sequence>, body: VarBody) -> Result<Self> {
        let expected = if body.n == 0 { 0 } else { level_of(body.n) + 1 };
        let bad = body.n != seq.len()
            || body.full.len() != body.n
            || body.max_t != bit_width(seq.sigma() - 1) as usize
            || body.levels.len() != expected
            || body.levels.iter().any(|l| {
                l.tb.len() != body.n
                    || l.rmqs.len() != body.max_t + 1
                    || l.rmqs.iter().enumerate().any(|(t, r)| r.len() != l.tb.count(t + 2))
            });
        if bad {
            return Err(Error::Corrupt(
                "variable-threshold index does not match the sequence".into(),
            ));
        }
        Ok(VarMajIndex { seq, body })
    }

    pub fn body(&self) -> &VarBody {
        &self.body
    }

    pub fn sequence(&self) -> &Arc<Sequence> {
        &self.seq
    }

    pub fn num_levels(&self) -> usize {
        self.body.levels.len()
    }

    pub fn max_t(&self) -> usize {
        self.body.max_t
    }

    /// `T_b[k]`, `None` for "no finite level".
    pub fn level_value(&self, b: usize, k: usize) -> Result<Option<usize>> {
        let level = self.body.levels.get(b).ok_or(Error::OutOfBounds {
            pos: b,
            len: self.body.levels.len(),
        })?;
        let code = level.tb.access(k)?;
        Ok((code != INFINITE).then(|| code - 2))
    }

    /// Number of stored `T_b` symbols over all levels.
    pub fn tb_symbols(&self) -> usize {
        self.body.levels.iter().map(|l| l.tb.len()).sum()
    }

    pub fn size_bits(&self) -> usize {
        self.body.full.size_bits()
            + self
                .body
                .levels
                .iter()
                .map(|l| l.tb.size_bits() + l.rmqs.iter().map(BlockRmq::size_bits).sum::<usize>())
                .sum::<usize>()
    }

    /// The τ-majorities of `S[i..j]`.
    pub fn query(&self, i: usize, j: usize, tau: Threshold) -> Result<MajorityAnswer> {
        let mut marks = MarkSet::default();
        self.query_with(i, j, tau, &mut marks)
    }

    /// [`Self::query`] with caller-owned scratch.
    pub fn query_with(&self, i: usize, j: usize, tau: Threshold, marks: &mut MarkSet) -> Result<MajorityAnswer> {
        let seq = &*self.seq;
        check_range(i, j, seq.len())?;
        let mut stats = QueryStats::new();
        let need = tau.required(j - i + 1);
        let mut found = Vec::new();
        if tau.inverse_at_least(seq.sigma()) {
            stats.dict_probes += listing::distinct_counts(seq, i, j, need, |a, c| found.push((a, c)))?;
            stats.items_listed += found.len() as u64;
            stats.candidates += found.len() as u64;
            return Ok(MajorityAnswer::from_pairs(found, stats));
        }
        for k in self.candidates(i, j, tau, marks, &mut stats)? {
            let c = check_at(seq, k, j, need, &mut stats);
            if c.is_majority {
                found.push((c.symbol, c.count_from_k));
            }
        }
        Ok(MajorityAnswer::from_pairs(found, stats))
    }

    /// Leftmost occurrences in `[i..j]` of every symbol that may be a
    /// τ-majority there; one position per symbol.
    pub(crate) fn candidates(
        &self,
        i: usize,
        j: usize,
        tau: Threshold,
        marks: &mut MarkSet,
        stats: &mut QueryStats,
    ) -> Result<Vec<usize>> {
        let seq = &*self.seq;
        if tau.inverse_at_least(seq.sigma()) {
            let items = list_distinct(seq, &self.body.full, i, j, seq.sigma(), marks, stats)?;
            return Ok(items.into_iter().map(|x| x.leftmost_pos).collect());
        }
        let level = &self.body.levels[level_of(j - i + 1)];
        let top = (tau.log2_inverse_ceil() as usize).min(self.body.max_t);
        let mut out = Vec::new();
        marks.ensure(seq.sigma());
        for t in 0..=top {
            let code = t + 2;
            let lo = level.tb.rank_unchecked(code, i - 1) + 1;
            let hi = level.tb.rank_unchecked(code, j);
            let tb = &level.tb;
            list_below(
                &level.rmqs[t],
                lo,
                hi,
                i,
                |idx| seq.prev_occurrence_unchecked(tb.select_unchecked(code, idx)) as u64,
                stats,
                |idx| {
                    let k = tb.select_unchecked(code, idx);
                    if marks.mark(seq.access_unchecked(k)) {
                        out.push(k);
                    }
                },
            );
        }
        marks.clear();
        Ok(out)
    }
}
