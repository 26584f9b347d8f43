use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{level_of, list_below, misra_gries, MajorityAnswer, Occurrences};
use crate::bitvec::BitVec;
use crate::error::{check_range, Error, Result};
use crate::rmq::BlockRmq;
use crate::seq::{bit_width, Sequence};
use crate::stats::QueryStats;
use crate::threshold::Threshold;

/// Default slack factor `g`.
pub const DEFAULT_SLACK: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct BlockLevel {
    flags: BitVec,
    /// For each flagged position in order, the previous flagged position
    /// with the same symbol, or 0.
    links: Vec<u32>,
    rmq: BlockRmq,
}

/// The sequence-independent part of a [`BlockMajIndex`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockBody {
    n: usize,
    slack: usize,
    max_t: usize,
    /// `levels[t][b − first_level(t)]`.
    levels: Vec<Vec<BlockLevel>>,
}

/// Range majority with block-thinned flags.
///
/// For threshold level `t` and range level `b`, the sequence is cut into
/// blocks of `2^(b−1)` cells. Position `k` is flagged when `S[k]` occurs at
/// least `2^(b−t)` times in `S[k − 2^(b+1) .. k + 2^(b+1)]` and `k` is the
/// first or last occurrence of `S[k]` in its block. Ranges too short for the
/// smallest level of `t` are answered by Misra–Gries.
///
/// ```
/// use std::sync::Arc;
/// use rangefreq::{BlockMajIndex, Sequence, Threshold};
/// let s = Arc::new(Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap());
/// let ix = BlockMajIndex::new(s, 4).unwrap();
/// let tau = Threshold::new(1, 2).unwrap();
/// assert_eq!(ix.query(1, 7, tau).unwrap().symbols, vec![1]);
/// ```
#[derive(Debug, Clone)]
pub struct BlockMajIndex {
    seq: Arc<Sequence>,
    body: BlockBody,
}

fn first_level(t: usize, slack: usize) -> usize {
    (t + slack.ilog2() as usize).max(1)
}

impl BlockMajIndex {
    pub fn new(seq: Arc<Sequence>, slack: usize) -> Result<Self> {
        if slack == 0 {
            return Err(Error::Validation("slack factor must be at least 1".into()));
        }
        let n = seq.len();
        let max_t = bit_width(seq.sigma() - 1) as usize;
        let symbols = seq.to_vec();
        let occ = Occurrences::new(&symbols, seq.sigma());
        let top = if n == 0 { 0 } else { level_of(n) };
        let mut levels = Vec::with_capacity(max_t + 1);
        let mut link_at = vec![0u32; n];
        for t in 0..=max_t {
            let mut row = Vec::new();
            for b in first_level(t, slack)..=top {
                if n == 0 {
                    break;
                }
                row.push(build_level(&occ, n, t, b, &mut link_at));
            }
            levels.push(row);
        }
        Ok(BlockMajIndex {
            seq,
            body: BlockBody {
                n,
                slack,
                max_t,
                levels,
            },
        })
    }

    pub fn from_parts(seq: Arc<Sequence>, body: BlockBody) -> Result<Self> {
        let top = if body.n == 0 { 0 } else { level_of(body.n) };
        let bad = body.n != seq.len()
            || body.slack == 0
            || body.max_t != bit_width(seq.sigma() - 1) as usize
            || body.levels.len() != body.max_t + 1
            || body.levels.iter().enumerate().any(|(t, row)| {
                let want = if body.n == 0 {
                    0
                } else {
                    (top + 1).saturating_sub(first_level(t, body.slack))
                };
                row.len() != want
                    || row.iter().any(|l| {
                        l.flags.len() != body.n || l.links.len() != l.flags.count_ones() || l.rmq.len() != l.links.len()
                    })
            });
        if bad {
            return Err(Error::Corrupt("block index does not match the sequence".into()));
        }
        Ok(BlockMajIndex { seq, body })
    }

    pub fn body(&self) -> &BlockBody {
        &self.body
    }

    pub fn sequence(&self) -> &Arc<Sequence> {
        &self.seq
    }

    pub fn slack(&self) -> usize {
        self.body.slack
    }

    /// Flags for threshold level `t` and range level `b`, if built.
    pub fn flags(&self, t: usize, b: usize) -> Option<&BitVec> {
        let first = first_level(t, self.body.slack);
        self.body.levels.get(t)?.get(b.checked_sub(first)?).map(|l| &l.flags)
    }

    pub fn flag_bits(&self) -> usize {
        self.body.levels.iter().flatten().map(|l| l.flags.len()).sum()
    }

    pub fn size_bits(&self) -> usize {
        self.body
            .levels
            .iter()
            .flatten()
            .map(|l| l.flags.size_bits() + 32 * l.links.len() + l.rmq.size_bits())
            .sum()
    }

    /// Largest number of flags any symbol has inside one block, over all
    /// built levels (at most 2 by construction).
    pub fn max_flags_per_block(&self) -> usize {
        let mut worst = 0;
        for (t, row) in self.body.levels.iter().enumerate() {
            for (off, level) in row.iter().enumerate() {
                let b = first_level(t, self.body.slack) + off;
                let mut per: std::collections::HashMap<(usize, usize), usize> = Default::default();
                for p in level.flags.ones() {
                    let key = ((p - 1) >> (b - 1), self.seq.access_unchecked(p));
                    let e = per.entry(key).or_insert(0);
                    *e += 1;
                    worst = worst.max(*e);
                }
            }
        }
        worst
    }

    /// The τ-majorities of `S[i..j]`.
    pub fn query(&self, i: usize, j: usize, tau: Threshold) -> Result<MajorityAnswer> {
        let seq = &*self.seq;
        check_range(i, j, seq.len())?;
        let mut stats = QueryStats::new();
        let len = j - i + 1;
        let need = tau.required(len);
        let t = tau.log2_inverse_ceil() as usize;
        let count = |a: usize, stats: &mut QueryStats| {
            stats.candidates += 1;
            seq.rank_unchecked(a, j) - seq.rank_unchecked(a, i - 1)
        };
        let mut found = Vec::new();
        if t > self.body.max_t || tau.inverse_at_least(seq.sigma()) {
            for a in 1..=seq.sigma() {
                if seq.count(a) >= need {
                    let c = count(a, &mut stats);
                    if c >= need {
                        found.push((a, c));
                    }
                }
            }
            return Ok(MajorityAnswer::from_pairs(found, stats));
        }
        let b = level_of(len);
        let first = first_level(t, self.body.slack);
        if b < first {
            let window: Vec<usize> = (i..=j).map(|p| seq.access_unchecked(p)).collect();
            stats.cells_scanned += 2 * len as u64;
            let found = misra_gries(&window, tau);
            stats.candidates += found.len() as u64;
            return Ok(MajorityAnswer::from_pairs(found, stats));
        }
        let level = &self.body.levels[t][b - first];
        let lo = level.flags.rank1_unchecked(i - 1) + 1;
        let hi = level.flags.rank1_unchecked(j);
        let mut cands = Vec::new();
        list_below(
            &level.rmq,
            lo,
            hi,
            i,
            |idx| level.links[idx - 1] as u64,
            &mut stats,
            |idx| cands.push(level.flags.select1_unchecked(idx)),
        );
        for p in cands {
            let a = seq.access_unchecked(p);
            let c = count(a, &mut stats);
            if c >= need {
                found.push((a, c));
            }
        }
        Ok(MajorityAnswer::from_pairs(found, stats))
    }
}

fn build_level(occ: &Occurrences, n: usize, t: usize, b: usize, link_at: &mut [u32]) -> BlockLevel {
    let reach = 1usize << (b + 1);
    let need = 1usize << (b - t);
    let shift = b - 1;
    let mut flag = vec![false; n];
    for a in 1..=occ.symbols() {
        let list = occ.of(a);
        let (mut lo, mut hi) = (0, 0);
        let mut last_flagged = 0u32;
        for (r, &p) in list.iter().enumerate() {
            let p = p as usize;
            while (list[lo] as usize) + reach < p {
                lo += 1;
            }
            while hi < list.len() && list[hi] as usize <= p + reach {
                hi += 1;
            }
            let block = (p - 1) >> shift;
            let first = r == 0 || (list[r - 1] as usize - 1) >> shift != block;
            let last = r + 1 == list.len() || (list[r + 1] as usize - 1) >> shift != block;
            if hi - lo >= need && (first || last) {
                flag[p - 1] = true;
                link_at[p - 1] = last_flagged;
                last_flagged = p as u32;
            }
        }
    }
    let flags: BitVec = flag.into_iter().collect();
    let links: Vec<u32> = flags.ones().map(|p| link_at[p - 1]).collect();
    let rmq = BlockRmq::from_fn(links.len(), |idx| links[idx - 1] as u64);
    BlockLevel { flags, links, rmq }
}
