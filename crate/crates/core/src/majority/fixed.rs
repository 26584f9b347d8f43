use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{check_at, forward_window_counts, level_of, list_below, MajorityAnswer, Occurrences};
use crate::bitvec::BitVec;
use crate::error::{check_range, Error, Result};
use crate::rmq::BlockRmq;
use crate::seq::{prev_links, Sequence};
use crate::stats::QueryStats;
use crate::threshold::Threshold;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
struct FixedLevel {
    flags: BitVec,
    /// Range minima of `C` restricted to the flagged positions.
    rmq: BlockRmq,
}

/// The sequence-independent part of a [`FixedMajIndex`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedBody {
    tau: Threshold,
    n: usize,
    levels: Vec<FixedLevel>,
}

/// Range majority for one threshold fixed at build time.
///
/// Level `b` flags position `k` when `S[k]` occurs at least `τ·2^b` times in
/// `S[k..k + 2^(b+1) − 1]` (clipped at `n`). The leftmost occurrence of any
/// τ-majority of a range at level `b` is flagged there, so the candidates
/// are the flagged positions of the range that are leftmost occurrences.
///
/// ```
/// use std::sync::Arc;
/// use rangefreq::{FixedMajIndex, Sequence, Threshold};
/// let s = Arc::new(Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap());
/// let ix = FixedMajIndex::new(s, Threshold::new(1, 2).unwrap()).unwrap();
/// assert_eq!(ix.query(1, 7).unwrap().symbols, vec![1]);
/// assert!(ix.query(2, 4).unwrap().symbols.is_empty());
/// ```
#[derive(Debug, Clone)]
pub struct FixedMajIndex {
    seq: Arc<Sequence>,
    body: FixedBody,
}

impl FixedMajIndex {
    pub fn new(seq: Arc<Sequence>, tau: Threshold) -> Result<Self> {
        let n = seq.len();
        let symbols = seq.to_vec();
        let occ = Occurrences::new(&symbols, seq.sigma());
        let c = prev_links(&symbols, seq.sigma());
        let mut levels = Vec::new();
        if n > 0 {
            for b in 0..=level_of(n) {
                let need = tau.required(1 << b) as u32;
                let counts = forward_window_counts(&occ, n, 1 << (b + 1));
                let flags: BitVec = counts.iter().map(|&x| x >= need).collect();
                let flagged: Vec<usize> = flags.ones().collect();
                let rmq = BlockRmq::from_fn(flagged.len(), |idx| c[flagged[idx - 1] - 1] as u64);
                levels.push(FixedLevel { flags, rmq });
            }
        }
        Ok(FixedMajIndex {
            seq,
            body: FixedBody { tau, n, levels },
        })
    }

    /// Reattaches a stored body to its sequence.
    pub fn from_parts(seq: Arc<Sequence>, body: FixedBody) -> Result<Self> {
        let expected = if body.n == 0 { 0 } else { level_of(body.n) + 1 };
        if body.n != seq.len()
            || body.levels.len() != expected
            || body
                .levels
                .iter()
                .any(|l| l.flags.len() != body.n || l.rmq.len() != l.flags.count_ones())
        {
            return Err(Error::Corrupt(
                "fixed-threshold index does not match the sequence".into(),
            ));
        }
        Ok(FixedMajIndex { seq, body })
    }

    pub fn body(&self) -> &FixedBody {
        &self.body
    }

    pub fn sequence(&self) -> &Arc<Sequence> {
        &self.seq
    }

    pub fn tau(&self) -> Threshold {
        self.body.tau
    }

    /// Flags of level `b`.
    pub fn flags(&self, b: usize) -> Option<&BitVec> {
        self.body.levels.get(b).map(|l| &l.flags)
    }

    pub fn num_levels(&self) -> usize {
        self.body.levels.len()
    }

    /// Total number of flag bits over all levels.
    pub fn flag_bits(&self) -> usize {
        self.body.levels.iter().map(|l| l.flags.len()).sum()
    }

    pub fn size_bits(&self) -> usize {
        self.body
            .levels
            .iter()
            .map(|l| l.flags.size_bits() + l.rmq.size_bits())
            .sum()
    }

    /// The τ-majorities of `S[i..j]` for the build threshold.
    pub fn query(&self, i: usize, j: usize) -> Result<MajorityAnswer> {
        let seq = &*self.seq;
        check_range(i, j, seq.len())?;
        let mut stats = QueryStats::new();
        let len = j - i + 1;
        let need = self.body.tau.required(len);
        let level = &self.body.levels[level_of(len)];
        let flags = &level.flags;
        let lo = flags.rank1_unchecked(i - 1) + 1;
        let hi = flags.rank1_unchecked(j);
        let mut found = Vec::new();
        let mut candidates = Vec::new();
        list_below(
            &level.rmq,
            lo,
            hi,
            i,
            |idx| seq.prev_occurrence_unchecked(flags.select1_unchecked(idx)) as u64,
            &mut stats,
            |idx| candidates.push(idx),
        );
        for idx in candidates {
            let k = flags.select1_unchecked(idx);
            let c = check_at(seq, k, j, need, &mut stats);
            if c.is_majority {
                found.push((c.symbol, c.count_from_k));
            }
        }
        Ok(MajorityAnswer::from_pairs(found, stats))
    }
}
