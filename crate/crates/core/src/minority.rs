//! Range minority: some symbol present in `S[i..j]` fewer than
//! `⌈τ·(j − i + 1)⌉` times.
//!
//! At most `⌊1/τ⌋` symbols can be τ-majorities, so among any `⌊1/τ⌋ + 1`
//! distinct symbols of the range at least one is a minority. The query lists
//! that many distinct symbols with their leftmost positions and checks each
//! one with a partial rank and a select.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::listing::{list_distinct, list_distinct_sparse, MarkSet};
use crate::majority::check_at;
use crate::rmq::{ImplicitRmq, SparseRmqIndex};
use crate::seq::Sequence;
use crate::stats::QueryStats;
use crate::threshold::Threshold;

/// Which listing the index uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinorityMode {
    /// Range minima over every cell of `C`.
    Full,
    /// Range minima over blocks of `f` cells of `C`, scanning blocks.
    Sparse,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
enum Listing {
    Full(ImplicitRmq),
    Sparse(SparseRmqIndex),
}

/// The sequence-independent part of a [`MinorityIndex`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorityBody {
    n: usize,
    listing: Listing,
}

/// A minority found by [`MinorityIndex::query`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Minority {
    pub symbol: usize,
    /// Leftmost position of `symbol` in the range.
    pub position: usize,
    pub count: usize,
}

/// Outcome of a minority query.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorityAnswer {
    pub minority: Option<Minority>,
    pub stats: QueryStats,
}

/// Range minority index.
///
/// ```
/// use std::sync::Arc;
/// use rangefreq::{MinorityIndex, MinorityMode, Sequence, Threshold};
/// let s = Arc::new(Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap());
/// let ix = MinorityIndex::new(s, MinorityMode::Sparse, Some(3)).unwrap();
/// let m = ix.query(1, 7, Threshold::new(1, 2).unwrap()).unwrap().minority.unwrap();
/// assert!([2, 3].contains(&m.symbol));
/// assert!(ix.query(5, 5, Threshold::new(1, 1).unwrap()).unwrap().minority.is_none());
/// ```
#[derive(Debug, Clone)]
pub struct MinorityIndex {
    seq: Arc<Sequence>,
    body: MinorityBody,
}

/// Default block length for sparse listing: `max(2, ⌈log2 n⌉)`.
pub fn default_block_len(n: usize) -> usize {
    let log = if n <= 1 { 0 } else { (n - 1).ilog2() as usize + 1 };
    log.max(2)
}

impl MinorityIndex {
    /// `f` is the block length in sparse mode (ignored in full mode); `None`
    /// picks [`default_block_len`].
    pub fn new(seq: Arc<Sequence>, mode: MinorityMode, f: Option<usize>) -> Result<Self> {
        let listing = match mode {
            MinorityMode::Full => Listing::Full(ImplicitRmq::new(&seq)),
            MinorityMode::Sparse => {
                let f = f.unwrap_or_else(|| default_block_len(seq.len()));
                Listing::Sparse(SparseRmqIndex::new(&seq, f)?)
            }
        };
        let n = seq.len();
        Ok(MinorityIndex {
            seq,
            body: MinorityBody { n, listing },
        })
    }

    pub fn from_parts(seq: Arc<Sequence>, body: MinorityBody) -> Result<Self> {
        let len = match &body.listing {
            Listing::Full(r) => r.len(),
            Listing::Sparse(r) => r.len(),
        };
        if body.n != seq.len() || len != body.n {
            return Err(Error::Corrupt("minority index does not match the sequence".into()));
        }
        Ok(MinorityIndex { seq, body })
    }

    pub fn body(&self) -> &MinorityBody {
        &self.body
    }

    pub fn sequence(&self) -> &Arc<Sequence> {
        &self.seq
    }

    pub fn mode(&self) -> MinorityMode {
        match self.body.listing {
            Listing::Full(_) => MinorityMode::Full,
            Listing::Sparse(_) => MinorityMode::Sparse,
        }
    }

    /// Block length in sparse mode.
    pub fn block_len(&self) -> Option<usize> {
        match &self.body.listing {
            Listing::Full(_) => None,
            Listing::Sparse(r) => Some(r.block_len()),
        }
    }

    /// The full-listing range minima, in full mode.
    pub fn full_rmq(&self) -> Option<&ImplicitRmq> {
        match &self.body.listing {
            Listing::Full(r) => Some(r),
            Listing::Sparse(_) => None,
        }
    }

    /// The block range minima, in sparse mode.
    pub fn sparse_rmq(&self) -> Option<&SparseRmqIndex> {
        match &self.body.listing {
            Listing::Full(_) => None,
            Listing::Sparse(r) => Some(r),
        }
    }

    pub fn size_bits(&self) -> usize {
        match &self.body.listing {
            Listing::Full(r) => r.size_bits(),
            Listing::Sparse(r) => r.size_bits(),
        }
    }

    /// Number of distinct symbols listed for threshold `tau`:
    /// `min(⌊1/τ⌋ + 1, σ)`.
    pub fn budget(&self, tau: Threshold) -> usize {
        (tau.inverse_floor() + 1).min(self.seq.sigma())
    }

    /// Some τ-minority of `S[i..j]`, the first one found in listing order,
    /// or none when every symbol of the range is a τ-majority.
    pub fn query(&self, i: usize, j: usize, tau: Threshold) -> Result<MinorityAnswer> {
        let mut marks = MarkSet::default();
        self.query_with(i, j, tau, &mut marks)
    }

    pub fn query_with(&self, i: usize, j: usize, tau: Threshold, marks: &mut MarkSet) -> Result<MinorityAnswer> {
        let seq = &*self.seq;
        check_range(i, j, seq.len())?;
        let mut stats = QueryStats::new();
        let limit = self.budget(tau);
        let items = match &self.body.listing {
            Listing::Full(r) => list_distinct(seq, r, i, j, limit, marks, &mut stats)?,
            Listing::Sparse(r) => list_distinct_sparse(seq, r, i, j, limit, marks, &mut stats)?,
        };
        let need = tau.required(j - i + 1);
        for item in items {
            let c = check_at(seq, item.leftmost_pos, j, need, &mut stats);
            if !c.is_majority {
                let count = seq.rank_unchecked(item.symbol, j) - seq.rank_unchecked(item.symbol, i - 1);
                return Ok(MinorityAnswer {
                    minority: Some(Minority {
                        symbol: item.symbol,
                        position: item.leftmost_pos,
                        count,
                    }),
                    stats,
                });
            }
        }
        Ok(MinorityAnswer { minority: None, stats })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn example() -> Arc<Sequence> {
        Arc::new(Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap())
    }

    #[test]
    fn examples() {
        let t = |p, q| Threshold::new(p, q).unwrap();
        for ix in [
            MinorityIndex::new(example(), MinorityMode::Full, None).unwrap(),
            MinorityIndex::new(example(), MinorityMode::Sparse, Some(3)).unwrap(),
        ] {
            let m = ix.query(1, 7, t(1, 2)).unwrap().minority.unwrap();
            assert!([2, 3].contains(&m.symbol));
            assert_eq!(m.position, if m.symbol == 2 { 2 } else { 4 });
            assert!(ix.query(5, 5, t(1, 1)).unwrap().minority.is_none());
            assert!(ix
                .query(2, 4, Threshold::from_f64(0.1).unwrap())
                .unwrap()
                .minority
                .is_none());
            assert!(ix.query(1, 7, t(1, 7)).unwrap().minority.is_none());
            assert!(ix.query(0, 3, t(1, 2)).is_err());
        }
        assert!(MinorityIndex::new(example(), MinorityMode::Sparse, Some(0)).is_err());
        assert_eq!(default_block_len(1), 2);
        assert_eq!(default_block_len(1000), 10);
        assert_eq!(default_block_len(1024), 10);
    }

    #[test]
    fn random_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(111);
        for round in 0..60 {
            let sigma = [2, 4, 16, 256][round % 4];
            let n = rng.gen_range(1..=1500);
            let sym: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=sigma)).collect();
            let s = Arc::new(Sequence::new(&sym, sigma).unwrap());
            let full = MinorityIndex::new(s.clone(), MinorityMode::Full, None).unwrap();
            let sparse = MinorityIndex::new(s, MinorityMode::Sparse, Some(rng.gen_range(1..=12))).unwrap();
            for _ in 0..100 {
                let i = rng.gen_range(1..=n);
                let j = rng.gen_range(i..=n);
                let tau = [(1, 1), (1, 2), (1, 3), (1, 7), (1, 64), (1, sigma as u64)][rng.gen_range(0..6)];
                let tau = Threshold::new(tau.0, tau.1).unwrap();
                let want = oracle::minorities(&sym, i, j, tau).unwrap();
                for ix in [&full, &sparse] {
                    let a = ix.query(i, j, tau).unwrap();
                    assert!(a.stats.items_listed as usize <= ix.budget(tau));
                    match a.minority {
                        None => assert!(want.is_empty()),
                        Some(m) => {
                            assert!(want.contains(&m.symbol));
                            assert_eq!(m.count, oracle::symbol_count(&sym, m.symbol, i, j).unwrap());
                            assert_eq!(sym[m.position - 1], m.symbol);
                            assert!(sym[i - 1..m.position - 1].iter().all(|&x| x != m.symbol));
                        }
                    }
                }
            }
        }
    }
}
