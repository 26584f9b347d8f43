//! Predecessor search, emptiness and counting over a static point set, with
//! cost that adapts to the length and density of the queried range.

mod count;
mod pred;

pub use count::{CountIndex, CountVerdict};
pub use pred::{PointSet, PredIndex};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::seq::Sequence;
use crate::stats::QueryStats;

/// Which symbols get their own [`CountIndex`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountPolicy {
    /// Symbols with `n_c >= n / 2^16`.
    Frequent,
    /// Exactly these symbols.
    Symbols(Vec<usize>),
    /// Every symbol that occurs.
    All,
}

/// Per-symbol counting indexes over the position sets `{p : S[p] = c}`.
/// Symbols without one are counted by rank difference on the sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolCounts {
    #[serde(with = "crate::sorted_map")]
    indexes: FxHashMap<usize, CountIndex>,
}

impl SymbolCounts {
    pub fn new(seq: &Sequence, policy: &CountPolicy) -> Self {
        let n = seq.len();
        let chosen: Vec<usize> = match policy {
            CountPolicy::Frequent => (1..=seq.sigma())
                .filter(|&c| seq.count(c) > 0 && seq.count(c) >= n.div_ceil(1 << 16))
                .collect(),
            CountPolicy::Symbols(list) => list.iter().copied().filter(|&c| c >= 1 && c <= seq.sigma()).collect(),
            CountPolicy::All => (1..=seq.sigma()).filter(|&c| seq.count(c) > 0).collect(),
        };
        let mut positions: FxHashMap<usize, Vec<usize>> =
            chosen.iter().map(|&c| (c, Vec::with_capacity(seq.count(c)))).collect();
        if !positions.is_empty() {
            for (p, a) in seq.to_vec().into_iter().enumerate() {
                if let Some(v) = positions.get_mut(&a) {
                    v.push(p + 1);
                }
            }
        }
        let universe = n.max(1);
        let indexes = positions
            .into_iter()
            .map(|(c, pts)| (c, CountIndex::new(&pts, universe).expect("positions are sorted")))
            .collect();
        SymbolCounts { indexes }
    }

    /// Checks that every stored index has the universe and size implied by
    /// `seq`.
    pub fn validate(&self, seq: &Sequence) -> Result<()> {
        for (&c, ix) in &self.indexes {
            if c == 0 || c > seq.sigma() || ix.universe() != seq.len().max(1) || ix.len() != seq.count(c) {
                return Err(Error::Corrupt(format!("counting index for symbol {c} does not match")));
            }
        }
        Ok(())
    }

    pub fn get(&self, c: usize) -> Option<&CountIndex> {
        self.indexes.get(&c)
    }

    pub fn len(&self) -> usize {
        self.indexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indexes.is_empty()
    }

    pub fn size_bits(&self) -> usize {
        self.indexes.values().map(CountIndex::size_bits).sum()
    }
}

/// Occurrences of `c` in `S[i..j]`: through `per_symbol` when given, by rank
/// difference otherwise.
///
/// ```
/// use rangefreq::{predcount, QueryStats, Sequence};
/// let s = Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap();
/// let mut stats = QueryStats::new();
/// assert_eq!(predcount::count_symbol(&s, None, 1, 2, 6, &mut stats).unwrap(), 2);
/// ```
pub fn count_symbol(
    seq: &Sequence,
    per_symbol: Option<&CountIndex>,
    c: usize,
    i: usize,
    j: usize,
    stats: &mut QueryStats,
) -> Result<usize> {
    check_range(i, j, seq.len())?;
    seq.rank(c, 0)?;
    Ok(match per_symbol {
        Some(ix) => ix.count_range(i, j, stats)?,
        None => {
            stats.dict_probes += 2;
            seq.rank_unchecked(c, j) - seq.rank_unchecked(c, i - 1)
        }
    })
}
