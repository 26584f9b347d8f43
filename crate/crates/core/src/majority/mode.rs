use serde::{Deserialize, Serialize};

use super::VarMajIndex;
use crate::error::{check_range, Result};
use crate::listing::MarkSet;
use crate::stats::QueryStats;
use crate::threshold::Threshold;

/// A most frequent symbol of a range and its count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeAnswer {
    pub symbol: usize,
    pub count: usize,
    pub stats: QueryStats,
}

impl VarMajIndex {
    /// A mode of `S[i..j]`, found by halving τ from 1 until some τ-majority
    /// exists and keeping the most frequent one. The work grows with
    /// `(j − i + 1) / count`, so frequent modes are cheap.
    ///
    /// ```
    /// use std::sync::Arc;
    /// use rangefreq::{Sequence, VarMajIndex};
    /// let s = Arc::new(Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap());
    /// let m = VarMajIndex::new(s).mode(1, 7).unwrap();
    /// assert_eq!((m.symbol, m.count), (1, 4));
    /// ```
    pub fn mode(&self, i: usize, j: usize) -> Result<ModeAnswer> {
        let mut marks = MarkSet::default();
        self.mode_with(i, j, &mut marks)
    }

    pub fn mode_with(&self, i: usize, j: usize, marks: &mut MarkSet) -> Result<ModeAnswer> {
        check_range(i, j, self.sequence().len())?;
        let mut stats = QueryStats::new();
        let mut t = 0;
        loop {
            let answer = self.query_with(i, j, Threshold::inverse_power_of_two(t), marks)?;
            stats.merge(&answer.stats);
            if let Some((symbol, count)) = answer.pairs().max_by_key(|&(a, c)| (c, std::cmp::Reverse(a))) {
                return Ok(ModeAnswer { symbol, count, stats });
            }
            t += 1;
        }
    }
}
