use super::{MajorityAnswer, VarMajIndex};
use crate::error::{check_range, Result};
use crate::listing::MarkSet;
use crate::predcount::{CountPolicy, CountVerdict, SymbolCounts};
use crate::stats::QueryStats;
use crate::threshold::Threshold;

/// Range majority whose verification stops as soon as a candidate is shown
/// unable to reach the threshold.
///
/// Candidates come from a [`VarMajIndex`]. Each is counted through its
/// per-symbol [`crate::CountIndex`] when one exists, and the count is
/// abandoned when the symbol's total occurrences, the points of the enclosing
/// counting interval, or the subintervals overlapping the range already fall
/// short. Symbols without an index are counted by rank difference.
///
/// ```
/// use std::sync::Arc;
/// use rangefreq::{CountPolicy, SensitiveMajIndex, Sequence, Threshold, VarMajIndex};
/// let s = Arc::new(Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap());
/// let ix = SensitiveMajIndex::new(VarMajIndex::new(s), &CountPolicy::All);
/// let a = ix.query(1, 7, Threshold::new(1, 1).unwrap()).unwrap();
/// assert!(a.symbols.is_empty());
/// ```
#[derive(Debug, Clone)]
pub struct SensitiveMajIndex {
    var: VarMajIndex,
    counts: SymbolCounts,
}

impl SensitiveMajIndex {
    pub fn new(var: VarMajIndex, policy: &CountPolicy) -> Self {
        let counts = SymbolCounts::new(var.sequence(), policy);
        SensitiveMajIndex { var, counts }
    }

    pub fn from_parts(var: VarMajIndex, counts: SymbolCounts) -> Result<Self> {
        counts.validate(var.sequence())?;
        Ok(SensitiveMajIndex { var, counts })
    }

    pub fn var(&self) -> &VarMajIndex {
        &self.var
    }

    pub fn counts(&self) -> &SymbolCounts {
        &self.counts
    }

    pub fn size_bits(&self) -> usize {
        self.counts.size_bits()
    }

    /// The τ-majorities of `S[i..j]`.
    pub fn query(&self, i: usize, j: usize, tau: Threshold) -> Result<MajorityAnswer> {
        let mut marks = MarkSet::default();
        self.query_with(i, j, tau, &mut marks)
    }

    pub fn query_with(&self, i: usize, j: usize, tau: Threshold, marks: &mut MarkSet) -> Result<MajorityAnswer> {
        let seq = &**self.var.sequence();
        check_range(i, j, seq.len())?;
        let mut stats = QueryStats::new();
        let need = tau.required(j - i + 1);
        let mut found = Vec::new();
        for k in self.var.candidates(i, j, tau, marks, &mut stats)? {
            stats.candidates += 1;
            let a = seq.access_unchecked(k);
            if seq.count(a) < need {
                stats.aborted += 1;
                continue;
            }
            let verdict = match self.counts.get(a) {
                Some(ix) => ix.count_at_least_unchecked(i, j, need, &mut stats),
                None => {
                    stats.dict_probes += 2;
                    let c = seq.rank_unchecked(a, j) - seq.rank_unchecked(a, i - 1);
                    if c >= need {
                        CountVerdict::Reached(c)
                    } else {
                        CountVerdict::Below(c)
                    }
                }
            };
            match verdict {
                CountVerdict::Reached(c) => found.push((a, c)),
                CountVerdict::Below(_) => {}
                CountVerdict::Aborted => stats.aborted += 1,
            }
        }
        Ok(MajorityAnswer::from_pairs(found, stats))
    }
}
