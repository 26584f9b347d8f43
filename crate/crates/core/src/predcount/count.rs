use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::pred::{groups, paired_intervals, PointSet, PredIndex};
use crate::bitvec::{BitVec, BitVecBuilder};
use crate::error::Result;
use crate::stats::QueryStats;

/// Per-interval record: where its prefix sums start and how many points
/// precede it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct Entry {
    /// Bit offset of the interval's unary counts in the level bitvector.
    offset: u64,
    /// Ones before that offset.
    ones: u64,
    /// Points of `X` left of the interval.
    before: u32,
    /// Points inside the interval.
    n_k: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
struct CountLevel {
    #[serde(with = "crate::sorted_map")]
    intervals: FxHashMap<u64, Entry>,
    /// For each interval in turn, each subinterval written as its count in
    /// zeros followed by a one.
    unary: BitVec,
}

/// Exact range counting whose cost shrinks as the answer gets denser.
///
/// Level `ℓ` indexes the overlapping intervals `[2^(ℓ−1)k + 1, 2^(ℓ−1)k + 2^ℓ]`.
/// An interval holding `n_k` points is cut into subintervals of
/// `⌈2^ℓ / n_k⌉` cells whose counts are kept as prefix sums. A query picks the
/// level where one interval contains the range, reads whole subintervals
/// from the prefix sums, and resolves the partial subinterval at each end
/// with one emptiness test or one predecessor search.
///
/// ```
/// use rangefreq::{CountIndex, QueryStats};
/// let ix = CountIndex::new(&[2, 3, 5, 11, 13], 16).unwrap();
/// let mut stats = QueryStats::new();
/// assert_eq!(ix.count_range(4, 12, &mut stats).unwrap(), 2);
/// assert_eq!(ix.count_range(6, 10, &mut stats).unwrap(), 0);
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountIndex {
    pred: PredIndex,
    /// Universe bitvector, kept when `U <= 64 m`.
    occupancy: Option<BitVec>,
    /// Levels `2..`, stored from index 0.
    levels: Vec<CountLevel>,
}

const MIN_LEVEL: u32 = 2;

/// Result of [`CountIndex::count_at_least`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountVerdict {
    /// The exact count, which reaches the target.
    Reached(usize),
    /// The exact count, which falls short.
    Below(usize),
    /// Stopped early: the count is known to fall short.
    Aborted,
}

struct Cell<'a> {
    level: &'a CountLevel,
    entry: Entry,
    base: usize,
    sub: usize,
}

fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

impl CountIndex {
    /// Builds the counting, predecessor and emptiness structures for a
    /// strictly increasing point list.
    pub fn new(points: &[usize], universe: usize) -> Result<Self> {
        Ok(Self::from_set(PointSet::new(points, universe)?))
    }

    pub fn from_set(set: PointSet) -> Self {
        let u = set.universe();
        let m = set.len();
        let occupancy = (m > 0 && u <= 64 * m).then(|| {
            let mut b = BitVecBuilder::with_capacity(u);
            let mut next = 0;
            for &p in set.raw() {
                b.push_run(false, p as usize - 1 - next);
                b.push(true);
                next = p as usize;
            }
            b.push_run(false, u - next);
            b.build()
        });
        let top = (ceil_log2(u) + 1).max(MIN_LEVEL);
        let x = set.raw();
        let mut levels = Vec::new();
        for l in MIN_LEVEL..=top {
            let half = 1u64 << (l - 1);
            let size = 1u64 << l;
            let mut level = CountLevel::default();
            let mut unary = BitVecBuilder::new();
            let mut ones = 0u64;
            for (k, s, e) in paired_intervals(&groups(x, half)) {
                let n_k = (e - s) as u64;
                let sub = size.div_ceil(n_k);
                let parts = size.div_ceil(sub);
                let base = k * half;
                level.intervals.insert(
                    k,
                    Entry {
                        offset: unary.len() as u64,
                        ones,
                        before: s,
                        n_k: n_k as u32,
                    },
                );
                let mut r = s as usize;
                for q in 0..parts {
                    let hi = base + (q + 1) * sub;
                    while r < e as usize && x[r] as u64 <= hi {
                        unary.push(false);
                        r += 1;
                    }
                    unary.push(true);
                }
                ones += parts;
            }
            level.unary = unary.build();
            levels.push(level);
        }
        CountIndex {
            pred: PredIndex::new(set),
            occupancy,
            levels,
        }
    }

    pub fn points(&self) -> &PointSet {
        self.pred.points()
    }

    pub fn pred_index(&self) -> &PredIndex {
        &self.pred
    }

    pub fn len(&self) -> usize {
        self.pred.points().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn universe(&self) -> usize {
        self.pred.points().universe()
    }

    /// Approximate heap bits of all parts.
    pub fn size_bits(&self) -> usize {
        self.pred.size_bits()
            + self.occupancy.as_ref().map_or(0, BitVec::size_bits)
            + self
                .levels
                .iter()
                .map(|l| l.unary.size_bits() + l.intervals.len() * (64 + 192))
                .sum::<usize>()
    }

    /// See [`PredIndex::pred_in_range`].
    pub fn pred_in_range(&self, i: usize, j: usize, stats: &mut QueryStats) -> Result<Option<(usize, usize)>> {
        self.pred.pred_in_range(i, j, stats)
    }

    /// `(true, None)` when `[i..j]` holds no point, otherwise `(false,
    /// Some(witness))`.
    pub fn is_empty_range(&self, i: usize, j: usize, stats: &mut QueryStats) -> Result<(bool, Option<usize>)> {
        self.points().check_range(i, j)?;
        let w = self.witness(i, j, stats);
        Ok((w.is_none(), w))
    }

    fn witness(&self, i: usize, j: usize, stats: &mut QueryStats) -> Option<usize> {
        match &self.occupancy {
            Some(bv) => {
                stats.dict_probes += 2;
                let before = bv.rank1_unchecked(i - 1);
                (bv.rank1_unchecked(j) > before).then(|| {
                    stats.dict_probes += 1;
                    bv.select1_unchecked(before + 1)
                })
            }
            None => self.pred.pred_unchecked(i, j, stats).map(|(p, _)| p),
        }
    }

    /// Whether `[i..j]` is empty, without producing a witness.
    fn empty_unchecked(&self, i: usize, j: usize, stats: &mut QueryStats) -> Option<bool> {
        let bv = self.occupancy.as_ref()?;
        stats.dict_probes += 2;
        Some(bv.rank1_unchecked(j) == bv.rank1_unchecked(i - 1))
    }

    /// Number of points in `[i..j]`.
    pub fn count_range(&self, i: usize, j: usize, stats: &mut QueryStats) -> Result<usize> {
        self.points().check_range(i, j)?;
        Ok(self.count_unchecked(i, j, stats))
    }

    pub(crate) fn count_unchecked(&self, i: usize, j: usize, stats: &mut QueryStats) -> usize {
        if self.is_empty() || self.empty_unchecked(i, j, stats) == Some(true) {
            return 0;
        }
        match self.locate(i, j, stats) {
            Some(cell) => self.at_most(&cell, j, stats) - self.at_most(&cell, i - 1, stats),
            None => 0,
        }
    }

    /// Counts the points in `[i..j]` unless cheap evidence shows there are
    /// fewer than `need`: the whole set, the enclosing interval, or the
    /// subintervals overlapping the range hold fewer than `need` points.
    pub fn count_at_least(&self, i: usize, j: usize, need: usize, stats: &mut QueryStats) -> Result<CountVerdict> {
        self.points().check_range(i, j)?;
        Ok(self.count_at_least_unchecked(i, j, need, stats))
    }

    pub(crate) fn count_at_least_unchecked(
        &self,
        i: usize,
        j: usize,
        need: usize,
        stats: &mut QueryStats,
    ) -> CountVerdict {
        let verdict = |c: usize| {
            if c >= need {
                CountVerdict::Reached(c)
            } else {
                CountVerdict::Below(c)
            }
        };
        if self.len() < need {
            return CountVerdict::Aborted;
        }
        if self.is_empty() || self.empty_unchecked(i, j, stats) == Some(true) {
            return verdict(0);
        }
        let Some(cell) = self.locate(i, j, stats) else {
            return verdict(0);
        };
        if (cell.entry.n_k as usize) < need {
            return CountVerdict::Aborted;
        }
        let qi = (i - 1 - cell.base) / cell.sub;
        let qj = (j - cell.base).div_ceil(cell.sub);
        let upper = self.prefix(&cell, qj, stats) - self.prefix(&cell, qi, stats);
        if upper < need {
            return CountVerdict::Aborted;
        }
        verdict(self.at_most(&cell, j, stats) - self.at_most(&cell, i - 1, stats))
    }

    /// The interval of the smallest level that contains `[i..j]`.
    fn locate(&self, i: usize, j: usize, stats: &mut QueryStats) -> Option<Cell<'_>> {
        let len = j - i + 1;
        let l = (ceil_log2(len) + 1).max(MIN_LEVEL);
        let level = &self.levels[(l - MIN_LEVEL) as usize];
        let k = (i as u64 - 1) >> (l - 1);
        stats.dict_probes += 1;
        let entry = *level.intervals.get(&k)?;
        Some(Cell {
            level,
            entry,
            base: (k << (l - 1)) as usize,
            sub: ((1u64 << l).div_ceil(entry.n_k as u64)) as usize,
        })
    }

    /// Points in the first `q` subintervals of the cell.
    fn prefix(&self, cell: &Cell<'_>, q: usize, stats: &mut QueryStats) -> usize {
        if q == 0 {
            return 0;
        }
        stats.dict_probes += 1;
        let pos = cell.level.unary.select1_unchecked(cell.entry.ones as usize + q);
        pos - cell.entry.offset as usize - q
    }

    /// Points of the cell's interval that are `<= y`.
    fn at_most(&self, cell: &Cell<'_>, y: usize, stats: &mut QueryStats) -> usize {
        let q = (y - cell.base) / cell.sub;
        let tail_start = cell.base + q * cell.sub + 1;
        if tail_start <= y && self.empty_unchecked(tail_start, y, stats) != Some(true) {
            if let Some((_, r)) = self.pred.pred_unchecked(tail_start, y, stats) {
                return r - cell.entry.before as usize;
            }
        }
        self.prefix(cell, q, stats)
    }

    /// Every interval's subinterval counts add up to its point count.
    pub fn check_prefix_sums(&self) -> bool {
        self.levels.iter().enumerate().all(|(li, level)| {
            let l = li as u32 + MIN_LEVEL;
            level.intervals.values().all(|e| {
                let size = 1u64 << l;
                let parts = size.div_ceil(size.div_ceil(e.n_k as u64)) as usize;
                let pos = level.unary.select1_unchecked(e.ones as usize + parts);
                pos - e.offset as usize - parts == e.n_k as usize
            })
        })
    }
}
