use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::QueryStats;

/// A strictly increasing set of points in `[1..U]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<u32>,
    universe: usize,
}

impl PointSet {
    /// Largest supported universe.
    pub const MAX_UNIVERSE: usize = u32::MAX as usize;

    pub fn new(points: &[usize], universe: usize) -> Result<Self> {
        if universe == 0 || universe > Self::MAX_UNIVERSE {
            return Err(Error::Validation(format!(
                "universe {universe} is outside [1..{}]",
                Self::MAX_UNIVERSE
            )));
        }
        for (r, w) in points.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(Error::Validation(format!(
                    "points must be strictly increasing (rank {} has {} then {})",
                    r + 1,
                    w[0],
                    w[1]
                )));
            }
        }
        if let (Some(&lo), Some(&hi)) = (points.first(), points.last()) {
            if lo == 0 || hi > universe {
                return Err(Error::Validation(format!("points must lie in [1..{universe}]")));
            }
        }
        Ok(PointSet {
            points: points.iter().map(|&x| x as u32).collect(),
            universe,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// The point of 1-based rank `r`.
    pub fn get(&self, r: usize) -> usize {
        self.points[r - 1] as usize
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.points.iter().map(|&x| x as usize).collect()
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.points
    }

    pub(crate) fn check_range(&self, i: usize, j: usize) -> Result<()> {
        if i == 0 || i > j || j > self.universe {
            return Err(Error::InvalidRange {
                i,
                j,
                len: self.universe,
            });
        }
        Ok(())
    }
}

/// Index of the last element of `x[lo..hi]` that is `<= y`, or `None`.
/// Counts one step per comparison.
pub(crate) fn last_at_most(x: &[u32], lo: usize, hi: usize, y: usize, stats: &mut QueryStats) -> Option<usize> {
    let (mut a, mut b) = (lo, hi);
    while a < b {
        stats.binsearch_steps += 1;
        let mid = a + (b - a) / 2;
        if x[mid] as usize <= y {
            a = mid + 1;
        } else {
            b = mid;
        }
    }
    if a == lo {
        None
    } else {
        Some(a - 1)
    }
}

/// Element range `[start, end)` of `X` inside one interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct Span {
    start: u32,
    end: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
struct PredLevel {
    #[serde(with = "crate::sorted_map")]
    intervals: FxHashMap<u64, Span>,
    /// `(interval << 8 | depth, prefix)` to the first and last sample under
    /// that trie node, for intervals with more than `2^ℓ` points.
    #[serde(with = "crate::sorted_map")]
    prefixes: FxHashMap<(u64, u64), (u32, u32)>,
}

/// Predecessor search inside a range known to hold a point, in
/// O(log log (j − i + 1)) probes.
///
/// Level `ℓ` cuts the universe into windows of width `W = 2^(2^ℓ)` and
/// indexes the overlapping intervals `[kW + 1, (k + 2)W]`, so any range of
/// length at most `W` sits inside one of them. An interval with more than
/// `2^ℓ` points also keeps every `2^ℓ`-th point in a trie of prefix
/// dictionaries over its `2^ℓ + 1`-bit local keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredIndex {
    set: PointSet,
    levels: Vec<PredLevel>,
}

fn window(level: usize) -> u64 {
    1u64 << (1u32 << level)
}

/// Smallest level whose window width is at least `len`.
fn level_for(len: usize) -> usize {
    let mut l = 0;
    while (window(l) as u128) < len as u128 {
        l += 1;
    }
    l
}

/// Groups sorted points into runs sharing `(x − 1) / width`:
/// `(group id, first rank, end rank)`.
pub(crate) fn groups(x: &[u32], width: u64) -> Vec<(u64, u32, u32)> {
    let mut out: Vec<(u64, u32, u32)> = Vec::new();
    for (r, &p) in x.iter().enumerate() {
        let g = (p as u64 - 1) / width;
        match out.last_mut() {
            Some(last) if last.0 == g => last.2 = r as u32 + 1,
            _ => out.push((g, r as u32, r as u32 + 1)),
        }
    }
    out
}

/// Nonempty intervals `k` made of groups `k` and `k + 1`, with their spans.
pub(crate) fn paired_intervals(gs: &[(u64, u32, u32)]) -> Vec<(u64, u32, u32)> {
    let mut out = Vec::with_capacity(2 * gs.len());
    for (idx, &(g, s, e)) in gs.iter().enumerate() {
        // Interval g - 1 covers groups g - 1 and g.
        if g >= 1 {
            let prev_adjacent = idx > 0 && gs[idx - 1].0 == g - 1;
            if !prev_adjacent {
                out.push((g - 1, s, e));
            }
        }
        let end = match gs.get(idx + 1) {
            Some(&(h, _, e2)) if h == g + 1 => e2,
            _ => e,
        };
        out.push((g, s, end));
    }
    out
}

impl PredIndex {
    pub fn new(set: PointSet) -> Self {
        let top = level_for(set.universe());
        let x = set.raw();
        let mut levels = Vec::with_capacity(top + 1);
        for l in 0..=top {
            let w = window(l);
            let step = 1usize << l;
            let bits = (1u32 << l) + 1;
            let mut level = PredLevel::default();
            for (k, s, e) in paired_intervals(&groups(x, w)) {
                level.intervals.insert(k, Span { start: s, end: e });
                let n_k = (e - s) as usize;
                if n_k <= step {
                    continue;
                }
                let base = k * w + 1;
                let samples = n_k.div_ceil(step);
                for t in 0..samples {
                    let key = x[s as usize + t * step] as u64 - base;
                    for depth in 0..=bits {
                        let prefix = if depth == 0 { 0 } else { key >> (bits - depth) };
                        level
                            .prefixes
                            .entry(((k << 8) | depth as u64, prefix))
                            .and_modify(|v| v.1 = t as u32)
                            .or_insert((t as u32, t as u32));
                    }
                }
            }
            levels.push(level);
        }
        PredIndex { set, levels }
    }

    pub fn points(&self) -> &PointSet {
        &self.set
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Approximate heap bits: points plus dictionary entries.
    pub fn size_bits(&self) -> usize {
        let entries: usize = self
            .levels
            .iter()
            .map(|l| l.intervals.len() * (64 + 64) + l.prefixes.len() * (128 + 64))
            .sum();
        32 * self.set.len() + entries
    }

    /// Dictionary consistency: every point is covered by its two intervals
    /// on every level.
    pub fn check_coverage(&self) -> bool {
        let x = self.set.raw();
        self.levels.iter().enumerate().all(|(l, level)| {
            let w = window(l);
            x.iter().enumerate().all(|(r, &p)| {
                let g = (p as u64 - 1) / w;
                let ks = if g == 0 { vec![0] } else { vec![g - 1, g] };
                ks.into_iter().all(|k| {
                    level
                        .intervals
                        .get(&k)
                        .is_some_and(|sp| (sp.start as usize..sp.end as usize).contains(&r))
                })
            })
        })
    }

    /// The largest point `x <= j` with `x >= i`, and its 1-based rank.
    ///
    /// The probe bound holds when `[i..j]` holds a point. On an empty range
    /// the answer is `None`.
    ///
    /// ```
    /// use rangefreq::{PointSet, PredIndex, QueryStats};
    /// let ix = PredIndex::new(PointSet::new(&[2, 3, 5, 11, 13], 16).unwrap());
    /// let mut stats = QueryStats::new();
    /// assert_eq!(ix.pred_in_range(4, 12, &mut stats).unwrap(), Some((11, 4)));
    /// ```
    pub fn pred_in_range(&self, i: usize, j: usize, stats: &mut QueryStats) -> Result<Option<(usize, usize)>> {
        self.set.check_range(i, j)?;
        Ok(self.pred_unchecked(i, j, stats))
    }

    pub(crate) fn pred_unchecked(&self, i: usize, j: usize, stats: &mut QueryStats) -> Option<(usize, usize)> {
        if self.set.is_empty() {
            return None;
        }
        let l = level_for(j - i + 1);
        let w = window(l);
        let mut k = (i as u64 - 1) / w;
        if k >= 1 && j as u64 <= (k + 1) * w {
            k -= 1;
        }
        let level = &self.levels[l];
        stats.dict_probes += 1;
        let span = *level.intervals.get(&k)?;
        let x = self.set.raw();
        let (s, e) = (span.start as usize, span.end as usize);
        let step = 1usize << l;
        let idx = if e - s <= step {
            last_at_most(x, s, e, j, stats)?
        } else {
            let bits = (1u32 << l) + 1;
            let y = j as u64 - (k * w + 1);
            let node = |depth: u32, stats: &mut QueryStats| {
                stats.dict_probes += 1;
                let prefix = if depth == 0 { 0 } else { y >> (bits - depth) };
                level.prefixes.get(&(((k << 8) | depth as u64), prefix)).copied()
            };
            // Longest prefix of y present in the trie.
            let (mut lo, mut hi) = (0u32, bits);
            let mut found = node(0, stats)?;
            while lo < hi {
                let mid = lo + (hi - lo).div_ceil(2);
                match node(mid, stats) {
                    Some(v) => {
                        lo = mid;
                        found = v;
                    }
                    None => hi = mid - 1,
                }
            }
            let t = if lo == bits || (y >> (bits - lo - 1)) & 1 == 1 {
                found.1 as usize
            } else {
                (found.0 as usize).checked_sub(1)?
            };
            let from = s + t * step;
            let to = (from + step).min(e);
            last_at_most(x, from, to, j, stats)?
        };
        let p = x[idx] as usize;
        (p >= i).then_some((p, idx + 1))
    }
}
