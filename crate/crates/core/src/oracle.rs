//! Brute-force reference answers, one linear scan each.
//!
//! Every function here works on plain slices so it can check any index
//! against the raw data, in tests and in `rangefreq verify`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::listing::DistinctItem;
use crate::threshold::Threshold;

/// The outcome of comparing one query answer with its oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub query: String,
    pub expected: String,
    pub actual: String,
    pub matches: bool,
}

impl OracleReport {
    pub fn new(
        query: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
        matches: bool,
    ) -> Self {
        OracleReport {
            query: query.into(),
            expected: expected.into(),
            actual: actual.into(),
            matches,
        }
    }
}

/// Symbol counts of `s[i..j]` (1-based, inclusive), in symbol order.
pub fn counts(s: &[usize], i: usize, j: usize) -> Result<BTreeMap<usize, usize>> {
    check_range(i, j, s.len())?;
    let mut m = BTreeMap::new();
    for &a in &s[i - 1..j] {
        *m.entry(a).or_insert(0) += 1;
    }
    Ok(m)
}

/// `(symbol, count)` for every symbol with at least `⌈τ·(j−i+1)⌉`
/// occurrences in `s[i..j]`, ascending by symbol.
pub fn majorities_with_counts(s: &[usize], i: usize, j: usize, tau: Threshold) -> Result<Vec<(usize, usize)>> {
    let need = tau.required(j.saturating_sub(i) + 1);
    Ok(counts(s, i, j)?.into_iter().filter(|&(_, c)| c >= need).collect())
}

/// Symbols with at least `⌈τ·(j−i+1)⌉` occurrences in `s[i..j]`.
///
/// ```
/// use rangefreq::{oracle, Threshold};
/// let s = [1, 2, 1, 3, 1, 2, 1];
/// let half = Threshold::new(1, 2).unwrap();
/// assert_eq!(oracle::majorities(&s, 1, 7, half).unwrap(), vec![1]);
/// ```
pub fn majorities(s: &[usize], i: usize, j: usize, tau: Threshold) -> Result<Vec<usize>> {
    Ok(majorities_with_counts(s, i, j, tau)?
        .into_iter()
        .map(|(a, _)| a)
        .collect())
}

/// Symbols present in `s[i..j]` with fewer than `⌈τ·(j−i+1)⌉` occurrences.
pub fn minorities(s: &[usize], i: usize, j: usize, tau: Threshold) -> Result<Vec<usize>> {
    let need = tau.required(j.saturating_sub(i) + 1);
    Ok(counts(s, i, j)?
        .into_iter()
        .filter(|&(_, c)| c < need)
        .map(|(a, _)| a)
        .collect())
}

/// A most frequent symbol of `s[i..j]` (the smallest on ties) and its count.
pub fn mode(s: &[usize], i: usize, j: usize) -> Result<(usize, usize)> {
    let mut best = (0, 0);
    for (a, c) in counts(s, i, j)? {
        if c > best.1 {
            best = (a, c);
        }
    }
    Ok(best)
}

/// Occurrences of `c` in `s[i..j]`.
pub fn symbol_count(s: &[usize], c: usize, i: usize, j: usize) -> Result<usize> {
    check_range(i, j, s.len())?;
    Ok(s[i - 1..j].iter().filter(|&&a| a == c).count())
}

/// Distinct symbols of `s[i..j]` with their leftmost positions, in order of
/// first appearance.
pub fn listing(s: &[usize], i: usize, j: usize) -> Result<Vec<DistinctItem>> {
    check_range(i, j, s.len())?;
    let mut seen = std::collections::HashSet::new();
    Ok((i..=j)
        .filter(|&p| seen.insert(s[p - 1]))
        .map(|p| DistinctItem {
            symbol: s[p - 1],
            leftmost_pos: p,
        })
        .collect())
}

fn check_universe_range(i: usize, j: usize, universe: usize) -> Result<()> {
    if i == 0 || i > j || j > universe {
        return Err(Error::InvalidRange { i, j, len: universe });
    }
    Ok(())
}

/// Points of `x` in `[i..j]`.
pub fn count(x: &[usize], universe: usize, i: usize, j: usize) -> Result<usize> {
    check_universe_range(i, j, universe)?;
    Ok(x.iter().filter(|&&p| i <= p && p <= j).count())
}

/// The largest point `<= j` that is also `>= i`, with its 1-based rank in
/// `x`.
pub fn pred(x: &[usize], universe: usize, i: usize, j: usize) -> Result<Option<(usize, usize)>> {
    check_universe_range(i, j, universe)?;
    Ok(x.iter()
        .enumerate()
        .rev()
        .find(|&(_, &p)| i <= p && p <= j)
        .map(|(r, &p)| (p, r + 1)))
}
