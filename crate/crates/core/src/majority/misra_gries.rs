use rustc_hash::FxHashMap;

use crate::threshold::Threshold;

/// The τ-majorities of `symbols` with their counts, ascending by symbol.
///
/// The first pass keeps `⌊1/τ⌋` counters; every symbol with more than
/// `len / (⌊1/τ⌋ + 1)` occurrences survives it, which covers every symbol
/// with at least `τ · len`. The second pass counts the survivors exactly.
///
/// ```
/// use rangefreq::{majority::misra_gries, Threshold};
/// let half = Threshold::new(1, 2).unwrap();
/// assert_eq!(misra_gries(&[1, 2, 1, 3, 1, 2, 1], half), vec![(1, 4)]);
/// ```
pub fn misra_gries(symbols: &[usize], tau: Threshold) -> Vec<(usize, usize)> {
    let k = tau.inverse_floor().max(1);
    let mut counters: FxHashMap<usize, usize> = FxHashMap::default();
    for &a in symbols {
        if let Some(c) = counters.get_mut(&a) {
            *c += 1;
        } else if counters.len() < k {
            counters.insert(a, 1);
        } else {
            counters.retain(|_, c| {
                *c -= 1;
                *c > 0
            });
        }
    }
    let mut exact: FxHashMap<usize, usize> = counters.keys().map(|&a| (a, 0)).collect();
    for a in symbols {
        if let Some(c) = exact.get_mut(a) {
            *c += 1;
        }
    }
    let need = tau.required(symbols.len());
    let mut out: Vec<(usize, usize)> = exact.into_iter().filter(|&(_, c)| c >= need && c > 0).collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn examples() {
        let t = |p, q| Threshold::new(p, q).unwrap();
        assert_eq!(misra_gries(&[1, 2, 1, 3, 1, 2, 1], t(1, 2)), vec![(1, 4)]);
        assert_eq!(misra_gries(&[4, 4, 4], t(1, 1)), vec![(4, 3)]);
        assert!(misra_gries(&[1, 2, 3], Threshold::from_f64(0.34).unwrap()).is_empty());
        assert!(misra_gries(&[], t(1, 2)).is_empty());
    }

    #[test]
    fn random_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..500 {
            let sigma = rng.gen_range(1..=20);
            let n = rng.gen_range(1..=300);
            let s: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=sigma)).collect();
            let tau = Threshold::new(1, rng.gen_range(1..=12)).unwrap();
            assert_eq!(
                misra_gries(&s, tau),
                oracle::majorities_with_counts(&s, 1, n, tau).unwrap()
            );
        }
    }
}
