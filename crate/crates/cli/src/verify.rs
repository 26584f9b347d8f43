//! `rangefreq verify`.

use std::io::Write;

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rangefreq::oracle::{self, OracleReport};
use rangefreq::persist::IndexFile;
use rangefreq::{listing, predcount, MarkSet, QueryStats, Threshold};
use serde::Serialize;

use crate::{emit, CliError};

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Index file written by `rangefreq build`.
    pub index: String,
    /// Number of random ranges; each is checked against every structure in
    /// the file.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Final line of `rangefreq verify`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct VerifySummary {
    pub seed: u64,
    pub trials: usize,
    pub checks: usize,
    pub mismatches: usize,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn threshold_grid(sigma: usize) -> Vec<Threshold> {
    let mut grid: Vec<Threshold> = [1u64, 2, 3, 7, 64, sigma as u64]
        .into_iter()
        .map(|q| Threshold::new(1, q).expect("positive denominator"))
        .collect();
    grid.dedup();
    grid
}

/// Checks every structure of `file` on `trials` random ranges. Mismatches
/// go to `report`.
pub fn verify_file(file: &IndexFile, trials: usize, seed: u64, mut report: impl FnMut(OracleReport)) -> (usize, usize) {
    let seq = &*file.seq;
    let s = seq.to_vec();
    let n = s.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = threshold_grid(seq.sigma());
    let sensitive = file.sensitive();
    let mut marks = MarkSet::new(seq.sigma());
    let (mut checks, mut bad) = (0, 0);
    let mut check = |query: String, expected: String, actual: String, ok: bool| {
        checks += 1;
        if !ok {
            bad += 1;
            report(OracleReport::new(query, expected, actual, false));
        }
    };
    if n == 0 {
        return (0, 0);
    }
    for _ in 0..trials {
        let i = rng.gen_range(1..=n);
        let j = rng.gen_range(i..=n);
        let tau = grid[rng.gen_range(0..grid.len())];
        let want = oracle::majorities_with_counts(&s, i, j, tau).expect("valid range");
        let show = |r: &rangefreq::Result<rangefreq::MajorityAnswer>| match r {
            Ok(a) => format!("{:?}", a.pairs().collect::<Vec<_>>()),
            Err(e) => format!("error: {e}"),
        };
        let same = |r: &rangefreq::Result<rangefreq::MajorityAnswer>| {
            r.as_ref().is_ok_and(|a| a.pairs().eq(want.iter().copied()))
        };
        if let Some(ix) = &file.fixed {
            let w = oracle::majorities_with_counts(&s, i, j, ix.tau()).expect("valid range");
            let r = ix.query(i, j);
            let ok = r.as_ref().is_ok_and(|a| a.pairs().eq(w.iter().copied()));
            check(
                format!("fixed majority [{i},{j}] tau={}", ix.tau()),
                format!("{w:?}"),
                show(&r),
                ok,
            );
        }
        if let Some(ix) = &file.var {
            let r = ix.query(i, j, tau);
            check(
                format!("var majority [{i},{j}] tau={tau}"),
                format!("{want:?}"),
                show(&r),
                same(&r),
            );
            let (_, count) = oracle::mode(&s, i, j).expect("valid range");
            let m = ix.mode(i, j);
            let ok = m
                .as_ref()
                .is_ok_and(|m| m.count == count && s[i - 1..j].iter().filter(|&&a| a == m.symbol).count() == count);
            let got = m.map_or_else(|e| format!("error: {e}"), |m| format!("({}, {})", m.symbol, m.count));
            check(format!("mode [{i},{j}]"), format!("count {count}"), got, ok);
        }
        if let Some(ix) = &file.block {
            let r = ix.query(i, j, tau);
            check(
                format!("block majority [{i},{j}] tau={tau}"),
                format!("{want:?}"),
                show(&r),
                same(&r),
            );
        }
        if let Some(ix) = &sensitive {
            let r = ix.query(i, j, tau);
            check(
                format!("sensitive majority [{i},{j}] tau={tau}"),
                format!("{want:?}"),
                show(&r),
                same(&r),
            );
        }
        if let Some(ix) = &file.minority {
            let mins = oracle::minorities(&s, i, j, tau).expect("valid range");
            let r = ix.query(i, j, tau);
            let ok = match &r {
                Ok(a) => match a.minority {
                    Some(m) => {
                        mins.contains(&m.symbol)
                            && s[m.position - 1] == m.symbol
                            && m.position >= i
                            && !s[i - 1..m.position - 1].contains(&m.symbol)
                    }
                    None => mins.is_empty(),
                },
                Err(_) => false,
            };
            let got = match r {
                Ok(a) => format!("{:?}", a.minority.map(|m| (m.symbol, m.position))),
                Err(e) => format!("error: {e}"),
            };
            check(
                format!("minority [{i},{j}] tau={tau}"),
                format!("one of {mins:?}"),
                got,
                ok,
            );
            let mut stats = QueryStats::new();
            let mut want_list = oracle::listing(&s, i, j).expect("valid range");
            want_list.sort();
            let got = match (ix.full_rmq(), ix.sparse_rmq()) {
                (Some(r), _) => listing::list_distinct(seq, r, i, j, usize::MAX, &mut marks, &mut stats),
                (_, Some(r)) => listing::list_distinct_sparse(seq, r, i, j, usize::MAX, &mut marks, &mut stats),
                _ => unreachable!("a minority index has one listing"),
            };
            let got = got.map(|mut v| {
                v.sort();
                v
            });
            let ok = got.as_ref().is_ok_and(|v| *v == want_list);
            check(
                format!("listing [{i},{j}]"),
                format!("{want_list:?}"),
                format!("{got:?}"),
                ok,
            );
        }
        if let Some(counts) = &file.counts {
            let c = s[rng.gen_range(i..=j) - 1];
            if let Some(ix) = counts.get(c) {
                let want = oracle::symbol_count(&s, c, i, j).expect("valid range");
                let got = predcount::count_symbol(seq, Some(ix), c, i, j, &mut QueryStats::new());
                let ok = got.as_ref().is_ok_and(|&x| x == want);
                check(
                    format!("count symbol={c} [{i},{j}]"),
                    want.to_string(),
                    format!("{got:?}"),
                    ok,
                );
            }
        }
    }
    (checks, bad)
}

pub fn run(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let _ = writeln!(err, "rangefreq verify: seed {}", args.seed);
    let file = match IndexFile::load(&args.index) {
        Ok(f) => f,
        Err(rangefreq::Error::Io(e)) => return Err(CliError::Io(format!("{}: {e}", args.index))),
        Err(e) => {
            emit(
                out,
                &VerifySummary {
                    seed: args.seed,
                    trials: args.trials,
                    checks: 0,
                    mismatches: 1,
                    ok: false,
                    error: Some(e.to_string()),
                },
            )?;
            return Ok(1);
        }
    };
    let mut lines = Vec::new();
    let (checks, mismatches) = verify_file(&file, args.trials, args.seed, |r| lines.push(r));
    for r in &lines {
        emit(out, r)?;
    }
    emit(
        out,
        &VerifySummary {
            seed: args.seed,
            trials: args.trials,
            checks,
            mismatches,
            ok: mismatches == 0,
            error: None,
        },
    )?;
    Ok(if mismatches == 0 { 0 } else { 1 })
}
