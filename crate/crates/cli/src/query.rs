//! `rangefreq query`.

use std::io::Write;

use clap::{Args, ValueEnum};
use rangefreq::persist::IndexFile;
use rangefreq::{listing, predcount, ImplicitRmq, MajorityAnswer, MarkSet, QueryStats, Threshold};
use serde::Serialize;

use crate::{emit, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Majority,
    Minority,
    Mode,
    Count,
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Via {
    Fixed,
    Var,
    Block,
    Sensitive,
}

#[derive(Debug, Clone, Args)]
pub struct QueryArgs {
    /// Index file written by `rangefreq build`.
    pub index: String,
    #[arg(value_enum)]
    pub op: Op,
    /// First position of the range (1-based).
    #[arg(short, long)]
    pub i: usize,
    /// Last position of the range (inclusive).
    #[arg(short, long)]
    pub j: usize,
    /// Threshold for `majority` and `minority`, as `p/q` or a decimal.
    #[arg(long)]
    pub tau: Option<Threshold>,
    /// Symbol for `count`.
    #[arg(long)]
    pub symbol: Option<usize>,
    /// Majority structure to use; defaults to the first present of var,
    /// sensitive, block, fixed.
    #[arg(long, value_enum)]
    pub via: Option<Via>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum MinorityJson {
    Found {
        symbol: usize,
        position: usize,
        count: usize,
        stats: QueryStats,
    },
    None {
        none: bool,
        stats: QueryStats,
    },
}

#[derive(Debug, Serialize)]
pub struct ModeJson {
    pub symbol: usize,
    pub count: usize,
    pub stats: QueryStats,
}

#[derive(Debug, Serialize)]
pub struct CountJson {
    pub occ: usize,
    pub stats: QueryStats,
}

#[derive(Debug, Serialize)]
pub struct ListItemJson {
    pub symbol: usize,
    pub position: usize,
}

#[derive(Debug, Serialize)]
pub struct ListJson {
    pub items: Vec<ListItemJson>,
    pub stats: QueryStats,
}

fn missing(what: &str) -> CliError {
    CliError::Usage(format!(
        "the index has no {what} structure; rebuild with --structures {what}"
    ))
}

fn need_tau(args: &QueryArgs) -> Result<Threshold, CliError> {
    args.tau.ok_or_else(|| CliError::Usage("this query needs --tau".into()))
}

/// Answers a majority query through the chosen structure.
pub fn majority(
    file: &IndexFile,
    via: Option<Via>,
    i: usize,
    j: usize,
    tau: Option<Threshold>,
) -> Result<MajorityAnswer, CliError> {
    let via = match via {
        Some(v) => v,
        None if file.var.is_some() => Via::Var,
        None if file.block.is_some() => Via::Block,
        None if file.fixed.is_some() => Via::Fixed,
        None => return Err(missing("var")),
    };
    let tau_or = |tau: Option<Threshold>| tau.ok_or_else(|| CliError::Usage("this query needs --tau".into()));
    Ok(match via {
        Via::Fixed => {
            let ix = file.fixed.as_ref().ok_or_else(|| missing("fixed"))?;
            if let Some(t) = tau {
                if t != ix.tau() {
                    return Err(CliError::Usage(format!(
                        "the fixed index was built for tau {}, not {t}",
                        ix.tau()
                    )));
                }
            }
            ix.query(i, j)?
        }
        Via::Var => file
            .var
            .as_ref()
            .ok_or_else(|| missing("var"))?
            .query(i, j, tau_or(tau)?)?,
        Via::Block => file
            .block
            .as_ref()
            .ok_or_else(|| missing("block"))?
            .query(i, j, tau_or(tau)?)?,
        Via::Sensitive => file
            .sensitive()
            .ok_or_else(|| missing("sensitive"))?
            .query(i, j, tau_or(tau)?)?,
    })
}

pub fn run(args: &QueryArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let file = IndexFile::load(&args.index).map_err(|e| match e {
        rangefreq::Error::Io(e) => CliError::Io(format!("{}: {e}", args.index)),
        e => CliError::Index(e),
    })?;
    let seq = &*file.seq;
    let (i, j) = (args.i, args.j);
    match args.op {
        Op::Majority => emit(out, &majority(&file, args.via, i, j, args.tau)?)?,
        Op::Minority => {
            let ix = file.minority.as_ref().ok_or_else(|| missing("minority"))?;
            let a = ix.query(i, j, need_tau(args)?)?;
            let json = match a.minority {
                Some(m) => MinorityJson::Found {
                    symbol: m.symbol,
                    position: m.position,
                    count: m.count,
                    stats: a.stats,
                },
                None => MinorityJson::None {
                    none: true,
                    stats: a.stats,
                },
            };
            emit(out, &json)?;
        }
        Op::Mode => {
            let ix = file.var.as_ref().ok_or_else(|| missing("var"))?;
            let m = ix.mode(i, j)?;
            emit(
                out,
                &ModeJson {
                    symbol: m.symbol,
                    count: m.count,
                    stats: m.stats,
                },
            )?;
        }
        Op::Count => {
            let c = args
                .symbol
                .ok_or_else(|| CliError::Usage("count needs --symbol".into()))?;
            let mut stats = QueryStats::new();
            let per_symbol = file.counts.as_ref().and_then(|x| x.get(c));
            let occ = predcount::count_symbol(seq, per_symbol, c, i, j, &mut stats)?;
            emit(out, &CountJson { occ, stats })?;
        }
        Op::List => {
            let mut stats = QueryStats::new();
            let mut marks = MarkSet::new(seq.sigma());
            let items = match file.minority.as_ref().and_then(|m| m.sparse_rmq()) {
                Some(srmq) => listing::list_distinct_sparse(seq, srmq, i, j, usize::MAX, &mut marks, &mut stats)?,
                None => {
                    let rmq = match file.minority.as_ref().and_then(|m| m.full_rmq()) {
                        Some(r) => r.clone(),
                        None => ImplicitRmq::new(seq),
                    };
                    listing::list_distinct(seq, &rmq, i, j, usize::MAX, &mut marks, &mut stats)?
                }
            };
            let mut items: Vec<ListItemJson> = items
                .into_iter()
                .map(|x| ListItemJson {
                    symbol: x.symbol,
                    position: x.leftmost_pos,
                })
                .collect();
            items.sort_by_key(|x| x.position);
            emit(out, &ListJson { items, stats })?;
        }
    }
    Ok(0)
}
