//! `rangefreq bench`.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::time::Instant;

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rangefreq::persist::IndexFile;
use rangefreq::{MarkSet, QueryStats, Threshold};
use serde::Serialize;

use crate::{emit, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchOp {
    MajorityFixed,
    MajorityVar,
    MajorityBlock,
    MajoritySensitive,
    Minority,
    Mode,
    Count,
    Pred,
}

impl BenchOp {
    fn uses_tau(self) -> bool {
        matches!(
            self,
            BenchOp::MajorityVar | BenchOp::MajorityBlock | BenchOp::MajoritySensitive | BenchOp::Minority
        )
    }
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Index file written by `rangefreq build`.
    pub index: String,
    /// Thresholds to time, as `p/q` or decimals.
    #[arg(long, value_delimiter = ',', default_value = "1/2,1/16,1/256")]
    pub taus: Vec<Threshold>,
    /// Range lengths drawn uniformly for each query; clipped to `n`.
    #[arg(long, value_delimiter = ',', default_value = "16,256,4096,65536")]
    pub lengths: Vec<usize>,
    /// Queries per report row.
    #[arg(long, default_value_t = 10_000)]
    pub queries: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Operations to time; defaults to every operation the index supports.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub ops: Vec<BenchOp>,
}

/// One query of a workload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Job {
    pub i: usize,
    pub j: usize,
    pub symbol: usize,
}

#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub p50: u64,
    pub max: u64,
}

impl Summary {
    fn of(mut xs: Vec<u64>) -> Self {
        if xs.is_empty() {
            return Summary::default();
        }
        xs.sort_unstable();
        Summary {
            mean: xs.iter().sum::<u64>() as f64 / xs.len() as f64,
            p50: quantile(&xs, 0.5),
            max: *xs.last().unwrap(),
        }
    }
}

/// Per-row summaries of the work counters.
#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct ProbeSummary {
    pub probes: Summary,
    pub candidates: Summary,
    pub rmq_queries: Summary,
    pub cells_scanned: Summary,
    pub aborted: Summary,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LatencyRow {
    pub op: BenchOp,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<String>,
    pub queries: usize,
    pub p50_ns: u64,
    pub p95_ns: u64,
    pub p99_ns: u64,
    pub mean_ns: f64,
    pub counters: ProbeSummary,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Machine {
    pub os: &'static str,
    pub arch: &'static str,
    pub cpus: usize,
    pub threads: usize,
    pub tool_version: &'static str,
}

/// Structural facts checked against their size bounds.
#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct SpaceFacts {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_flag_bits: Option<usize>,
    /// `n · (⌊log2 n⌋ + 1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_flag_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var_tb_symbols: Option<usize>,
    /// Number of `(b, k)` pairs: `n · (⌊log2 n⌋ + 1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var_level_positions: Option<usize>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SectionSize {
    pub bytes: u64,
    pub bits_per_symbol: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BenchReport {
    pub seed: u64,
    pub n: usize,
    pub sigma: usize,
    pub entropy_h: f64,
    pub lengths: Vec<usize>,
    /// Hash of the generated queries; equal seeds give equal digests.
    pub workload_digest: String,
    pub machine: Machine,
    /// Serialized size of each section of the index file.
    pub sizes: BTreeMap<String, SectionSize>,
    pub space: SpaceFacts,
    pub rows: Vec<LatencyRow>,
}

fn quantile(sorted: &[u64], q: f64) -> u64 {
    let idx = ((sorted.len() as f64 * q).ceil() as usize).clamp(1, sorted.len());
    sorted[idx - 1]
}

/// Operations `file` can run.
pub fn available_ops(file: &IndexFile) -> Vec<BenchOp> {
    let mut ops = Vec::new();
    if file.fixed.is_some() {
        ops.push(BenchOp::MajorityFixed);
    }
    if file.var.is_some() {
        ops.push(BenchOp::MajorityVar);
    }
    if file.block.is_some() {
        ops.push(BenchOp::MajorityBlock);
    }
    if file.var.is_some() && file.counts.is_some() {
        ops.push(BenchOp::MajoritySensitive);
    }
    if file.minority.is_some() {
        ops.push(BenchOp::Minority);
    }
    if file.var.is_some() {
        ops.push(BenchOp::Mode);
    }
    if file.counts.as_ref().is_some_and(|c| !c.is_empty()) {
        ops.push(BenchOp::Count);
        ops.push(BenchOp::Pred);
    }
    ops
}

/// The deterministic query list of one row.
pub fn workload(file: &IndexFile, lengths: &[usize], queries: usize, seed: u64, row: u64) -> Vec<Job> {
    let n = file.seq.len();
    if n == 0 {
        return Vec::new();
    }
    let mut symbols: Vec<usize> = (1..=file.seq.sigma())
        .filter(|&c| file.counts.as_ref().is_some_and(|x| x.get(c).is_some()))
        .collect();
    if symbols.is_empty() {
        symbols.push(1);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ row.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    (0..queries)
        .map(|_| {
            let len = lengths[rng.gen_range(0..lengths.len())];
            let i = rng.gen_range(1..=n - len + 1);
            Job {
                i,
                j: i + len - 1,
                symbol: symbols[rng.gen_range(0..symbols.len())],
            }
        })
        .collect()
}

fn run_one(
    file: &IndexFile,
    op: BenchOp,
    tau: Threshold,
    job: Job,
    marks: &mut MarkSet,
) -> rangefreq::Result<QueryStats> {
    let (i, j) = (job.i, job.j);
    Ok(match op {
        BenchOp::MajorityFixed => file.fixed.as_ref().unwrap().query(i, j)?.stats,
        BenchOp::MajorityVar => file.var.as_ref().unwrap().query_with(i, j, tau, marks)?.stats,
        BenchOp::MajorityBlock => file.block.as_ref().unwrap().query(i, j, tau)?.stats,
        BenchOp::MajoritySensitive => unreachable!("handled by the caller"),
        BenchOp::Minority => file.minority.as_ref().unwrap().query_with(i, j, tau, marks)?.stats,
        BenchOp::Mode => file.var.as_ref().unwrap().mode_with(i, j, marks)?.stats,
        BenchOp::Count | BenchOp::Pred => {
            let mut stats = QueryStats::new();
            let ix = file.counts.as_ref().unwrap().get(job.symbol).unwrap();
            if op == BenchOp::Count {
                ix.count_range(i, j, &mut stats)?;
            } else {
                ix.pred_in_range(i, j, &mut stats)?;
            }
            stats
        }
    })
}

/// Times `jobs` on `threads` workers. Each worker owns its scratch space
/// and results; they are merged once all workers finish.
fn time_jobs(
    file: &IndexFile,
    op: BenchOp,
    tau: Threshold,
    jobs: &[Job],
    threads: usize,
) -> rangefreq::Result<Vec<(u64, QueryStats)>> {
    let sensitive = (op == BenchOp::MajoritySensitive).then(|| file.sensitive().expect("checked by available_ops"));
    let chunk = jobs.len().div_ceil(threads.max(1)).max(1);
    std::thread::scope(|scope| {
        let workers: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| {
                let sensitive = sensitive.as_ref();
                scope.spawn(move || -> rangefreq::Result<Vec<(u64, QueryStats)>> {
                    let mut marks = MarkSet::new(file.seq.sigma());
                    let mut out = Vec::with_capacity(part.len());
                    for &job in part {
                        let start = Instant::now();
                        let stats = match sensitive {
                            Some(ix) => ix.query_with(job.i, job.j, tau, &mut marks)?.stats,
                            None => run_one(file, op, tau, job, &mut marks)?,
                        };
                        out.push((start.elapsed().as_nanos() as u64, stats));
                    }
                    Ok(out)
                })
            })
            .collect();
        let mut all = Vec::with_capacity(jobs.len());
        for w in workers {
            all.extend(w.join().expect("benchmark worker panicked")?);
        }
        Ok(all)
    })
}

fn row(op: BenchOp, tau: Option<Threshold>, results: Vec<(u64, QueryStats)>) -> LatencyRow {
    let mut lat: Vec<u64> = results.iter().map(|r| r.0).collect();
    lat.sort_unstable();
    let pick = |f: fn(&QueryStats) -> u64| Summary::of(results.iter().map(|r| f(&r.1)).collect());
    LatencyRow {
        op,
        tau: tau.map(|t| t.to_string()),
        queries: results.len(),
        p50_ns: if lat.is_empty() { 0 } else { quantile(&lat, 0.5) },
        p95_ns: if lat.is_empty() { 0 } else { quantile(&lat, 0.95) },
        p99_ns: if lat.is_empty() { 0 } else { quantile(&lat, 0.99) },
        mean_ns: if lat.is_empty() {
            0.0
        } else {
            lat.iter().sum::<u64>() as f64 / lat.len() as f64
        },
        counters: ProbeSummary {
            probes: pick(|s| s.probes()),
            candidates: pick(|s| s.candidates),
            rmq_queries: pick(|s| s.rmq_queries),
            cells_scanned: pick(|s| s.cells_scanned),
            aborted: pick(|s| s.aborted),
        },
    }
}

/// Runs the benchmark described by `args` on an already loaded file.
pub fn bench_file(file: &IndexFile, args: &BenchArgs) -> Result<BenchReport, CliError> {
    if args.taus.is_empty() || args.lengths.is_empty() || args.lengths.contains(&0) {
        return Err(CliError::Usage("--taus and --lengths need positive entries".into()));
    }
    let n = file.seq.len();
    let mut lengths: Vec<usize> = args.lengths.iter().map(|&l| l.min(n)).filter(|&l| l > 0).collect();
    lengths.sort_unstable();
    lengths.dedup();
    let available = available_ops(file);
    let ops = if args.ops.is_empty() {
        available.clone()
    } else {
        args.ops.clone()
    };
    if let Some(op) = ops.iter().find(|op| !available.contains(op)) {
        return Err(CliError::Usage(format!("the index cannot run {op:?}")));
    }
    let mut digest = DefaultHasher::new();
    let mut rows = Vec::new();
    let mut row_id = 0u64;
    for &op in &ops {
        let taus: Vec<Option<Threshold>> = if op.uses_tau() {
            args.taus.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for tau in taus {
            row_id += 1;
            if lengths.is_empty() {
                continue;
            }
            let jobs = workload(file, &lengths, args.queries, args.seed, row_id);
            (op, tau.map(|t| (t.num(), t.den())), &jobs).hash(&mut digest);
            let t = tau.unwrap_or_else(|| Threshold::new(1, 2).expect("valid"));
            let results = time_jobs(file, op, t, &jobs, args.threads)?;
            rows.push(row(op, tau, results));
        }
    }
    let bytes = file.to_bytes()?;
    let mut sizes = BTreeMap::new();
    for e in IndexFile::read_table(&bytes)? {
        sizes.insert(
            e.kind.name().to_string(),
            SectionSize {
                bytes: e.length,
                bits_per_symbol: if n == 0 { 0.0 } else { 8.0 * e.length as f64 / n as f64 },
            },
        );
    }
    let levels = if n == 0 { 0 } else { n.ilog2() as usize + 1 };
    let space = SpaceFacts {
        fixed_flag_bits: file.fixed.as_ref().map(|f| f.flag_bits()),
        fixed_flag_bound: file.fixed.as_ref().map(|_| n * levels),
        var_tb_symbols: file.var.as_ref().map(|v| v.tb_symbols()),
        var_level_positions: file.var.as_ref().map(|_| n * levels),
    };
    let stats = file.seq.stats();
    Ok(BenchReport {
        seed: args.seed,
        n,
        sigma: stats.sigma,
        entropy_h: stats.entropy_h,
        lengths,
        workload_digest: format!("{:016x}", digest.finish()),
        machine: Machine {
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
            cpus: std::thread::available_parallelism().map_or(1, |x| x.get()),
            threads: args.threads.max(1),
            tool_version: env!("CARGO_PKG_VERSION"),
        },
        sizes,
        space,
        rows,
    })
}

pub fn run(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let _ = writeln!(err, "rangefreq bench: seed {}", args.seed);
    let file = IndexFile::load(&args.index).map_err(|e| match e {
        rangefreq::Error::Io(e) => CliError::Io(format!("{}: {e}", args.index)),
        e => CliError::Index(e),
    })?;
    emit(out, &bench_file(&file, args)?)?;
    Ok(0)
}
