//! `rangefreq build`.

use std::io::Write;
use std::sync::Arc;

use clap::{Args, ValueEnum};
use rangefreq::majority::DEFAULT_SLACK;
use rangefreq::persist::IndexFile;
use rangefreq::{
    BlockMajIndex, CountPolicy, FixedMajIndex, MinorityIndex, MinorityMode, Sequence, SymbolCounts, Threshold,
    VarMajIndex,
};
use serde::Serialize;

use crate::input::{parse, read_input, Format};
use crate::{emit, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Structure {
    /// Majority for the `--tau` given at build time.
    Fixed,
    /// Majority for any threshold.
    Var,
    /// Majority with block-thinned flags.
    Block,
    /// Range minority.
    Minority,
    /// Per-symbol counting indexes.
    Counts,
    /// Early-exit majority: `var` plus `counts`.
    Sensitive,
    /// Everything above.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ListingMode {
    Full,
    Sparse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountsPolicy {
    /// Symbols occurring at least `n / 65536` times.
    Frequent,
    /// Every symbol present.
    All,
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    /// Input file, or `-` for stdin.
    pub input: String,
    /// Where to write the index file.
    #[arg(short, long)]
    pub output: String,
    #[arg(long, value_enum, default_value = "ints")]
    pub format: Format,
    /// Alphabet size; defaults to 256 for bytes and to the largest value
    /// for integers.
    #[arg(long)]
    pub sigma: Option<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "var,minority")]
    pub structures: Vec<Structure>,
    /// Threshold of the fixed-threshold index, as `p/q` or a decimal.
    #[arg(long, default_value = "1/2")]
    pub tau: Threshold,
    /// Listing used by the minority index.
    #[arg(long, value_enum, default_value = "sparse")]
    pub minority_mode: ListingMode,
    /// Block length of sparse listing; defaults to `max(2, ⌈log2 n⌉)`.
    #[arg(long)]
    pub f: Option<usize>,
    /// Slack factor `g` of the block index.
    #[arg(long, default_value_t = DEFAULT_SLACK)]
    pub slack: usize,
    #[arg(long, value_enum, default_value = "frequent")]
    pub counts: CountsPolicy,
}

/// Printed after a successful build.
#[derive(Debug, Serialize)]
pub struct BuildSummary {
    pub n: usize,
    pub sigma: usize,
    pub entropy_h: f64,
    pub structures: Vec<&'static str>,
    pub bytes: usize,
}

/// Builds the requested structures over `seq`.
pub fn build_file(seq: Arc<Sequence>, args: &BuildArgs) -> Result<IndexFile, CliError> {
    let wants = |s: Structure| args.structures.iter().any(|&x| x == s || x == Structure::All);
    let mut file = IndexFile::new(seq.clone());
    if wants(Structure::Fixed) {
        file.fixed = Some(FixedMajIndex::new(seq.clone(), args.tau)?);
    }
    if wants(Structure::Var) || wants(Structure::Sensitive) {
        file.var = Some(VarMajIndex::new(seq.clone()));
    }
    if wants(Structure::Block) {
        file.block = Some(BlockMajIndex::new(seq.clone(), args.slack)?);
    }
    if wants(Structure::Minority) {
        let mode = match args.minority_mode {
            ListingMode::Full => MinorityMode::Full,
            ListingMode::Sparse => MinorityMode::Sparse,
        };
        file.minority = Some(MinorityIndex::new(seq.clone(), mode, args.f)?);
    }
    if wants(Structure::Counts) || wants(Structure::Sensitive) {
        let policy = match args.counts {
            CountsPolicy::Frequent => CountPolicy::Frequent,
            CountsPolicy::All => CountPolicy::All,
        };
        file.counts = Some(SymbolCounts::new(&seq, &policy));
    }
    Ok(file)
}

pub fn structures_of(file: &IndexFile) -> Vec<&'static str> {
    let mut out = Vec::new();
    if file.fixed.is_some() {
        out.push("fixed");
    }
    if file.var.is_some() {
        out.push("var");
    }
    if file.block.is_some() {
        out.push("block");
    }
    if file.minority.is_some() {
        out.push("minority");
    }
    if file.counts.is_some() {
        out.push("counts");
    }
    out
}

pub fn run(args: &BuildArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if args.f == Some(0) {
        return Err(CliError::Usage("--f must be at least 1".into()));
    }
    let data = read_input(&args.input)?;
    let (symbols, sigma) = parse(&data, args.format, args.sigma)?;
    let seq = Arc::new(Sequence::new(&symbols, sigma)?);
    let file = build_file(seq.clone(), args)?;
    let bytes = file.to_bytes()?;
    std::fs::write(&args.output, &bytes).map_err(|e| CliError::Io(format!("{}: {e}", args.output)))?;
    let stats = seq.stats();
    emit(
        out,
        &BuildSummary {
            n: stats.n,
            sigma: stats.sigma,
            entropy_h: stats.entropy_h,
            structures: structures_of(&file),
            bytes: bytes.len(),
        },
    )?;
    Ok(0)
}
