//! Frequency queries over ranges of a static integer sequence.
//!
//! Given `S[1..n]` over `[1..σ]` and a range `[i..j]`, the indexes here
//! report τ-majorities (symbols occurring at least `⌈τ·(j − i + 1)⌉` times),
//! a mode, or a τ-minority. They are built from succinct parts: rank/select
//! bitvectors, a wavelet-matrix [`Sequence`], range minima over the
//! previous-occurrence array, and adaptive predecessor and counting indexes.
//!
//! ```
//! use std::sync::Arc;
//! use rangefreq::{MinorityIndex, MinorityMode, Sequence, Threshold, VarMajIndex};
//!
//! let s = Arc::new(Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap());
//! let half = Threshold::new(1, 2).unwrap();
//!
//! let maj = VarMajIndex::new(s.clone());
//! assert_eq!(maj.query(1, 7, half).unwrap().symbols, vec![1]);
//! assert_eq!(maj.mode(1, 7).unwrap().count, 4);
//!
//! let min = MinorityIndex::new(s, MinorityMode::Full, None).unwrap();
//! assert_eq!(min.query(1, 7, half).unwrap().minority.unwrap().symbol, 2);
//! ```
//!
//! Positions are 1-based everywhere. Each query fills a [`QueryStats`] with
//! work counters, and [`oracle`] holds brute-force versions of every query.

pub mod bitvec;
pub mod error;
pub mod listing;
pub mod majority;
pub mod minority;
pub mod oracle;
pub mod persist;
pub mod predcount;
pub mod rmq;
pub mod seq;
pub mod stats;
pub mod threshold;

mod sorted_map;

pub use bitvec::BitVec;
pub use error::{Error, Result};
pub use listing::{DistinctItem, MarkSet};
pub use majority::{BlockMajIndex, FixedMajIndex, MajorityAnswer, ModeAnswer, SensitiveMajIndex, VarMajIndex};
pub use minority::{MinorityAnswer, MinorityIndex, MinorityMode};
pub use persist::IndexFile;
pub use predcount::{CountIndex, CountPolicy, PointSet, PredIndex, SymbolCounts};
pub use rmq::{BlockRmq, ImplicitRmq, RmqIndex, SparseRmqIndex};
pub use seq::{Sequence, SequenceStats};
pub use stats::QueryStats;
pub use threshold::Threshold;

/// The guide's code samples, compiled and run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/sequences.md")]
    mod sequences {}
    #[doc = include_str!("../../../book/src/listing.md")]
    mod listing {}
    #[doc = include_str!("../../../book/src/majority.md")]
    mod majority {}
    #[doc = include_str!("../../../book/src/mode-minority.md")]
    mod mode_minority {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/index-files.md")]
    mod index_files {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
