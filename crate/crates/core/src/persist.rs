//! Index files.
//!
//! Layout, all integers little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 8 | magic `RFQIDX\0\0` |
//! | 4 | format version (`1`) |
//! | 4 | section count `s` |
//! | 24·s | section table: kind `u32`, offset `u64`, length `u64`, CRC-32 `u32` |
//! | … | section payloads (bincode, fixed-width integers) |
//!
//! Offsets are from the start of the file. Files with another version are
//! rejected.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::majority::{BlockMajIndex, FixedMajIndex, SensitiveMajIndex, VarMajIndex};
use crate::minority::MinorityIndex;
use crate::predcount::SymbolCounts;
use crate::seq::{Sequence, SequenceStats};

pub const MAGIC: [u8; 8] = *b"RFQIDX\0\0";
pub const VERSION: u32 = 1;

const HEADER_LEN: usize = 16;
const ENTRY_LEN: usize = 24;

/// Section kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u32)]
pub enum SectionKind {
    Stats = 1,
    Sequence = 2,
    Fixed = 3,
    Var = 4,
    Block = 5,
    Minority = 6,
    Counts = 7,
}

impl SectionKind {
    pub const ALL: [SectionKind; 7] = [
        SectionKind::Stats,
        SectionKind::Sequence,
        SectionKind::Fixed,
        SectionKind::Var,
        SectionKind::Block,
        SectionKind::Minority,
        SectionKind::Counts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SectionKind::Stats => "stats",
            SectionKind::Sequence => "sequence",
            SectionKind::Fixed => "fixed",
            SectionKind::Var => "var",
            SectionKind::Block => "block",
            SectionKind::Minority => "minority",
            SectionKind::Counts => "counts",
        }
    }

    fn from_u32(x: u32) -> Option<Self> {
        Self::ALL.into_iter().find(|k| *k as u32 == x)
    }
}

/// One row of the section table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectionEntry {
    pub kind: SectionKind,
    pub offset: u64,
    pub length: u64,
    pub crc: u32,
}

/// A sequence with any subset of the indexes built over it.
///
/// ```
/// use std::sync::Arc;
/// use rangefreq::{persist::IndexFile, Sequence, Threshold, VarMajIndex};
/// let s = Arc::new(Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap());
/// let mut file = IndexFile::new(s.clone());
/// file.var = Some(VarMajIndex::new(s));
/// let bytes = file.to_bytes().unwrap();
/// let back = IndexFile::from_bytes(&bytes).unwrap();
/// let tau = Threshold::new(1, 2).unwrap();
/// assert_eq!(back.var.unwrap().query(1, 7, tau).unwrap().symbols, vec![1]);
/// ```
#[derive(Debug, Clone)]
pub struct IndexFile {
    pub seq: Arc<Sequence>,
    pub fixed: Option<FixedMajIndex>,
    pub var: Option<VarMajIndex>,
    pub block: Option<BlockMajIndex>,
    pub minority: Option<MinorityIndex>,
    pub counts: Option<SymbolCounts>,
}

fn encode<T: Serialize>(x: &T) -> Result<Vec<u8>> {
    bincode::serialize(x).map_err(|e| Error::Validation(format!("cannot encode section: {e}")))
}

fn decode<T: DeserializeOwned>(kind: SectionKind, bytes: &[u8]) -> Result<T> {
    bincode::deserialize(bytes).map_err(|e| Error::Corrupt(format!("{} section: {e}", kind.name())))
}

impl IndexFile {
    pub fn new(seq: Arc<Sequence>) -> Self {
        IndexFile {
            seq,
            fixed: None,
            var: None,
            block: None,
            minority: None,
            counts: None,
        }
    }

    pub fn stats(&self) -> &SequenceStats {
        self.seq.stats()
    }

    /// Early-exit majority over the stored variable-threshold index and
    /// counting indexes, when both are present.
    pub fn sensitive(&self) -> Option<SensitiveMajIndex> {
        let var = self.var.clone()?;
        let counts = self.counts.clone()?;
        SensitiveMajIndex::from_parts(var, counts).ok()
    }

    fn payloads(&self) -> Result<Vec<(SectionKind, Vec<u8>)>> {
        let mut out = vec![
            (SectionKind::Stats, encode(self.seq.stats())?),
            (SectionKind::Sequence, encode(&*self.seq)?),
        ];
        if let Some(x) = &self.fixed {
            out.push((SectionKind::Fixed, encode(x.body())?));
        }
        if let Some(x) = &self.var {
            out.push((SectionKind::Var, encode(x.body())?));
        }
        if let Some(x) = &self.block {
            out.push((SectionKind::Block, encode(x.body())?));
        }
        if let Some(x) = &self.minority {
            out.push((SectionKind::Minority, encode(x.body())?));
        }
        if let Some(x) = &self.counts {
            out.push((SectionKind::Counts, encode(x)?));
        }
        Ok(out)
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let payloads = self.payloads()?;
        let mut out = Vec::new();
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(payloads.len() as u32).to_le_bytes());
        let mut offset = (HEADER_LEN + ENTRY_LEN * payloads.len()) as u64;
        for (kind, data) in &payloads {
            out.extend_from_slice(&(*kind as u32).to_le_bytes());
            out.extend_from_slice(&offset.to_le_bytes());
            out.extend_from_slice(&(data.len() as u64).to_le_bytes());
            out.extend_from_slice(&crc32fast::hash(data).to_le_bytes());
            offset += data.len() as u64;
        }
        for (_, data) in &payloads {
            out.extend_from_slice(data);
        }
        Ok(out)
    }

    /// Parses and checks the header and section table.
    pub fn read_table(bytes: &[u8]) -> Result<Vec<SectionEntry>> {
        if bytes.len() < HEADER_LEN || bytes[..8] != MAGIC {
            return Err(Error::Corrupt("not an index file".into()));
        }
        let u32_at = |p: usize| u32::from_le_bytes(bytes[p..p + 4].try_into().unwrap());
        let u64_at = |p: usize| u64::from_le_bytes(bytes[p..p + 8].try_into().unwrap());
        let version = u32_at(8);
        if version != VERSION {
            return Err(Error::Corrupt(format!("unsupported format version {version}")));
        }
        let count = u32_at(12) as usize;
        if count > SectionKind::ALL.len() || bytes.len() < HEADER_LEN + ENTRY_LEN * count {
            return Err(Error::Corrupt("truncated section table".into()));
        }
        let mut table = Vec::with_capacity(count);
        for e in 0..count {
            let p = HEADER_LEN + ENTRY_LEN * e;
            let kind = SectionKind::from_u32(u32_at(p))
                .ok_or_else(|| Error::Corrupt(format!("unknown section kind {}", u32_at(p))))?;
            if table.iter().any(|x: &SectionEntry| x.kind == kind) {
                return Err(Error::Corrupt(format!("duplicate {} section", kind.name())));
            }
            let entry = SectionEntry {
                kind,
                offset: u64_at(p + 4),
                length: u64_at(p + 12),
                crc: u32_at(p + 20),
            };
            let end = entry.offset.checked_add(entry.length);
            if entry.offset < (HEADER_LEN + ENTRY_LEN * count) as u64 || end.map_or(true, |e| e > bytes.len() as u64) {
                return Err(Error::Corrupt(format!("{} section out of bounds", kind.name())));
            }
            table.push(entry);
        }
        Ok(table)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let table = Self::read_table(bytes)?;
        let section = |kind: SectionKind| -> Result<Option<&[u8]>> {
            let Some(e) = table.iter().find(|e| e.kind == kind) else {
                return Ok(None);
            };
            let data = &bytes[e.offset as usize..(e.offset + e.length) as usize];
            if crc32fast::hash(data) != e.crc {
                return Err(Error::Corrupt(format!("checksum mismatch in {} section", kind.name())));
            }
            Ok(Some(data))
        };
        let seq_bytes =
            section(SectionKind::Sequence)?.ok_or_else(|| Error::Corrupt("missing sequence section".into()))?;
        let seq: Sequence = decode(SectionKind::Sequence, seq_bytes)?;
        if let Some(data) = section(SectionKind::Stats)? {
            let stats: SequenceStats = decode(SectionKind::Stats, data)?;
            if stats.counts != seq.stats().counts {
                return Err(Error::Corrupt("stats section does not match the sequence".into()));
            }
        }
        let seq = Arc::new(seq);
        let mut file = IndexFile::new(seq.clone());
        if let Some(data) = section(SectionKind::Fixed)? {
            file.fixed = Some(FixedMajIndex::from_parts(
                seq.clone(),
                decode(SectionKind::Fixed, data)?,
            )?);
        }
        if let Some(data) = section(SectionKind::Var)? {
            file.var = Some(VarMajIndex::from_parts(seq.clone(), decode(SectionKind::Var, data)?)?);
        }
        if let Some(data) = section(SectionKind::Block)? {
            file.block = Some(BlockMajIndex::from_parts(
                seq.clone(),
                decode(SectionKind::Block, data)?,
            )?);
        }
        if let Some(data) = section(SectionKind::Minority)? {
            file.minority = Some(MinorityIndex::from_parts(
                seq.clone(),
                decode(SectionKind::Minority, data)?,
            )?);
        }
        if let Some(data) = section(SectionKind::Counts)? {
            let counts: SymbolCounts = decode(SectionKind::Counts, data)?;
            counts.validate(&seq)?;
            file.counts = Some(counts);
        }
        Ok(file)
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(&self.to_bytes()?)?;
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_bytes()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}
