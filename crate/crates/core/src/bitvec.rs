//! Plain bitvector with constant-time rank and fast select.
//!
//! Rank uses the two-level "rank9" directory: one 64-bit cumulative count per
//! 512-bit block plus seven 9-bit in-block counts packed into a second word
//! (25% overhead). Select keeps the block index of every 1024th one and every
//! 1024th zero and binary-searches the rank directory between samples.
//!
//! Positions are 1-based: `get(1)` is the first bit, `rank1(k)` counts ones in
//! the first `k` bits, and `select1(r)` returns the position of the `r`-th one.

use serde::de::{self, Deserializer};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;
const BLOCK_WORDS: usize = 8;
const BLOCK_BITS: usize = WORD * BLOCK_WORDS;
const SELECT_SAMPLE: usize = 1024;

/// Serialized layout version of [`BitVec`].
pub const BITVEC_FORMAT: u8 = 1;

/// Immutable bitvector answering rank and select queries.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BitVec {
    len: usize,
    ones: usize,
    words: Vec<u64>,
    /// Two entries per block: cumulative ones before the block, then the
    /// packed 9-bit counts of ones before words 1..8 of the block.
    ranks: Vec<u64>,
    select1_hints: Vec<u64>,
    select0_hints: Vec<u64>,
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BitVec")
            .field("len", &self.len)
            .field("ones", &self.ones)
            .finish()
    }
}

/// Incremental construction of a [`BitVec`].
#[derive(Debug, Default, Clone)]
pub struct BitVecBuilder {
    len: usize,
    words: Vec<u64>,
}

impl BitVecBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitVecBuilder {
            len: 0,
            words: Vec::with_capacity(bits.div_ceil(WORD)),
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % WORD == 0 {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1 << (self.len % WORD);
        }
        self.len += 1;
    }

    /// Appends `count` copies of `bit`.
    pub fn push_run(&mut self, bit: bool, count: usize) {
        for _ in 0..count {
            self.push(bit);
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn build(self) -> BitVec {
        BitVec::from_words(self.words, self.len)
    }
}

impl FromIterator<bool> for BitVec {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut b = BitVecBuilder::new();
        for bit in iter {
            b.push(bit);
        }
        b.build()
    }
}

impl BitVec {
    /// Builds from a slice of 0/1 values.
    pub fn from_bits(bits: &[u8]) -> Self {
        bits.iter().map(|&b| b != 0).collect()
    }

    fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.truncate(len.div_ceil(WORD));
        words.resize(len.div_ceil(WORD), 0);
        if len % WORD != 0 {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % WORD)) - 1;
        }
        let mut bv = BitVec {
            len,
            ones: 0,
            words,
            ranks: Vec::new(),
            select1_hints: Vec::new(),
            select0_hints: Vec::new(),
        };
        bv.build_directories();
        bv
    }

    fn build_directories(&mut self) {
        let blocks = self.words.len().div_ceil(BLOCK_WORDS);
        let mut ranks = Vec::with_capacity(2 * blocks);
        let mut total = 0u64;
        for block in self.words.chunks(BLOCK_WORDS) {
            ranks.push(total);
            let mut packed = 0u64;
            let mut rel = 0u64;
            for (k, w) in block.iter().enumerate() {
                if k > 0 {
                    packed |= rel << (9 * (k - 1));
                }
                rel += w.count_ones() as u64;
            }
            for k in block.len()..BLOCK_WORDS {
                if k > 0 {
                    packed |= rel << (9 * (k - 1));
                }
            }
            ranks.push(packed);
            total += rel;
        }
        self.ranks = ranks;
        self.ones = total as usize;

        let mut s1 = Vec::new();
        let mut s0 = Vec::new();
        let (mut next1, mut next0) = (0usize, 0usize);
        for b in 0..blocks {
            let ones_end = if b + 1 < blocks {
                self.ranks[2 * (b + 1)] as usize
            } else {
                self.ones
            };
            let bits_end = ((b + 1) * BLOCK_BITS).min(self.len);
            let zeros_end = bits_end - ones_end;
            while next1 < ones_end {
                s1.push(b as u64);
                next1 += SELECT_SAMPLE;
            }
            while next0 < zeros_end {
                s0.push(b as u64);
                next0 += SELECT_SAMPLE;
            }
        }
        self.select1_hints = s1;
        self.select0_hints = s0;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    /// Bits used by the rank and select directories.
    pub fn directory_bits(&self) -> usize {
        64 * (self.ranks.len() + self.select1_hints.len() + self.select0_hints.len())
    }

    /// Total heap bits (payload plus directories).
    pub fn size_bits(&self) -> usize {
        64 * self.words.len() + self.directory_bits()
    }

    /// Bit at 1-based position `k`.
    pub fn get(&self, k: usize) -> Result<bool> {
        if k == 0 || k > self.len {
            return Err(Error::OutOfBounds { pos: k, len: self.len });
        }
        Ok(self.get_unchecked(k))
    }

    #[inline]
    pub fn get_unchecked(&self, k: usize) -> bool {
        let p = k - 1;
        (self.words[p / WORD] >> (p % WORD)) & 1 == 1
    }

    /// Number of ones among the first `k` bits.
    pub fn rank1(&self, k: usize) -> Result<usize> {
        if k > self.len {
            return Err(Error::OutOfBounds { pos: k, len: self.len });
        }
        Ok(self.rank1_unchecked(k))
    }

    pub fn rank0(&self, k: usize) -> Result<usize> {
        Ok(k - self.rank1(k)?)
    }

    #[inline]
    pub fn rank1_unchecked(&self, k: usize) -> usize {
        if k >= self.len {
            return self.ones;
        }
        let w = k / WORD;
        let block = w / BLOCK_WORDS;
        let sub = w % BLOCK_WORDS;
        let mut r = self.ranks[2 * block];
        if sub > 0 {
            r += (self.ranks[2 * block + 1] >> (9 * (sub - 1))) & 0x1FF;
        }
        let bits = k % WORD;
        if bits > 0 {
            r += (self.words[w] & ((1u64 << bits) - 1)).count_ones() as u64;
        }
        r as usize
    }

    #[inline]
    pub fn rank0_unchecked(&self, k: usize) -> usize {
        k.min(self.len) - self.rank1_unchecked(k)
    }

    /// Position of the `r`-th one (`r >= 1`).
    pub fn select1(&self, r: usize) -> Result<usize> {
        if r == 0 || r > self.ones {
            return Err(Error::NotFound(format!("one #{r} (bitvector has {} ones)", self.ones)));
        }
        Ok(self.select1_unchecked(r))
    }

    /// Position of the `r`-th zero (`r >= 1`).
    pub fn select0(&self, r: usize) -> Result<usize> {
        if r == 0 || r > self.count_zeros() {
            return Err(Error::NotFound(format!(
                "zero #{r} (bitvector has {} zeros)",
                self.count_zeros()
            )));
        }
        Ok(self.select0_unchecked(r))
    }

    pub fn select1_unchecked(&self, r: usize) -> usize {
        self.select_impl::<true>(r - 1)
    }

    pub fn select0_unchecked(&self, r: usize) -> usize {
        self.select_impl::<false>(r - 1)
    }

    #[inline]
    fn block_count<const ONE: bool>(&self, block: usize) -> usize {
        let ones = self.ranks[2 * block] as usize;
        if ONE {
            ones
        } else {
            block * BLOCK_BITS - ones
        }
    }

    /// `before` is the number of matching bits that precede the answer.
    fn select_impl<const ONE: bool>(&self, before: usize) -> usize {
        let hints = if ONE { &self.select1_hints } else { &self.select0_hints };
        let s = before / SELECT_SAMPLE;
        let blocks = self.ranks.len() / 2;
        let mut lo = hints[s] as usize;
        let mut hi = if s + 1 < hints.len() {
            hints[s + 1] as usize
        } else {
            blocks - 1
        };
        // Last block in [lo, hi] whose prefix count is <= before.
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.block_count::<ONE>(mid) <= before {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let block = lo;
        let mut rem = before - self.block_count::<ONE>(block);
        let packed = self.ranks[2 * block + 1];
        let mut sub = 0;
        for k in 1..BLOCK_WORDS {
            let ones_before = ((packed >> (9 * (k - 1))) & 0x1FF) as usize;
            let c = if ONE { ones_before } else { k * WORD - ones_before };
            if c <= rem {
                sub = k;
            } else {
                break;
            }
        }
        if sub > 0 {
            let ones_before = ((packed >> (9 * (sub - 1))) & 0x1FF) as usize;
            rem -= if ONE { ones_before } else { sub * WORD - ones_before };
        }
        let w = block * BLOCK_WORDS + sub;
        let word = if ONE { self.words[w] } else { !self.words[w] };
        w * WORD + select_in_word(word, rem) + 1
    }

    /// Iterates over the bits in order.
    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(move |k| self.get_unchecked(k))
    }

    /// Positions of the ones, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz + 1)
            })
        })
    }
}

/// Offset of the `rem`-th (0-based) set bit of `word`.
#[inline]
fn select_in_word(mut word: u64, rem: usize) -> usize {
    for _ in 0..rem {
        word &= word - 1;
    }
    word.trailing_zeros() as usize
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(3)?;
        t.serialize_element(&BITVEC_FORMAT)?;
        t.serialize_element(&(self.len as u64))?;
        t.serialize_element(&self.words)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let (version, len, words): (u8, u64, Vec<u64>) = Deserialize::deserialize(deserializer)?;
        if version != BITVEC_FORMAT {
            return Err(de::Error::custom(format!("unsupported bitvector format {version}")));
        }
        let len = len as usize;
        if words.len() != len.div_ceil(WORD) {
            return Err(de::Error::custom("bitvector length does not match payload"));
        }
        Ok(BitVec::from_words(words, len))
    }
}
