//! Range-minimum queries returning the leftmost minimum.
//!
//! [`BlockRmq`] is the shared engine. Positions are cut into blocks of 32; each
//! position keeps a 32-bit mask of the left-to-right minima stack of its block
//! prefix, and a sparse table covers the block minima. A query reads at most
//! two values through a caller-supplied closure, so the array itself may be
//! implicit (computed on demand) or stored elsewhere.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::seq::Sequence;

const B: usize = 32;

/// Leftmost-minimum index over an array it does not own.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRmq {
    len: usize,
    masks: Vec<u32>,
    block_min: Vec<u64>,
    /// `table[k - 1][b]` is the block of the leftmost minimum among blocks
    /// `b .. b + 2^k`.
    table: Vec<Vec<u32>>,
}

impl BlockRmq {
    /// Builds over `values[0..n]`; queries later use 1-based positions.
    pub fn new(values: &[u64]) -> Self {
        Self::from_fn(values.len(), |p| values[p - 1])
    }

    /// Builds over `n` values produced by `val(1..=n)`. Each value is read
    /// once.
    pub fn from_fn(n: usize, mut val: impl FnMut(usize) -> u64) -> Self {
        let mut masks = Vec::with_capacity(n);
        let mut block_min = Vec::with_capacity(n.div_ceil(B));
        let mut stack: Vec<(usize, u64)> = Vec::with_capacity(B);
        let mut mask = 0u32;
        for p in 0..n {
            let off = p % B;
            if off == 0 {
                stack.clear();
                mask = 0;
            }
            let v = val(p + 1);
            while let Some(&(q, w)) = stack.last() {
                if w > v {
                    stack.pop();
                    mask &= !(1 << q);
                } else {
                    break;
                }
            }
            stack.push((off, v));
            mask |= 1 << off;
            masks.push(mask);
            if off == B - 1 || p + 1 == n {
                block_min.push(stack[0].1);
            }
        }
        let table = build_table(&block_min);
        BlockRmq {
            len: n,
            masks,
            block_min,
            table,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn size_bits(&self) -> usize {
        32 * self.masks.len() + 64 * self.block_min.len() + 32 * self.table.iter().map(Vec::len).sum::<usize>()
    }

    /// Leftmost minimum within one block; `i0 <= j0` are 0-based.
    #[inline]
    fn in_block(&self, i0: usize, j0: usize) -> usize {
        let start = i0 - i0 % B;
        let m = self.masks[j0] & (u32::MAX << (i0 - start));
        start + m.trailing_zeros() as usize
    }

    #[inline]
    fn best_block(&self, l: usize, r: usize) -> usize {
        let k = (r - l + 1).ilog2() as usize;
        if k == 0 {
            return l;
        }
        let row = &self.table[k - 1];
        let a = row[l] as usize;
        let b = row[r + 1 - (1 << k)] as usize;
        if self.block_min[b] < self.block_min[a] {
            b
        } else {
            a
        }
    }

    /// Leftmost argmin of `[i..j]` (1-based, unchecked) and its value.
    /// `val` is called at most twice.
    pub fn argmin_with_value(&self, i: usize, j: usize, mut val: impl FnMut(usize) -> u64) -> (usize, u64) {
        let (i0, j0) = (i - 1, j - 1);
        let (bi, bj) = (i0 / B, j0 / B);
        if bi == bj {
            let p = self.in_block(i0, j0) + 1;
            return (p, val(p));
        }
        let left_end = bi * B + B - 1;
        let pl = self.in_block(i0, left_end) + 1;
        let mut best = (pl, val(pl));
        if bi + 1 < bj {
            let mb = self.best_block(bi + 1, bj - 1);
            let mv = self.block_min[mb];
            if mv < best.1 {
                let p = self.in_block(mb * B, (mb * B + B - 1).min(self.len - 1)) + 1;
                best = (p, mv);
            }
        }
        let pr = self.in_block(bj * B, j0) + 1;
        if best.1 > 0 {
            let vr = val(pr);
            if vr < best.1 {
                best = (pr, vr);
            }
        }
        best
    }

    /// Leftmost argmin of `[i..j]` (1-based, unchecked).
    pub fn argmin(&self, i: usize, j: usize, val: impl FnMut(usize) -> u64) -> usize {
        self.argmin_with_value(i, j, val).0
    }
}

fn build_table(mins: &[u64]) -> Vec<Vec<u32>> {
    let nb = mins.len();
    let mut table: Vec<Vec<u32>> = Vec::new();
    let mut k = 1;
    while (1usize << k) <= nb {
        let half = 1 << (k - 1);
        let prev = |b: usize, t: &Vec<Vec<u32>>| -> u32 {
            if k == 1 {
                b as u32
            } else {
                t[k - 2][b]
            }
        };
        let row: Vec<u32> = (0..=nb - (1 << k))
            .map(|b| {
                let a = prev(b, &table);
                let c = prev(b + half, &table);
                if mins[c as usize] < mins[a as usize] {
                    c
                } else {
                    a
                }
            })
            .collect();
        table.push(row);
        k += 1;
    }
    table
}

/// Leftmost-minimum index that owns its values.
///
/// ```
/// use rangefreq::RmqIndex;
/// let rmq = RmqIndex::new(&[0, 0, 1, 0, 3, 2, 5]);
/// assert_eq!(rmq.query(2, 6).unwrap(), 2);
/// assert_eq!(rmq.query(3, 6).unwrap(), 4);
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RmqIndex {
    values: Vec<u64>,
    rmq: BlockRmq,
}

impl RmqIndex {
    pub fn new(values: &[u64]) -> Self {
        RmqIndex {
            values: values.to_vec(),
            rmq: BlockRmq::new(values),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at 1-based position `p`.
    pub fn value(&self, p: usize) -> u64 {
        self.values[p - 1]
    }

    pub fn size_bits(&self) -> usize {
        64 * self.values.len() + self.rmq.size_bits()
    }

    /// Leftmost position of the minimum in `[i..j]`.
    pub fn query(&self, i: usize, j: usize) -> Result<usize> {
        check_range(i, j, self.len())?;
        Ok(self.query_unchecked(i, j))
    }

    pub fn query_unchecked(&self, i: usize, j: usize) -> usize {
        self.rmq.argmin(i, j, |p| self.values[p - 1])
    }
}

/// Leftmost-minimum index over the previous-occurrence array `C` of a
/// sequence. `C` is materialized only while building; queries recompute the
/// (at most two) values they need from the sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicitRmq {
    rmq: BlockRmq,
}

impl ImplicitRmq {
    pub fn new(seq: &Sequence) -> Self {
        let c = seq.prev_array();
        ImplicitRmq {
            rmq: BlockRmq::from_fn(c.len(), |p| c[p - 1] as u64),
        }
    }

    pub fn len(&self) -> usize {
        self.rmq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rmq.is_empty()
    }

    pub fn size_bits(&self) -> usize {
        self.rmq.size_bits()
    }

    /// Leftmost argmin of `C[i..j]`; `seq` must be the sequence it was
    /// built from.
    pub fn query(&self, seq: &Sequence, i: usize, j: usize) -> Result<usize> {
        check_range(i, j, self.len())?;
        Ok(self.argmin_with_value(seq, i, j).0)
    }

    /// `(p, C[p])` for the leftmost argmin `p` of `C[i..j]` (unchecked).
    pub fn argmin_with_value(&self, seq: &Sequence, i: usize, j: usize) -> (usize, usize) {
        let (p, v) = self
            .rmq
            .argmin_with_value(i, j, |p| seq.prev_occurrence_unchecked(p) as u64);
        (p, v as usize)
    }

    /// `(p, C[p], S[p])` for the leftmost argmin `p` of `C[i..j]`
    /// (unchecked). Reuses the symbol decoded while computing `C[p]`.
    pub fn argmin_with_symbol(&self, seq: &Sequence, i: usize, j: usize) -> (usize, usize, usize) {
        let mut seen = [(0usize, 0usize); 2];
        let mut evals = 0;
        let (p, v) = self.rmq.argmin_with_value(i, j, |q| {
            let (a, r) = seq.access_and_partial_rank(q);
            if evals < 2 {
                seen[evals] = (q, a);
                evals += 1;
            }
            if r == 1 {
                0
            } else {
                seq.select_unchecked(a, r - 1) as u64
            }
        });
        let a = seen[..evals]
            .iter()
            .find(|s| s.0 == p)
            .map_or_else(|| seq.access_unchecked(p), |s| s.1);
        (p, v as usize, a)
    }
}

/// Range minima over the blocks of `C`: `C'[b]` is the minimum of `C` over
/// block `b` (length `f`, the last block possibly shorter).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseRmqIndex {
    block_len: usize,
    len: usize,
    /// 1-based position in `C` of each block's leftmost minimum.
    min_pos: Vec<u64>,
    inner: RmqIndex,
}

impl SparseRmqIndex {
    pub fn new(seq: &Sequence, f: usize) -> Result<Self> {
        if f == 0 {
            return Err(Error::Validation("block length must be at least 1".into()));
        }
        let c = seq.prev_array();
        Ok(Self::from_links(&c, f))
    }

    pub(crate) fn from_links(c: &[usize], f: usize) -> Self {
        let mut mins = Vec::with_capacity(c.len().div_ceil(f));
        let mut min_pos = Vec::with_capacity(c.len().div_ceil(f));
        for (b, block) in c.chunks(f).enumerate() {
            let (off, &v) = block.iter().enumerate().min_by_key(|&(off, &v)| (v, off)).unwrap();
            mins.push(v as u64);
            min_pos.push((b * f + off + 1) as u64);
        }
        SparseRmqIndex {
            block_len: f,
            len: c.len(),
            min_pos,
            inner: RmqIndex::new(&mins),
        }
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn num_blocks(&self) -> usize {
        self.min_pos.len()
    }

    /// `C'[b]` for a 1-based block number.
    pub fn block_min(&self, b: usize) -> u64 {
        self.inner.value(b)
    }

    /// Position in `C` of block `b`'s leftmost minimum.
    pub fn block_min_pos(&self, b: usize) -> usize {
        self.min_pos[b - 1] as usize
    }

    /// Positions `[start, end]` of block `b` in `C`.
    pub fn block_span(&self, b: usize) -> (usize, usize) {
        let start = (b - 1) * self.block_len + 1;
        (start, (start + self.block_len - 1).min(self.len))
    }

    /// Block with the leftmost minimal `C'` among blocks `[l..r]`.
    pub fn query_blocks(&self, l: usize, r: usize) -> Result<usize> {
        self.inner.query(l, r)
    }

    pub(crate) fn query_blocks_unchecked(&self, l: usize, r: usize) -> usize {
        self.inner.query_unchecked(l, r)
    }

    pub fn size_bits(&self) -> usize {
        64 * self.min_pos.len() + self.inner.size_bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(v: &[u64], i: usize, j: usize) -> usize {
        let mut best = i;
        for p in i..=j {
            if v[p - 1] < v[best - 1] {
                best = p;
            }
        }
        best
    }

    #[test]
    fn examples() {
        let rmq = RmqIndex::new(&[0, 0, 1, 0, 3, 2, 5]);
        assert_eq!(rmq.query(2, 6).unwrap(), 2);
        assert_eq!(rmq.query(3, 6).unwrap(), 4);
        assert_eq!(rmq.query(5, 5).unwrap(), 5);
        assert_eq!(rmq.query(1, 7).unwrap(), 1);
        for k in 1..=7 {
            assert_eq!(rmq.query(k, k).unwrap(), k);
        }
        assert_eq!(RmqIndex::new(&[3, 1, 1]).query(1, 3).unwrap(), 2);
        assert!(rmq.query(0, 3).is_err());
        assert!(rmq.query(4, 3).is_err());
        assert!(rmq.query(1, 8).is_err());
    }

    #[test]
    fn random_arrays_match_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let n = rng.gen_range(1..=4000);
            let hi = rng.gen_range(1..=n as u64 * 2);
            let v: Vec<u64> = (0..n).map(|_| rng.gen_range(0..hi)).collect();
            let rmq = RmqIndex::new(&v);
            for _ in 0..200 {
                let i = rng.gen_range(1..=n);
                let j = rng.gen_range(i..=n);
                assert_eq!(rmq.query(i, j).unwrap(), naive(&v, i, j));
            }
        }
    }

    #[test]
    fn ties_are_leftmost() {
        let v = vec![7u64; 300];
        let rmq = RmqIndex::new(&v);
        for i in 1..=300 {
            for j in (i..=300).step_by(17) {
                assert_eq!(rmq.query(i, j).unwrap(), i);
            }
        }
    }

    #[test]
    fn reads_at_most_two_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let v: Vec<u64> = (0..1000).map(|_| rng.gen_range(0..50)).collect();
        let rmq = BlockRmq::new(&v);
        for _ in 0..1000 {
            let i = rng.gen_range(1..=1000);
            let j = rng.gen_range(i..=1000);
            let mut calls = 0;
            let (p, val) = rmq.argmin_with_value(i, j, |p| {
                calls += 1;
                v[p - 1]
            });
            assert!(calls <= 2);
            assert_eq!(p, naive(&v, i, j));
            assert_eq!(val, v[p - 1]);
        }
    }

    #[test]
    fn implicit_matches_explicit() {
        let s = Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap();
        let imp = ImplicitRmq::new(&s);
        let exp = RmqIndex::new(&[0, 0, 1, 0, 3, 2, 5]);
        for i in 1..=7 {
            for j in i..=7 {
                assert_eq!(imp.query(&s, i, j).unwrap(), exp.query(i, j).unwrap());
            }
        }
    }

    #[test]
    fn sparse_block_minima() {
        let s = Sequence::new(&[1, 2, 1, 3, 1, 2, 1], 3).unwrap();
        let sp = SparseRmqIndex::new(&s, 3).unwrap();
        assert_eq!(sp.num_blocks(), 3);
        let mins: Vec<u64> = (1..=3).map(|b| sp.block_min(b)).collect();
        assert_eq!(mins, vec![0, 0, 5]);
        assert_eq!(sp.block_span(3), (7, 7));
        let one = SparseRmqIndex::new(&s, 1).unwrap();
        assert_eq!(one.num_blocks(), 7);
        assert_eq!(SparseRmqIndex::new(&s, 7).unwrap().num_blocks(), 1);
        assert!(SparseRmqIndex::new(&s, 0).is_err());
    }

    #[test]
    fn sparse_minima_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let n = rng.gen_range(1..=3000);
            let sym: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=20)).collect();
            let s = Sequence::new(&sym, 20).unwrap();
            let c = s.prev_array();
            let f = rng.gen_range(1..=40);
            let sp = SparseRmqIndex::new(&s, f).unwrap();
            for b in 1..=sp.num_blocks() {
                let (lo, hi) = sp.block_span(b);
                let m = c[lo - 1..hi].iter().min().unwrap();
                assert_eq!(sp.block_min(b), *m as u64);
                assert_eq!(c[sp.block_min_pos(b) - 1], *m);
            }
        }
    }
}
