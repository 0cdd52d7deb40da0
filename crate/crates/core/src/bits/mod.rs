//! Bitvectors and the sequence primitives built on them.
//!
//! - [`BitVector`]: rank/select bitvector.
//! - [`ChunkCounts`]: per-symbol unary chunk counts (`M_a`), giving the
//!   number of occurrences of a symbol before any chunk boundary.
//! - [`AlphabetStats`]: cumulative symbol counts (`Acc`).
//! - [`SmallAlphabetSeq`]: wavelet matrix for small alphabets.
//! - [`GeneralSeq`]: constant-time access and select, rank by search.

mod bitvec;
mod general;
mod wavelet;

pub use bitvec::{BitVector, BitVectorBuilder};
pub use general::GeneralSeq;
pub use wavelet::SmallAlphabetSeq;

use crate::Symbol;

/// Cumulative counts: `acc(a)` is the number of symbols smaller than `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphabetStats {
    acc: Vec<usize>,
}

impl AlphabetStats {
    pub fn from_seq(seq: &[Symbol], sigma: usize) -> Self {
        let mut acc = vec![0usize; sigma + 1];
        for &s in seq {
            acc[s as usize + 1] += 1;
        }
        for a in 1..=sigma {
            acc[a] += acc[a - 1];
        }
        Self { acc }
    }

    /// From per-symbol counts.
    pub fn from_counts(counts: &[usize]) -> Self {
        let mut acc = Vec::with_capacity(counts.len() + 1);
        acc.push(0);
        for &c in counts {
            acc.push(acc.last().unwrap() + c);
        }
        Self { acc }
    }

    pub fn sigma(&self) -> usize {
        self.acc.len() - 1
    }

    #[inline]
    pub fn acc(&self, a: Symbol) -> usize {
        self.acc[a as usize]
    }

    #[inline]
    pub fn count(&self, a: Symbol) -> usize {
        self.acc[a as usize + 1] - self.acc[a as usize]
    }

    pub fn total(&self) -> usize {
        *self.acc.last().unwrap()
    }

    /// Adds `k` occurrences of `a`.
    pub fn add(&mut self, a: Symbol, k: usize) {
        for x in &mut self.acc[a as usize + 1..] {
            *x += k;
        }
    }

    /// First symbol of sorted row `r`, i.e. the `a` with `acc(a) <= r < acc(a + 1)`.
    pub fn symbol_of_row(&self, r: usize) -> Symbol {
        (self.acc.partition_point(|&x| x <= r) - 1) as Symbol
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.acc
    }
}

/// Per-symbol chunk counts.
///
/// The sequence is cut into chunks of `width` symbols. For every symbol `a`
/// the unary vector `M_a` is `1^{d_0} 0 1^{d_1} 0 ...` where `d_j` counts
/// `a` in chunk `j`; each chunk contributes exactly one `0`. All `M_a` are
/// concatenated into one [`BitVector`].
#[derive(Clone, Debug)]
pub struct ChunkCounts {
    width: usize,
    chunks: usize,
    /// Occurrences of symbols smaller than `a`.
    acc: Vec<usize>,
    bits: BitVector,
}

impl ChunkCounts {
    /// Counts over `seq` with chunks of `width` symbols.
    pub fn build(seq: &[Symbol], sigma: usize, width: usize) -> Self {
        assert!(width > 0);
        let chunks = seq.len().div_ceil(width).max(1);
        let stats = AlphabetStats::from_seq(seq, sigma);
        // Positions grouped by symbol, increasing within a symbol.
        let mut next: Vec<usize> = stats.acc[..sigma].to_vec();
        let mut pos = vec![0u32; seq.len()];
        for (i, &s) in seq.iter().enumerate() {
            pos[next[s as usize]] = i as u32;
            next[s as usize] += 1;
        }
        let mut b = BitVectorBuilder::with_capacity(seq.len() + sigma * chunks);
        for a in 0..sigma {
            let mut chunk = 0;
            for &p in &pos[stats.acc[a]..stats.acc[a + 1]] {
                let c = p as usize / width;
                while chunk < c {
                    b.push(false);
                    chunk += 1;
                }
                b.push(true);
            }
            b.push_run(false, chunks - chunk);
        }
        Self { width, chunks, acc: stats.acc, bits: b.finish() }
    }

    /// From `(symbol, chunk, count)` triples sorted by symbol then chunk,
    /// with no repeated `(symbol, chunk)`.
    pub fn from_triples(sigma: usize, width: usize, chunks: usize, triples: &[(Symbol, u32, u32)]) -> Self {
        let chunks = chunks.max(1);
        let mut counts = vec![0usize; sigma];
        for &(a, _, c) in triples {
            counts[a as usize] += c as usize;
        }
        let stats = AlphabetStats::from_counts(&counts);
        let mut b = BitVectorBuilder::with_capacity(stats.total() + sigma * chunks);
        let mut t = 0;
        for a in 0..sigma as Symbol {
            let mut chunk = 0usize;
            while t < triples.len() && triples[t].0 == a {
                let (_, c, k) = triples[t];
                b.push_run(false, c as usize - chunk);
                b.push_run(true, k as usize);
                chunk = c as usize;
                t += 1;
            }
            b.push_run(false, chunks - chunk);
        }
        Self { width, chunks, acc: stats.acc, bits: b.finish() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn chunks(&self) -> usize {
        self.chunks
    }

    /// Occurrences of `a` in chunks `0..j`.
    #[inline]
    pub fn chunk_prefix_count(&self, a: Symbol, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        debug_assert!(j <= self.chunks);
        let a = a as usize;
        let start = self.acc[a] + a * self.chunks;
        let p = self.bits.select0(a * self.chunks + j).unwrap();
        p - start - (j - 1)
    }

    /// Occurrences of `a` in chunk `j`.
    pub fn chunk_count(&self, a: Symbol, j: usize) -> usize {
        self.chunk_prefix_count(a, j + 1) - self.chunk_prefix_count(a, j)
    }

    pub fn size_bits(&self) -> usize {
        self.bits.len()
    }

    pub fn size_bytes(&self) -> usize {
        self.bits.size_bytes() + 8 * self.acc.len()
    }
}
