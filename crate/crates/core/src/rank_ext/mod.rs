//! Rank extensions over a static sequence: partial rank, uniform-range
//! tests, distinct symbols of a range, and ranks inside short intervals.
//!
//! [`RankedSeq`] bundles them with access/select and cumulative counts,
//! which is what a BWT needs for LF and Psi steps.

mod distinct;
mod local;
mod partial;

use std::sync::Arc;

pub use distinct::{DistinctEntry, RangeDistinctIndex};
pub use local::{LocalOccurrences, SmallIntervalRankIndex};
pub use partial::PartialRankIndex;

use crate::bits::{AlphabetStats, GeneralSeq};
use crate::Symbol;

/// A sequence with access, select, general rank, partial rank and range
/// distinct queries.
#[derive(Clone, Debug)]
pub struct RankedSeq {
    general: GeneralSeq,
    stats: AlphabetStats,
    partial: PartialRankIndex,
    distinct: RangeDistinctIndex,
}

impl RankedSeq {
    pub fn new(seq: Arc<[Symbol]>, sigma: usize) -> Self {
        let stats = AlphabetStats::from_seq(&seq, sigma);
        Self {
            general: GeneralSeq::new(seq.clone(), sigma),
            partial: PartialRankIndex::new(seq.clone(), sigma),
            distinct: RangeDistinctIndex::new(seq, sigma),
            stats,
        }
    }

    pub fn len(&self) -> usize {
        self.general.len()
    }

    pub fn is_empty(&self) -> bool {
        self.general.is_empty()
    }

    pub fn sigma(&self) -> usize {
        self.stats.sigma()
    }

    pub fn as_slice(&self) -> &[Symbol] {
        self.general.as_slice()
    }

    pub fn symbols(&self) -> &Arc<[Symbol]> {
        self.general.symbols()
    }

    pub fn general(&self) -> &GeneralSeq {
        &self.general
    }

    pub fn stats(&self) -> &AlphabetStats {
        &self.stats
    }

    pub fn partial(&self) -> &PartialRankIndex {
        &self.partial
    }

    #[inline]
    pub fn access(&self, i: usize) -> Symbol {
        self.general.access(i)
    }

    #[inline]
    pub fn acc(&self, a: Symbol) -> usize {
        self.stats.acc(a)
    }

    #[inline]
    pub fn partial_rank(&self, i: usize) -> usize {
        self.partial.partial_rank(i)
    }

    /// General inclusive rank (binary search; the slow path).
    #[inline]
    pub fn rank(&self, a: Symbol, i: usize) -> usize {
        self.general.rank(a, i)
    }

    /// Occurrences of `a` in `[0, end)`.
    #[inline]
    pub fn rank_before(&self, a: Symbol, end: usize) -> usize {
        self.general.rank_before(a, end)
    }

    #[inline]
    pub fn select(&self, a: Symbol, k: usize) -> Option<usize> {
        self.general.select(a, k)
    }

    #[inline]
    pub fn is_uniform(&self, i: usize, j: usize) -> bool {
        self.partial.is_uniform(i, j)
    }

    /// Row reached by one LF step: `acc(B[r]) + partial_rank(r) - 1`.
    #[inline]
    pub fn lf(&self, r: usize) -> usize {
        self.stats.acc(self.access(r)) + self.partial_rank(r) - 1
    }

    /// Inverse of [`lf`](Self::lf).
    #[inline]
    pub fn psi(&self, r: usize) -> usize {
        let c = self.stats.symbol_of_row(r);
        self.select(c, r - self.stats.acc(c) + 1).unwrap()
    }

    /// Distinct symbols of `S[i..=j]` appended to `out`; returns probes.
    pub fn range_distinct(&self, i: usize, j: usize, out: &mut Vec<DistinctEntry>) -> usize {
        self.distinct.range_distinct(&self.partial, i, j, out)
    }

    pub fn size_bytes(&self) -> usize {
        self.general.size_bytes() + self.partial.size_bytes() + self.distinct.size_bytes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_bwt;

    #[test]
    fn lf_and_psi_are_inverse() {
        let t: Vec<Symbol> = vec![1, 2, 5, 1, 3, 1, 4, 1, 2, 5, 1, 0];
        let b = RankedSeq::new(naive_bwt(&t).into(), 6);
        for r in 0..t.len() {
            assert_eq!(b.psi(b.lf(r)), r);
        }
        // Row 0 is the sentinel suffix; LF walks the text backwards.
        let mut r = 0;
        let mut seen = vec![false; t.len()];
        for _ in 0..t.len() {
            assert!(!seen[r]);
            seen[r] = true;
            r = b.lf(r);
        }
        assert_eq!(r, 0);
    }
}
