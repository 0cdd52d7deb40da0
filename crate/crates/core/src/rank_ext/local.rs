use super::PartialRankIndex;
use crate::util::ceil_log2;
use crate::Symbol;

/// Occurrence lists inside fixed-width groups of positions.
///
/// Positions are cut into groups of `width`. Each group stores its distinct
/// symbols, sorted, and for each symbol the sorted in-group offsets of its
/// occurrences. Finding the leftmost or rightmost occurrence of a symbol
/// inside a window touches `window / width + 2` groups.
#[derive(Clone, Debug)]
pub struct LocalOccurrences {
    width: usize,
    len: usize,
    /// Per group, CSR offsets into `syms`/`starts`.
    group_ptr: Vec<u32>,
    syms: Vec<Symbol>,
    /// Start of each (group, symbol) run in `offs`; one extra entry per group.
    starts: Vec<u32>,
    offs: Vec<u16>,
}

impl LocalOccurrences {
    pub fn new(seq: &[Symbol], width: usize) -> Self {
        let width = width.clamp(1, 1 << 16);
        let mut group_ptr = Vec::with_capacity(seq.len().div_ceil(width) + 1);
        let mut syms = Vec::new();
        let mut starts = Vec::new();
        let mut offs = Vec::with_capacity(seq.len());
        let mut pairs: Vec<(Symbol, u16)> = Vec::with_capacity(width);
        for base in (0..seq.len()).step_by(width) {
            group_ptr.push(syms.len() as u32);
            pairs.clear();
            pairs.extend(seq[base..(base + width).min(seq.len())].iter().enumerate().map(|(o, &s)| (s, o as u16)));
            pairs.sort_unstable();
            for (k, &(s, o)) in pairs.iter().enumerate() {
                if k == 0 || pairs[k - 1].0 != s {
                    syms.push(s);
                    starts.push(offs.len() as u32);
                }
                offs.push(o);
            }
        }
        group_ptr.push(syms.len() as u32);
        starts.push(offs.len() as u32);
        Self { width, len: seq.len(), group_ptr, syms, starts, offs }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Sorted offsets of `a` in group `g`.
    fn occ(&self, g: usize, a: Symbol) -> &[u16] {
        let (lo, hi) = (self.group_ptr[g] as usize, self.group_ptr[g + 1] as usize);
        let s = &self.syms[lo..hi];
        match s.binary_search(&a) {
            Ok(k) => &self.offs[self.starts[lo + k] as usize..self.starts[lo + k + 1] as usize],
            Err(_) => &[],
        }
    }

    /// Rightmost occurrence of `a` in `[lo, hi]`.
    pub fn rightmost(&self, a: Symbol, lo: usize, hi: usize) -> Option<usize> {
        if lo > hi || lo >= self.len {
            return None;
        }
        let hi = hi.min(self.len - 1);
        let mut g = hi / self.width;
        loop {
            let base = g * self.width;
            let occ = self.occ(g, a);
            let k = occ.partition_point(|&o| base + (o as usize) <= hi);
            if k > 0 {
                let p = base + occ[k - 1] as usize;
                return (p >= lo).then_some(p);
            }
            if base <= lo || g == 0 {
                return None;
            }
            g -= 1;
        }
    }

    /// Leftmost occurrence of `a` in `[lo, hi]`.
    pub fn leftmost(&self, a: Symbol, lo: usize, hi: usize) -> Option<usize> {
        if lo > hi || lo >= self.len {
            return None;
        }
        let hi = hi.min(self.len - 1);
        let mut g = lo / self.width;
        loop {
            let base = g * self.width;
            let occ = self.occ(g, a);
            let k = occ.partition_point(|&o| base + (o as usize) < lo);
            if k < occ.len() {
                let p = base + occ[k] as usize;
                return (p <= hi).then_some(p);
            }
            if base + self.width > hi {
                return None;
            }
            g += 1;
        }
    }

    pub fn size_bytes(&self) -> usize {
        4 * (self.group_ptr.len() + self.syms.len() + self.starts.len()) + 2 * self.offs.len()
    }
}

/// Rank of a symbol at both ends of a short interval, from the leftmost and
/// rightmost occurrence inside it and their partial ranks. Groups have width
/// `ceil(log2 sigma)^2`.
#[derive(Clone, Debug)]
pub struct SmallIntervalRankIndex {
    local: LocalOccurrences,
}

impl SmallIntervalRankIndex {
    pub fn new(seq: &[Symbol], sigma: usize) -> Self {
        let l = ceil_log2(sigma).max(1);
        Self { local: LocalOccurrences::new(seq, l * l) }
    }

    /// Interval length the index is meant for: `2 * log^2 sigma`.
    pub fn span(&self) -> usize {
        2 * self.local.width()
    }

    /// `(rank(a, i - 1), rank(a, j))` when `a` occurs in `S[i..=j]`.
    pub fn small_interval_rank(&self, pr: &PartialRankIndex, a: Symbol, i: usize, j: usize) -> Option<(usize, usize)> {
        let p = self.local.leftmost(a, i, j)?;
        let q = self.local.rightmost(a, i, j)?;
        Some((pr.partial_rank(p) - 1, pr.partial_rank(q)))
    }

    pub fn local(&self) -> &LocalOccurrences {
        &self.local
    }

    pub fn size_bytes(&self) -> usize {
        self.local.size_bytes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{naive_rank, naive_rank_before};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn extremes_match_scan(seq in proptest::collection::vec(0u32..6, 1..300), width in 1usize..40, lo in 0usize..300, span in 0usize..100, a in 0u32..6) {
            let lo = lo % seq.len();
            let hi = (lo + span).min(seq.len() - 1);
            let lo_occ = LocalOccurrences::new(&seq, width);
            let want_l = (lo..=hi).find(|&p| seq[p] == a);
            let want_r = (lo..=hi).rev().find(|&p| seq[p] == a);
            prop_assert_eq!(lo_occ.leftmost(a, lo, hi), want_l);
            prop_assert_eq!(lo_occ.rightmost(a, lo, hi), want_r);
        }

        #[test]
        fn small_interval_ranks(seq in proptest::collection::vec(0u32..16, 1..300), lo in 0usize..300, span in 0usize..32, a in 0u32..16) {
            let lo = lo % seq.len();
            let hi = (lo + span).min(seq.len() - 1);
            let pr = PartialRankIndex::new(seq.clone().into(), 16);
            let sir = SmallIntervalRankIndex::new(&seq, 16);
            let got = sir.small_interval_rank(&pr, a, lo, hi);
            if seq[lo..=hi].contains(&a) {
                prop_assert_eq!(got, Some((naive_rank_before(&seq, a, lo), naive_rank(&seq, a, hi))));
            } else {
                prop_assert_eq!(got, None);
            }
        }
    }
}
