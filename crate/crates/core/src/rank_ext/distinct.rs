use std::sync::Arc;

use super::PartialRankIndex;
use crate::Symbol;

const RMQ_BLOCK: usize = 32;
/// Ranges up to this length are scanned instead of searched.
const SCAN_LIMIT: usize = 48;

/// Range-minimum (or maximum) over a fixed `u32` array: block minima with a
/// sparse table over blocks, plus a scan of the two boundary blocks.
#[derive(Clone, Debug)]
struct BlockRmq {
    max: bool,
    /// `table[k][b]`: position of the extreme over blocks `b .. b + 2^k`.
    table: Vec<Vec<u32>>,
}

impl BlockRmq {
    fn new(vals: &[u32], max: bool) -> Self {
        let better = |a: u32, b: u32| if max { a > b } else { a < b };
        let nb = vals.len().div_ceil(RMQ_BLOCK);
        let mut level0 = Vec::with_capacity(nb);
        for b in 0..nb {
            let lo = b * RMQ_BLOCK;
            let hi = (lo + RMQ_BLOCK).min(vals.len());
            let mut best = lo;
            for k in lo + 1..hi {
                if better(vals[k], vals[best]) {
                    best = k;
                }
            }
            level0.push(best as u32);
        }
        let mut table = vec![level0];
        let mut k = 1;
        while (1 << k) <= nb {
            let prev = &table[k - 1];
            let half = 1 << (k - 1);
            let lev: Vec<u32> = (0..=nb - (1 << k))
                .map(|b| {
                    let (x, y) = (prev[b], prev[b + half]);
                    if better(vals[y as usize], vals[x as usize]) { y } else { x }
                })
                .collect();
            table.push(lev);
            k += 1;
        }
        Self { max, table }
    }

    fn query(&self, vals: &[u32], i: usize, j: usize) -> usize {
        let better = |a: u32, b: u32| if self.max { a > b } else { a < b };
        let scan = |lo: usize, hi: usize, best: &mut usize| {
            for k in lo..=hi {
                if better(vals[k], vals[*best]) {
                    *best = k;
                }
            }
        };
        let (bi, bj) = (i / RMQ_BLOCK, j / RMQ_BLOCK);
        let mut best = i;
        if bi == bj {
            scan(i, j, &mut best);
            return best;
        }
        scan(i, (bi + 1) * RMQ_BLOCK - 1, &mut best);
        scan(bj * RMQ_BLOCK, j, &mut best);
        if bj > bi + 1 {
            let (lo, hi) = (bi + 1, bj - 1);
            let k = (usize::BITS - 1 - (hi - lo + 1).leading_zeros()) as usize;
            for c in [self.table[k][lo], self.table[k][hi + 1 - (1 << k)]] {
                if better(vals[c as usize], vals[best]) {
                    best = c as usize;
                }
            }
        }
        best
    }
}

/// One distinct symbol of a range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistinctEntry {
    pub symbol: Symbol,
    /// Occurrences inside the range.
    pub count: usize,
    /// Occurrences before the range start.
    pub before: usize,
}

/// Lists the distinct symbols of any range with their frequencies.
///
/// Each position knows the previous and next occurrence of its symbol. The
/// leftmost occurrences in `[i, j]` are exactly the positions whose previous
/// occurrence is before `i`; they are enumerated by recursive range-minimum
/// queries over the previous-occurrence array, and symmetrically for the
/// rightmost occurrences. Partial ranks at both ends give the counts.
#[derive(Clone, Debug)]
pub struct RangeDistinctIndex {
    seq: Arc<[Symbol]>,
    /// Previous occurrence plus one, `0` if none.
    prev: Vec<u32>,
    /// Next occurrence, `n` if none.
    next: Vec<u32>,
    prev_rmq: BlockRmq,
    next_rmq: BlockRmq,
}

impl RangeDistinctIndex {
    pub fn new(seq: Arc<[Symbol]>, sigma: usize) -> Self {
        let n = seq.len();
        let mut last = vec![u32::MAX; sigma];
        let mut prev = vec![0u32; n];
        let mut next = vec![n as u32; n];
        for (i, &s) in seq.iter().enumerate() {
            let l = last[s as usize];
            if l != u32::MAX {
                prev[i] = l + 1;
                next[l as usize] = i as u32;
            }
            last[s as usize] = i as u32;
        }
        let prev_rmq = BlockRmq::new(&prev, false);
        let next_rmq = BlockRmq::new(&next, true);
        Self { seq, prev, next, prev_rmq, next_rmq }
    }

    /// Appends the distinct symbols of `S[i..=j]`, sorted by symbol, to
    /// `out` and returns the number of range-extreme probes made.
    pub fn range_distinct(&self, pr: &PartialRankIndex, i: usize, j: usize, out: &mut Vec<DistinctEntry>) -> usize {
        debug_assert!(i <= j && j < self.seq.len());
        let mut first: Vec<(Symbol, u32)> = Vec::new();
        let mut last: Vec<(Symbol, u32)> = Vec::new();
        let mut probes = 0;
        if j - i < SCAN_LIMIT {
            for k in i..=j {
                if (self.prev[k] as usize) <= i {
                    first.push((self.seq[k], k as u32));
                }
                if self.next[k] as usize > j {
                    last.push((self.seq[k], k as u32));
                }
            }
            probes += j - i + 1;
        } else {
            let mut stack = vec![(i, j)];
            while let Some((l, r)) = stack.pop() {
                probes += 1;
                let k = self.prev_rmq.query(&self.prev, l, r);
                if (self.prev[k] as usize) <= i {
                    first.push((self.seq[k], k as u32));
                    if k > l {
                        stack.push((l, k - 1));
                    }
                    if k < r {
                        stack.push((k + 1, r));
                    }
                }
            }
            stack.push((i, j));
            while let Some((l, r)) = stack.pop() {
                probes += 1;
                let k = self.next_rmq.query(&self.next, l, r);
                if self.next[k] as usize > j {
                    last.push((self.seq[k], k as u32));
                    if k > l {
                        stack.push((l, k - 1));
                    }
                    if k < r {
                        stack.push((k + 1, r));
                    }
                }
            }
        }
        first.sort_unstable();
        last.sort_unstable();
        debug_assert_eq!(first.len(), last.len());
        for (&(a, p), &(_, q)) in first.iter().zip(&last) {
            let rp = pr.partial_rank(p as usize);
            let rq = pr.partial_rank(q as usize);
            out.push(DistinctEntry { symbol: a, count: rq - rp + 1, before: rp - 1 });
        }
        probes
    }

    pub fn size_bytes(&self) -> usize {
        let t = |r: &BlockRmq| r.table.iter().map(|l| 4 * l.len()).sum::<usize>();
        4 * (self.prev.len() + self.next.len()) + t(&self.prev_rmq) + t(&self.next_rmq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_range_distinct;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_naive(seq in proptest::collection::vec(0u32..9, 1..400), ranges in proptest::collection::vec((0usize..400, 0usize..400), 1..30)) {
            let arc: Arc<[Symbol]> = seq.clone().into();
            let pr = PartialRankIndex::new(arc.clone(), 9);
            let rd = RangeDistinctIndex::new(arc, 9);
            for (a, b) in ranges {
                let (i, j) = (a.min(b) % seq.len(), a.max(b) % seq.len());
                let (i, j) = (i.min(j), i.max(j));
                let mut out = Vec::new();
                rd.range_distinct(&pr, i, j, &mut out);
                let got: Vec<(Symbol, usize, usize)> = out.iter().map(|e| (e.symbol, e.count, e.before)).collect();
                prop_assert_eq!(got, naive_range_distinct(&seq, i, j));
            }
        }
    }

    #[test]
    fn probes_scale_with_output() {
        // Long range over two symbols: few probes despite the length.
        let seq: Vec<Symbol> = (0..5000).map(|i| (i % 2) as Symbol).collect();
        let arc: Arc<[Symbol]> = seq.into();
        let pr = PartialRankIndex::new(arc.clone(), 2);
        let rd = RangeDistinctIndex::new(arc, 2);
        let mut out = Vec::new();
        let probes = rd.range_distinct(&pr, 100, 4900, &mut out);
        assert_eq!(out.len(), 2);
        assert!(probes <= 4 * 2 + 2);
    }
}
