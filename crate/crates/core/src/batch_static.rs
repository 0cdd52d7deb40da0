//! Batched rank queries over a static sequence.
//!
//! The sequence is cut into chunks of `width` symbols. Inside a chunk the
//! pairs `(symbol, offset)` are sorted (`R`), and each symbol's pairs are
//! cut into groups of `group` consecutive pairs. The first pair of every
//! group, annotated with its partial rank, forms the sample `R'`.
//!
//! A batch is answered by sorting the queries by `(chunk, symbol, offset)`
//! with a radix sort and merging each chunk's queries with its `R'`: the
//! last sample not after the query names a group, and a predecessor search
//! inside that group finishes the in-chunk count. The chunk count
//! vectors supply the occurrences before the chunk.
//!
//! For alphabets smaller than `log^4 n` the default build uses a wavelet
//! matrix instead, walking a whole batch down its levels in position order.

use crate::bits::{ChunkCounts, SmallAlphabetSeq};
use crate::util::{bits_for, lg, radix_sort_by_key};
use crate::Symbol;

/// Layout parameters of the chunked representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChunkParams {
    pub width: usize,
    pub group: usize,
}

impl ChunkParams {
    /// Chunks of `sigma` symbols and groups of `log^2 n` pairs.
    pub fn for_sequence(n: usize, sigma: usize) -> Self {
        let l = lg(n);
        Self { width: sigma.max(2), group: (l * l).max(1) }
    }
}

/// One sampled group head of `R'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupHead {
    pub symbol: Symbol,
    /// Index of the group's first pair inside the chunk's `R`.
    pub start: u32,
    /// Pairs of the same symbol in earlier groups of the chunk.
    pub before: u32,
}

/// Work counters of one batch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BatchStats {
    pub queries: usize,
    pub chunks_touched: usize,
    /// Sample entries stepped over while merging plus queries merged.
    pub merge_steps: usize,
    /// Total `|R'|` of the touched chunks.
    pub sample_entries: usize,
}

#[derive(Clone, Debug)]
struct Chunked {
    params: ChunkParams,
    counts: ChunkCounts,
    /// Chunk `c`'s `R` offsets occupy `[c * width, c * width + len_c)`.
    rpos: Vec<u32>,
    heads: Vec<GroupHead>,
    head_off: Vec<u32>,
}

#[derive(Clone, Debug)]
enum Repr {
    Small(SmallAlphabetSeq),
    Chunked(Chunked),
}

#[derive(Clone, Debug)]
pub struct StaticBatchSeq {
    n: usize,
    sigma: usize,
    repr: Repr,
}

impl StaticBatchSeq {
    /// Picks the wavelet-matrix fallback when `sigma < log^4 n`, the chunked
    /// layout otherwise.
    pub fn new(seq: &[Symbol], sigma: usize) -> Self {
        let l = lg(seq.len());
        if sigma < l.pow(4) {
            Self { n: seq.len(), sigma, repr: Repr::Small(SmallAlphabetSeq::new(seq, sigma)) }
        } else {
            Self::chunked(seq, sigma, ChunkParams::for_sequence(seq.len(), sigma))
        }
    }

    /// Always uses the chunked layout.
    pub fn chunked(seq: &[Symbol], sigma: usize, params: ChunkParams) -> Self {
        assert!(params.width > 0 && params.group > 0);
        Self { n: seq.len(), sigma, repr: Repr::Chunked(Chunked::build(seq, sigma, params)) }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn is_chunked(&self) -> bool {
        matches!(self.repr, Repr::Chunked(_))
    }

    pub fn params(&self) -> Option<ChunkParams> {
        match &self.repr {
            Repr::Chunked(c) => Some(c.params),
            Repr::Small(_) => None,
        }
    }

    /// Sampled heads of chunk `c` (chunked layout only).
    pub fn chunk_heads(&self, c: usize) -> &[GroupHead] {
        match &self.repr {
            Repr::Chunked(ch) => &ch.heads[ch.head_off[c] as usize..ch.head_off[c + 1] as usize],
            Repr::Small(_) => &[],
        }
    }

    /// Sorted `R` offsets of chunk `c` (chunked layout only).
    pub fn chunk_pairs(&self, c: usize) -> &[u32] {
        match &self.repr {
            Repr::Chunked(ch) => {
                let w = ch.params.width;
                &ch.rpos[c * w..((c + 1) * w).min(self.n)]
            }
            Repr::Small(_) => &[],
        }
    }

    /// Single inclusive rank; `None` if `i` is out of range.
    pub fn rank(&self, a: Symbol, i: usize) -> Option<usize> {
        self.batch_rank(&[(a, i)])[0]
    }

    /// Inclusive ranks `rank(a, i)` for every query `(a, i)`, in input
    /// order; `None` marks a position outside the sequence.
    pub fn batch_rank(&self, queries: &[(Symbol, usize)]) -> Vec<Option<usize>> {
        self.batch_rank_stats(queries).0
    }

    pub fn batch_rank_stats(&self, queries: &[(Symbol, usize)]) -> (Vec<Option<usize>>, BatchStats) {
        let mut out = vec![None; queries.len()];
        let stats = self.run(queries, &mut out, None);
        (out, stats)
    }

    /// Like [`batch_rank`](Self::batch_rank), also returning the position of
    /// the rightmost occurrence of the symbol at or before the query
    /// position, when there is one.
    pub fn batch_rank_with_witness(&self, queries: &[(Symbol, usize)]) -> Vec<Option<(usize, Option<usize>)>> {
        let mut out = vec![None; queries.len()];
        let mut wit = vec![None; queries.len()];
        self.run(queries, &mut out, Some(&mut wit));
        out.into_iter().zip(wit).map(|(r, w)| r.map(|r| (r, w))).collect()
    }

    /// Answers into `out`, which must have the length of `queries`.
    pub fn batch_rank_into(&self, queries: &[(Symbol, usize)], out: &mut [Option<usize>]) -> BatchStats {
        self.run(queries, out, None)
    }

    fn run(
        &self,
        queries: &[(Symbol, usize)],
        out: &mut [Option<usize>],
        mut witness: Option<&mut [Option<usize>]>,
    ) -> BatchStats {
        let mut stats = BatchStats { queries: queries.len(), ..Default::default() };
        match &self.repr {
            Repr::Small(w) if witness.is_none() => {
                let ends: Vec<(Symbol, usize)> = queries.iter().map(|&(a, i)| (a, (i + 1).min(self.n))).collect();
                let mut ranks = vec![0; queries.len()];
                w.batch_rank_before(&ends, &mut ranks);
                for (q, &(_, i)) in queries.iter().enumerate() {
                    if i < self.n {
                        out[q] = Some(ranks[q]);
                    }
                }
            }
            Repr::Small(w) => {
                for (q, &(a, i)) in queries.iter().enumerate() {
                    if i >= self.n {
                        continue;
                    }
                    let r = w.rank(a, i);
                    out[q] = Some(r);
                    if let Some(wit) = witness.as_deref_mut() {
                        wit[q] = if r > 0 { w.select(a, r) } else { None };
                    }
                }
            }
            Repr::Chunked(ch) => ch.run(self.n, self.sigma, queries, out, witness, &mut stats),
        }
        stats
    }

    /// Heap bytes of the structure.
    pub fn size_bytes(&self) -> usize {
        match &self.repr {
            Repr::Small(w) => w.size_bytes(),
            Repr::Chunked(c) => {
                c.counts.size_bytes() + 4 * c.rpos.len() + 12 * c.heads.len() + 4 * c.head_off.len()
            }
        }
    }
}

impl Chunked {
    fn build(seq: &[Symbol], sigma: usize, params: ChunkParams) -> Self {
        let ChunkParams { width, group } = params;
        let counts = ChunkCounts::build(seq, sigma, width);
        let nchunks = seq.len().div_ceil(width);
        let mut rpos = vec![0u32; seq.len()];
        let mut heads = Vec::new();
        let mut head_off = Vec::with_capacity(nchunks + 1);
        let mut pairs: Vec<(Symbol, u32)> = Vec::with_capacity(width);
        for c in 0..nchunks {
            head_off.push(heads.len() as u32);
            let base = c * width;
            let chunk = &seq[base..(base + width).min(seq.len())];
            pairs.clear();
            pairs.extend(chunk.iter().enumerate().map(|(o, &s)| (s, o as u32)));
            pairs.sort_unstable();
            let mut k = 0;
            while k < pairs.len() {
                let a = pairs[k].0;
                let run_start = k;
                while k < pairs.len() && pairs[k].0 == a {
                    if (k - run_start) % group == 0 {
                        heads.push(GroupHead { symbol: a, start: k as u32, before: (k - run_start) as u32 });
                    }
                    rpos[base + k] = pairs[k].1;
                    k += 1;
                }
            }
        }
        head_off.push(heads.len() as u32);
        Self { params, counts, rpos, heads, head_off }
    }

    fn run(
        &self,
        n: usize,
        sigma: usize,
        queries: &[(Symbol, usize)],
        out: &mut [Option<usize>],
        mut witness: Option<&mut [Option<usize>]>,
        stats: &mut BatchStats,
    ) {
        let w = self.params.width;
        // Sort valid queries by (chunk, symbol, offset).
        let sym_bits = bits_for(sigma as u64 + 1);
        let off_bits = bits_for(w as u64);
        let chunk_bits = bits_for(n.div_ceil(w) as u64);
        let total_bits = sym_bits + off_bits + chunk_bits;
        assert!(total_bits <= 64, "query key does not fit in 64 bits");
        let mut keyed: Vec<(u64, u32)> = Vec::with_capacity(queries.len());
        for (q, &(a, i)) in queries.iter().enumerate() {
            if i >= n {
                continue;
            }
            if a as usize >= sigma {
                out[q] = Some(0);
                continue;
            }
            let key = (((i / w) as u64) << (sym_bits + off_bits)) | ((a as u64) << off_bits) | (i % w) as u64;
            keyed.push((key, q as u32));
        }
        radix_sort_by_key(&mut keyed, total_bits, |x| x.0);

        let off_mask = (1u64 << off_bits) - 1;
        let sym_mask = (1u64 << sym_bits) - 1;
        let mut k = 0;
        while k < keyed.len() {
            let c = (keyed[k].0 >> (sym_bits + off_bits)) as usize;
            stats.chunks_touched += 1;
            let heads = &self.heads[self.head_off[c] as usize..self.head_off[c + 1] as usize];
            let base = c * w;
            let rlen = (base + w).min(n) - base;
            let rpos = &self.rpos[base..base + rlen];
            stats.sample_entries += heads.len();
            // h: number of heads whose (symbol, first offset) <= current query.
            let mut h = 0;
            while k < keyed.len() && (keyed[k].0 >> (sym_bits + off_bits)) as usize == c {
                let (key, q) = keyed[k];
                let a = ((key >> off_bits) & sym_mask) as Symbol;
                let off = (key & off_mask) as u32;
                let le = |g: &GroupHead| (g.symbol, rpos[g.start as usize]) <= (a, off);
                // Gallop forward over heads not after the query.
                let mut step = 1;
                while h + step <= heads.len() && le(&heads[h + step - 1]) {
                    h += step;
                    stats.merge_steps += step;
                    step *= 2;
                }
                let hi = (h + step).min(heads.len());
                let adv = heads[h..hi].partition_point(|g| le(g));
                h += adv;
                stats.merge_steps += adv + 1;
                let mut in_chunk = 0;
                let mut wit = None;
                if h > 0 && heads[h - 1].symbol == a {
                    let g = heads[h - 1];
                    let end = heads.get(h).map_or(rlen, |x| x.start as usize);
                    let grp = &rpos[g.start as usize..end];
                    let cnt = grp.partition_point(|&p| p <= off);
                    in_chunk = g.before as usize + cnt;
                    wit = Some(base + grp[cnt - 1] as usize);
                }
                out[q as usize] = Some(self.counts.chunk_prefix_count(a, c) + in_chunk);
                if let Some(ws) = witness.as_deref_mut() {
                    // Only in-chunk occurrences are reported.
                    ws[q as usize] = wit;
                }
                k += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_rank;
    use proptest::prelude::*;

    fn abra() -> Vec<Symbol> {
        vec![1, 2, 5, 1, 3, 1, 4, 1, 2, 5, 1]
    }

    #[test]
    fn abracadabra_single_chunk_order() {
        let s = StaticBatchSeq::chunked(&abra(), 16, ChunkParams { width: 16, group: 2 });
        // R sorted by (symbol, offset): a0 a3 a5 a7 a10 b1 b8 c4 d6 r2 r9.
        assert_eq!(s.chunk_pairs(0), &[0, 3, 5, 7, 10, 1, 8, 4, 6, 2, 9]);
        let heads: Vec<(Symbol, u32, u32)> = s.chunk_heads(0).iter().map(|g| (g.symbol, g.start, g.before + 1)).collect();
        assert_eq!(heads, vec![(1, 0, 1), (1, 2, 3), (1, 4, 5), (2, 5, 1), (3, 7, 1), (4, 8, 1), (5, 9, 1)]);
        assert_eq!(s.rank(1, 6), Some(3));
        assert_eq!(s.rank(1, 11), None);
    }

    #[test]
    fn out_of_range_marker_and_unknown_symbol() {
        let s = StaticBatchSeq::chunked(&abra(), 6, ChunkParams { width: 4, group: 1 });
        assert_eq!(s.batch_rank(&[(1, 100), (7, 3), (2, 10)]), vec![None, Some(0), Some(2)]);
    }

    #[test]
    fn fallback_selected_for_small_alphabets() {
        let s = StaticBatchSeq::new(&abra(), 6);
        assert!(!s.is_chunked());
        assert_eq!(s.rank(1, 6), Some(3));
    }

    proptest! {
        #[test]
        fn chunked_matches_naive(
            seq in proptest::collection::vec(0u32..20, 1..500),
            width in 1usize..64,
            group in 1usize..10,
            qs in proptest::collection::vec((0u32..21, 0usize..520), 0..300),
        ) {
            let s = StaticBatchSeq::chunked(&seq, 20, ChunkParams { width, group });
            let got = s.batch_rank_with_witness(&qs);
            for (&(a, i), g) in qs.iter().zip(got) {
                if i >= seq.len() {
                    prop_assert_eq!(g, None);
                    continue;
                }
                let (r, w) = g.unwrap();
                prop_assert_eq!(r, naive_rank(&seq, a, i));
                if let Some(p) = w {
                    prop_assert!(p <= i && seq[p] == a);
                    prop_assert!(seq[p + 1..=i].iter().all(|&x| x != a));
                }
            }
        }
    }
}
