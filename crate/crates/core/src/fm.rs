//! FM-index over the reversed text.
//!
//! A pattern `P` is matched by backward search for its reverse over
//! `B̄ = BWT(reverse_text(T))`, which reads `P` left to right. After a prefix
//! `S` of `P` has been processed the interval holds the suffixes of the
//! reversed text that start with the reverse of `S`, and the symbols of `B̄`
//! inside it are the symbols that follow `S` in `T`. When the interval is
//! not uniform, `S` is a node of the suffix tree of `T` and the symbols are
//! its child labels, each occurring once per leaf below that child.
//!
//! Nodes with at least `d = lg(sigma)` leaves are heavy. A node keeps a
//! dictionary of rank pairs for its heavy children when it has two of them,
//! or one heavy child and more than `d` light ones. Every other step is
//! answered by partial rank (uniform interval), by the leftmost and
//! rightmost occurrence in a short interval or near the interval ends, or,
//! at most once per pattern, by general rank.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bits::ChunkCounts;
use crate::bwt::{build_bwt, reverse_text, SuffixSamples};
use crate::rank_ext::{DistinctEntry, RankedSeq, SmallIntervalRankIndex};
use crate::util::{ceil_log2, check_text, lg};
use crate::{Error, Result, Symbol};

/// Dictionary key: the `B̄` interval of a node and a child label.
type PairKey = (u32, u32, Symbol);

/// How the steps of one count query were answered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CountTrace {
    pub uniform: usize,
    pub stored: usize,
    pub small: usize,
    pub window: usize,
    /// General rank calls.
    pub slow: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FmBuildStats {
    /// Heavy internal nodes visited by the Weiner-link enumeration.
    pub heavy_nodes: usize,
    pub special_nodes: usize,
    /// Heavy nodes with one heavy child and more than `d` light children.
    pub wide_nodes: usize,
    pub pairs: usize,
    pub peak_pending: usize,
}

/// Space used by the index components, in bytes unless noted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FmSpace {
    pub n: usize,
    pub bwt: usize,
    pub small_interval: usize,
    pub chunk_bits: usize,
    pub pairs: usize,
    /// Bits of the stored pairs at chunk-relative width.
    pub pair_bits: usize,
    pub samples: usize,
}

impl FmSpace {
    /// Bits per text symbol spent on the stored pairs and the chunk counts.
    pub fn dictionary_bits_per_symbol(&self) -> f64 {
        (self.pair_bits + self.chunk_bits) as f64 / self.n.max(1) as f64
    }
}

/// Default sampling factor `ceil(log2 n)`, at least 1.
pub fn default_sample_rate(n: usize) -> usize {
    ceil_log2(n).max(1)
}

/// Start in `T` of an occurrence of `P` (length `m`) whose reverse starts
/// at `rev_pos` in the reversed text.
#[inline]
pub fn text_position(n: usize, rev_pos: usize, m: usize) -> usize {
    n - 1 - rev_pos - m
}

#[derive(Clone, Debug)]
pub struct FmIndex {
    n: usize,
    sigma: usize,
    d: usize,
    rbwt: Arc<RankedSeq>,
    small: SmallIntervalRankIndex,
    chunks: ChunkCounts,
    pairs: HashMap<PairKey, (u32, u32)>,
    samples: SuffixSamples,
    stats: FmBuildStats,
}

impl FmIndex {
    /// Builds the index with the default sampling factor.
    pub fn build(text: &[Symbol], sigma: usize) -> Result<Self> {
        Self::build_with_sample(text, sigma, default_sample_rate(text.len()))
    }

    pub fn build_with_sample(text: &[Symbol], sigma: usize, sample: usize) -> Result<Self> {
        check_text(text, sigma)?;
        if sample == 0 {
            return Err(Error::InvalidInput("sample rate must be positive".into()));
        }
        let fwd = RankedSeq::new(build_bwt(text, sigma)?.into(), sigma);
        let rbwt = Arc::new(RankedSeq::new(build_bwt(&reverse_text(text), sigma)?.into(), sigma));
        Ok(Self::from_bwts(&fwd, rbwt, sample))
    }

    /// From the BWT of the text and the BWT of the reversed text.
    pub fn from_bwts(fwd: &RankedSeq, rbwt: Arc<RankedSeq>, sample: usize) -> Self {
        assert_eq!(fwd.len(), rbwt.len());
        let sigma = rbwt.sigma();
        let d = lg(sigma);
        let chunks = ChunkCounts::build(rbwt.as_slice(), sigma, chunk_width(rbwt.len(), sigma));
        let mut stats = FmBuildStats::default();
        let pairs = collect_pairs(fwd, &rbwt, &chunks, d, &mut stats);
        Self::assemble(rbwt, sample, chunks, pairs, stats)
    }

    /// Rebuilds the query structures around stored pairs, as read back from
    /// [`stored_pairs`](Self::stored_pairs).
    pub fn from_stored(rbwt: Arc<RankedSeq>, sample: usize, stored: &[(u32, u32, Symbol, u32, u32)]) -> Result<Self> {
        if sample == 0 || rbwt.is_empty() {
            return Err(Error::Format("empty index or zero sample rate".into()));
        }
        let sigma = rbwt.sigma();
        let n = rbwt.len();
        let chunks = ChunkCounts::build(rbwt.as_slice(), sigma, chunk_width(n, sigma));
        let mut pairs = HashMap::with_capacity(stored.len());
        for &(l, r, c, lo, hi) in stored {
            if l > r || r as usize >= n || c as usize >= sigma {
                return Err(Error::Format("stored pair out of range".into()));
            }
            pairs.insert((l, r, c), (lo, hi));
        }
        let stats = FmBuildStats { pairs: pairs.len(), ..Default::default() };
        Ok(Self::assemble(rbwt, sample, chunks, pairs, stats))
    }

    fn assemble(
        rbwt: Arc<RankedSeq>,
        sample: usize,
        chunks: ChunkCounts,
        pairs: HashMap<PairKey, (u32, u32)>,
        stats: FmBuildStats,
    ) -> Self {
        let sigma = rbwt.sigma();
        Self {
            n: rbwt.len(),
            sigma,
            d: lg(sigma),
            small: SmallIntervalRankIndex::new(rbwt.as_slice(), sigma),
            samples: SuffixSamples::new(&rbwt, sample),
            rbwt,
            chunks,
            pairs,
            stats,
        }
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

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sample_rate(&self) -> usize {
        self.samples.step()
    }

    /// `B̄`.
    pub fn reverse_bwt(&self) -> &Arc<RankedSeq> {
        &self.rbwt
    }

    pub fn stats(&self) -> &FmBuildStats {
        &self.stats
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// All stored pairs `(l, r, label, lo, hi)`, sorted.
    pub fn stored_pairs(&self) -> Vec<(u32, u32, Symbol, u32, u32)> {
        let mut v: Vec<_> = self.pairs.iter().map(|(&(l, r, c), &(lo, hi))| (l, r, c, lo, hi)).collect();
        v.sort_unstable();
        v
    }

    /// Ranks `(rank_before(c, l), rank(c, r))` recombined from a stored
    /// pair, if there is one for `(l, r, c)`.
    pub fn stored_ranks(&self, l: usize, r: usize, c: Symbol) -> Option<(usize, usize)> {
        let &(lo, hi) = self.pairs.get(&(l as u32, r as u32, c))?;
        let w = self.chunks.width();
        Some((
            self.chunks.chunk_prefix_count(c, l / w) + lo as usize,
            self.chunks.chunk_prefix_count(c, r / w) + hi as usize,
        ))
    }

    pub fn space(&self) -> FmSpace {
        let rel_bits = ceil_log2(self.chunks.width() + 1).max(1);
        FmSpace {
            n: self.n,
            bwt: self.rbwt.size_bytes(),
            small_interval: self.small.size_bytes(),
            chunk_bits: self.chunks.size_bits(),
            pairs: self.pairs.len(),
            pair_bits: 2 * rel_bits * self.pairs.len(),
            samples: self.samples.size_bytes(),
        }
    }

    fn check_pattern(&self, p: &[Symbol]) -> Result<()> {
        if p.is_empty() {
            return Err(Error::InvalidInput("empty pattern".into()));
        }
        if let Some(&c) = p.iter().find(|&&c| c == 0 || c as usize >= self.sigma) {
            return Err(Error::InvalidInput(format!("pattern symbol {c} outside 1..{}", self.sigma)));
        }
        Ok(())
    }

    /// Rows of `B̄` whose suffixes start with the reverse of `p`.
    pub fn range(&self, p: &[Symbol]) -> Result<Option<(usize, usize)>> {
        self.range_traced(p, &mut CountTrace::default())
    }

    pub fn range_traced(&self, p: &[Symbol], trace: &mut CountTrace) -> Result<Option<(usize, usize)>> {
        self.check_pattern(p)?;
        let (mut l, mut r) = (0, self.n - 1);
        for &c in p {
            match self.step(l, r, c, trace) {
                Some(x) => (l, r) = x,
                None => return Ok(None),
            }
        }
        debug_assert!(trace.slow <= 1);
        Ok(Some((l, r)))
    }

    /// One backward-search step from the non-empty interval `[l, r]`.
    fn step(&self, l: usize, r: usize, c: Symbol, trace: &mut CountTrace) -> Option<(usize, usize)> {
        let b = &*self.rbwt;
        let (lo, hi) = if b.is_uniform(l, r) {
            trace.uniform += 1;
            if b.access(l) != c {
                return None;
            }
            (b.partial_rank(l) - 1, b.partial_rank(r))
        } else if r - l < self.small.span() {
            trace.small += 1;
            self.small.small_interval_rank(b.partial(), c, l, r)?
        } else if let Some(x) = self.stored_ranks(l, r, c) {
            trace.stored += 1;
            x
        } else if let Some(x) = self.window_ranks(l, r, c) {
            trace.window += 1;
            x
        } else {
            trace.slow += 1;
            (b.rank_before(c, l), b.rank(c, r))
        };
        (hi > lo).then(|| (b.acc(c) + lo, b.acc(c) + hi - 1))
    }

    /// Ranks from the leftmost occurrence of `c` within `d^2` of `l` and the
    /// rightmost within `d^2` of `r`.
    fn window_ranks(&self, l: usize, r: usize, c: Symbol) -> Option<(usize, usize)> {
        let w = self.d * self.d;
        let local = self.small.local();
        let p = local.leftmost(c, l, (l + w).min(r))?;
        let q = local.rightmost(c, r.saturating_sub(w).max(l), r)?;
        Some((self.rbwt.partial_rank(p) - 1, self.rbwt.partial_rank(q)))
    }

    pub fn count(&self, p: &[Symbol]) -> Result<usize> {
        Ok(self.range(p)?.map_or(0, |(l, r)| r - l + 1))
    }

    pub fn count_traced(&self, p: &[Symbol], trace: &mut CountTrace) -> Result<usize> {
        Ok(self.range_traced(p, trace)?.map_or(0, |(l, r)| r - l + 1))
    }

    /// Start positions of `p` in the text, ascending.
    pub fn locate(&self, p: &[Symbol]) -> Result<Vec<usize>> {
        let Some((l, r)) = self.range(p)? else {
            return Ok(Vec::new());
        };
        let mut out: Vec<usize> = (l..=r)
            .map(|row| text_position(self.n, self.samples.position(&self.rbwt, row).0, p.len()))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// `T[i..i+len]`.
    pub fn extract(&self, i: usize, len: usize) -> Result<Vec<Symbol>> {
        let n = self.n;
        if i >= n || len > n - i {
            return Err(Error::OutOfRange { pos: i.saturating_add(len), len: n });
        }
        if len == 0 {
            return Ok(Vec::new());
        }
        // The reversed-text suffix at `e` is preceded by T[i].
        let e = n - 1 - i;
        let step = self.samples.step();
        let j = e.div_ceil(step);
        let (mut row, pos) = if j * step < n { (self.samples.row_of_sample(j), j * step) } else { (0, n - 1) };
        for _ in e..pos {
            row = self.rbwt.lf(row);
        }
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(self.rbwt.access(row));
            row = self.rbwt.lf(row);
        }
        Ok(out)
    }

    /// LF over `B̄`.
    pub fn lf(&self, row: usize) -> Result<usize> {
        if row >= self.n {
            return Err(Error::OutOfRange { pos: row, len: self.n });
        }
        Ok(self.rbwt.lf(row))
    }

    /// Inverse of [`lf`](Self::lf).
    pub fn psi(&self, row: usize) -> Result<usize> {
        if row >= self.n {
            return Err(Error::OutOfRange { pos: row, len: self.n });
        }
        Ok(self.rbwt.psi(row))
    }

    /// Position in the reversed text of the suffix at `row`.
    pub fn reverse_position(&self, row: usize) -> Result<usize> {
        if row >= self.n {
            return Err(Error::OutOfRange { pos: row, len: self.n });
        }
        Ok(self.samples.position(&self.rbwt, row).0)
    }
}

/// Chunk width `sigma^2`, one chunk when that exceeds `n`.
fn chunk_width(n: usize, sigma: usize) -> usize {
    let w = sigma.saturating_mul(sigma);
    if w > n {
        n.max(1)
    } else {
        w
    }
}

/// A heavy node waiting to be visited: where its interval starts in `B̄`
/// and its children as `(lo, hi, label)` intervals of the text's BWT.
struct Pending {
    rev_lo: usize,
    children: Vec<(u32, u32, Symbol)>,
}

/// Enumerates the heavy internal nodes by Weiner links from the root and
/// stores the rank pairs of the marked ones.
///
/// Node `cS` is reached from `S`. Rows of `B̄` for `S` are split by the
/// symbol that precedes `S` in `T`, so the `B̄` interval of `cS` starts after
/// the occurrences of smaller symbols among the predecessors of `S`. Those
/// counts come out of the range-distinct lists that find the links.
fn collect_pairs(
    fwd: &RankedSeq,
    rbwt: &RankedSeq,
    chunks: &ChunkCounts,
    d: usize,
    stats: &mut FmBuildStats,
) -> HashMap<PairKey, (u32, u32)> {
    let n = fwd.len();
    let sigma = fwd.sigma();
    let w = chunks.width();
    let mut pairs = HashMap::new();
    let root: Vec<(u32, u32, Symbol)> = (0..sigma as Symbol)
        .filter(|&a| fwd.stats().count(a) > 0)
        .map(|a| (fwd.acc(a) as u32, (fwd.acc(a) + fwd.stats().count(a) - 1) as u32, a))
        .collect();
    let mut stack = vec![Pending { rev_lo: 0, children: root }];
    let mut distinct: Vec<DistinctEntry> = Vec::new();
    // (symbol, lo, hi, child label) for every Weiner link out of the children.
    let mut links: Vec<(Symbol, u32, u32, Symbol)> = Vec::new();
    while let Some(node) = stack.pop() {
        stats.heavy_nodes += 1;
        let first = node.children[0].0 as usize;
        let last = node.children[node.children.len() - 1].1 as usize;
        let (l, r) = (node.rev_lo, node.rev_lo + last - first);
        debug_assert!(r < n);

        let heavy = node.children.iter().filter(|&&(lo, hi, _)| (hi - lo + 1) as usize >= d).count();
        let light = node.children.len() - heavy;
        let special = heavy >= 2;
        let wide = heavy == 1 && light > d;
        if special || wide {
            if special {
                stats.special_nodes += 1;
            } else {
                stats.wide_nodes += 1;
            }
            for &(lo, hi, c) in &node.children {
                if ((hi - lo + 1) as usize) < d {
                    continue;
                }
                let rlo = rbwt.rank_before(c, l) - chunks.chunk_prefix_count(c, l / w);
                let rhi = rbwt.rank(c, r) - chunks.chunk_prefix_count(c, r / w);
                pairs.insert((l as u32, r as u32, c), (rlo as u32, rhi as u32));
            }
        }

        links.clear();
        for &(lo, hi, label) in &node.children {
            distinct.clear();
            fwd.range_distinct(lo as usize, hi as usize, &mut distinct);
            for e in &distinct {
                let s = (fwd.acc(e.symbol) + e.before) as u32;
                links.push((e.symbol, s, s + e.count as u32 - 1, label));
            }
        }
        // Stable: children stay in label order within each symbol.
        links.sort_by_key(|x| x.0);
        let mut rev_lo = node.rev_lo;
        let mut g = 0;
        while g < links.len() {
            let c = links[g].0;
            let mut h = g;
            while h < links.len() && links[h].0 == c {
                h += 1;
            }
            let size = (links[h - 1].2 - links[g].1 + 1) as usize;
            if h - g >= 2 && size >= d {
                let children = links[g..h].iter().map(|&(_, lo, hi, label)| (lo, hi, label)).collect();
                stack.push(Pending { rev_lo, children });
            }
            rev_lo += size;
            g = h;
        }
        stats.peak_pending = stats.peak_pending.max(stack.len());
    }
    stats.pairs = pairs.len();
    pairs
}
