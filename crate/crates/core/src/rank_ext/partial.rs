use std::sync::Arc;

use crate::bits::ChunkCounts;
use crate::util::ceil_log2;
use crate::Symbol;

const NULL: u8 = u8::MAX;

/// Constant-time partial rank: `partial_rank(i) = rank(S[i], i)`.
///
/// The sequence is cut into chunks of `width` symbols; occurrences before a
/// chunk come from [`ChunkCounts`]. Inside a chunk, a symbol occurring more
/// than `2b` times (`b = ceil(log2 width)^2`) has its offsets cut into
/// buckets of `b`. Each position stores its rank inside its bucket plus the
/// bit length `l` of the common prefix of its bucket's first and last
/// offsets. Distinct buckets of one symbol have distinct prefixes, so the
/// trie node `(2^l - 1) + (offset >> (w - l))` together with the symbol
/// identifies the bucket; a per-chunk dictionary keyed by that node maps it
/// to the bucket index.
#[derive(Clone, Debug)]
pub struct PartialRankIndex {
    seq: Arc<[Symbol]>,
    width: usize,
    bucket: usize,
    wbits: u32,
    counts: ChunkCounts,
    prefix_len: Vec<u8>,
    in_bucket: Vec<u16>,
    /// Per chunk: first node slot in `node_ptr`, or `u32::MAX` if the
    /// chunk has no bucketed symbol.
    chunk_nodes: Vec<u32>,
    /// CSR offsets into `dict`, one run of `2^(lmax+1)` slots per chunk.
    node_ptr: Vec<u32>,
    dict: Vec<(Symbol, u32)>,
    bucketed: usize,
}

impl PartialRankIndex {
    /// Chunks of `max(sigma, 2)` symbols.
    pub fn new(seq: Arc<[Symbol]>, sigma: usize) -> Self {
        Self::with_width(seq, sigma, sigma.max(2))
    }

    pub fn with_width(seq: Arc<[Symbol]>, sigma: usize, width: usize) -> Self {
        assert!(width >= 1);
        let n = seq.len();
        let counts = ChunkCounts::build(&seq, sigma, width);
        let wbits = ceil_log2(width).max(1) as u32;
        let lw = ceil_log2(width).max(1);
        let bucket = (lw * lw).min(u16::MAX as usize / 2);
        let mut prefix_len = vec![NULL; n];
        let mut in_bucket = vec![0u16; n];
        let mut chunk_nodes = Vec::with_capacity(n.div_ceil(width));
        let mut node_ptr: Vec<u32> = Vec::new();
        let mut dict = Vec::new();
        let mut bucketed = 0;
        let mut pairs: Vec<(Symbol, u32)> = Vec::with_capacity(width);
        let mut entries: Vec<(u32, Symbol, u32)> = Vec::new();
        for base in (0..n).step_by(width) {
            let chunk = &seq[base..(base + width).min(n)];
            pairs.clear();
            pairs.extend(chunk.iter().enumerate().map(|(o, &s)| (s, o as u32)));
            pairs.sort_unstable();
            entries.clear();
            let mut lmax = 0u32;
            let mut k = 0;
            while k < pairs.len() {
                let a = pairs[k].0;
                let end = k + pairs[k..].partition_point(|x| x.0 == a);
                let occ = &pairs[k..end];
                if occ.len() > 2 * bucket {
                    bucketed += occ.len();
                    for (t, bk) in occ.chunks(bucket).enumerate() {
                        let (x, y) = (bk[0].1, bk[bk.len() - 1].1);
                        let l = if x == y { wbits } else { wbits - (32 - (x ^ y).leading_zeros()) };
                        lmax = lmax.max(l);
                        let node = (1u32 << l) - 1 + (x >> (wbits - l));
                        entries.push((node, a, t as u32));
                        for (r, &(_, o)) in bk.iter().enumerate() {
                            prefix_len[base + o as usize] = l as u8;
                            in_bucket[base + o as usize] = (r + 1) as u16;
                        }
                    }
                } else {
                    for (r, &(_, o)) in occ.iter().enumerate() {
                        in_bucket[base + o as usize] = (r + 1) as u16;
                    }
                }
                k = end;
            }
            if entries.is_empty() {
                chunk_nodes.push(u32::MAX);
                continue;
            }
            chunk_nodes.push(node_ptr.len() as u32);
            entries.sort_unstable();
            let slots = (1usize << (lmax + 1)) - 1;
            let mut e = 0;
            for node in 0..slots as u32 {
                node_ptr.push(dict.len() as u32);
                while e < entries.len() && entries[e].0 == node {
                    dict.push((entries[e].1, entries[e].2));
                    e += 1;
                }
            }
            node_ptr.push(dict.len() as u32);
        }
        Self { seq, width, bucket, wbits, counts, prefix_len, in_bucket, chunk_nodes, node_ptr, dict, bucketed }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn symbols(&self) -> &Arc<[Symbol]> {
        &self.seq
    }

    #[inline]
    pub fn access(&self, i: usize) -> Symbol {
        self.seq[i]
    }

    pub fn bucket_size(&self) -> usize {
        self.bucket
    }

    /// Positions whose symbol was split into buckets in their chunk.
    pub fn bucketed_positions(&self) -> usize {
        self.bucketed
    }

    /// Index of the bucket holding position `i` inside its chunk's list of
    /// occurrences of `S[i]`, or `None` if that symbol is not bucketed.
    pub fn bucket_of(&self, i: usize) -> Option<usize> {
        let l = self.prefix_len[i];
        if l == NULL {
            return None;
        }
        let c = i / self.width;
        let off = (i % self.width) as u32;
        let l = l as u32;
        let node = ((1u32 << l) - 1 + (off >> (self.wbits - l))) as usize;
        let base = self.chunk_nodes[c] as usize;
        let (lo, hi) = (self.node_ptr[base + node] as usize, self.node_ptr[base + node + 1] as usize);
        let a = self.seq[i];
        let slot = &self.dict[lo..hi];
        let k = slot.partition_point(|x| x.0 < a);
        debug_assert!(k < slot.len() && slot[k].0 == a);
        Some(slot[k].1 as usize)
    }

    /// Occurrences of `S[i]` in `S[c * width ..= i]`, `c` being `i`'s chunk.
    #[inline]
    pub fn chunk_partial_rank(&self, i: usize) -> usize {
        let t = self.bucket_of(i).unwrap_or(0);
        t * self.bucket + self.in_bucket[i] as usize
    }

    /// `rank(S[i], i)`.
    #[inline]
    pub fn partial_rank(&self, i: usize) -> usize {
        let a = self.seq[i];
        self.counts.chunk_prefix_count(a, i / self.width) + self.chunk_partial_rank(i)
    }

    /// Whether `S[i..=j]` holds a single distinct symbol.
    #[inline]
    pub fn is_uniform(&self, i: usize, j: usize) -> bool {
        debug_assert!(i <= j);
        self.seq[i] == self.seq[j] && self.partial_rank(j) - self.partial_rank(i) == j - i
    }

    pub fn size_bytes(&self) -> usize {
        self.counts.size_bytes()
            + self.prefix_len.len()
            + 2 * self.in_bucket.len()
            + 4 * (self.chunk_nodes.len() + self.node_ptr.len())
            + 8 * self.dict.len()
    }
}
