//! Batched rank queries over a sequence that grows by batched insertions.
//!
//! The sequence is cut into chunks of `s..4s` symbols (`s = max(sigma, 64)`),
//! and every chunk into blocks of at most `cap = max(1, log_sigma(n) / 4)`
//! symbols. The blocks of a chunk form a [`LabeledList`], so the relative
//! order of two blocks is the order of their labels.
//!
//! For every symbol, a chunk keeps the block handles of its occurrences in
//! position order, cut into groups. Group heads are kept sorted by
//! `(symbol, label of first block)`. Because relabeling never reorders
//! blocks, handles stay sorted by label without being touched.
//!
//! A rank query `(a, i)` finds the block `b` holding position `i` and sums:
//! the occurrences of `a` inside `b` up to `i`; the `a`-handles whose block
//! label is strictly smaller than `b`'s (a head search plus a predecessor
//! search inside one group); and the chunk count vector for earlier chunks.
//!
//! An insertion batch rewrites the touched blocks, splits overfull ones,
//! inserts the new blocks into the chunk's list, redirects the handles of
//! symbols that moved to a new block and adds handles for the new symbols.
//! Oversized groups and chunks are split at the end of the batch, after
//! which the chunk count vectors are rebuilt.

use crate::bits::ChunkCounts;
use crate::listlabel::LabeledList;
use crate::util::{floor_log, lg};
use crate::{Error, Result, Symbol};

/// Tables larger than this many bytes are not built.
const TABLE_LIMIT: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DynParams {
    pub block_cap: usize,
    pub chunk_base: usize,
    pub group: usize,
}

impl DynParams {
    /// Parameters for a sequence expected to reach `n` symbols.
    pub fn for_sizes(n: usize, sigma: usize) -> Self {
        let l = lg(n);
        Self {
            block_cap: (floor_log(n.max(2), sigma.max(2)) / 4).max(1),
            chunk_base: sigma.max(64),
            group: (l * l).max(1),
        }
    }
}

/// Cumulative counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DynStats {
    pub inserted_symbols: u64,
    pub insert_batches: u64,
    pub initial_blocks: u64,
    /// Blocks created by splitting an overfull block.
    pub split_blocks: u64,
    /// Blocks inserted into labeled lists.
    pub list_inserts: u64,
    /// Label changes of existing blocks.
    pub relabels: u64,
    pub list_reinits: u64,
    pub chunk_splits: u64,
    pub group_splits: u64,
}

#[derive(Clone, Copy, Debug, Default)]
struct BlockMeta {
    len: u16,
    label: u64,
    prefix: u32,
    code: u64,
}

#[derive(Clone, Debug)]
struct Group {
    sym: Symbol,
    before: u32,
    blocks: Vec<u32>,
}

#[derive(Clone, Debug)]
struct Chunk {
    list: LabeledList<u32>,
    len: usize,
    groups: Vec<Group>,
    /// Group ids sorted by (symbol, label of first block).
    heads: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct DynBatchSeq {
    sigma: usize,
    n_hint: usize,
    params: DynParams,
    syms: Vec<Symbol>,
    blocks: Vec<BlockMeta>,
    free: Vec<u32>,
    chunks: Vec<Chunk>,
    starts: Vec<usize>,
    counts: ChunkCounts,
    table: Option<Vec<u8>>,
    len: usize,
    stats: DynStats,
    // Relabel/insert totals of lists already retired by chunk splits.
    retired_relabels: u64,
    retired_inserts: u64,
    retired_reinits: u64,
}

impl DynBatchSeq {
    /// Builds over `seq`; `n_hint` is the expected final length.
    pub fn new(seq: &[Symbol], sigma: usize, n_hint: usize) -> Self {
        let n_hint = n_hint.max(seq.len()).max(2);
        Self::with_params(seq, sigma, n_hint, DynParams::for_sizes(n_hint, sigma))
    }

    pub fn with_params(seq: &[Symbol], sigma: usize, n_hint: usize, params: DynParams) -> Self {
        assert!(params.block_cap >= 1 && params.block_cap <= u16::MAX as usize);
        assert!(params.chunk_base >= 1 && params.group >= 1);
        let table = build_table(sigma, params.block_cap);
        let mut s = Self {
            sigma,
            n_hint,
            params,
            syms: Vec::new(),
            blocks: Vec::new(),
            free: Vec::new(),
            chunks: Vec::new(),
            starts: vec![0],
            counts: ChunkCounts::from_triples(sigma, 1, 1, &[]),
            table,
            len: 0,
            stats: DynStats::default(),
            retired_relabels: 0,
            retired_inserts: 0,
            retired_reinits: 0,
        };
        let pieces = split_sizes(seq.len(), 2 * params.chunk_base);
        let mut off = 0;
        for p in pieces {
            let c = s.build_chunk(&seq[off..off + p]);
            s.chunks.push(c);
            off += p;
        }
        s.len = seq.len();
        s.stats.initial_blocks = s.live_blocks() as u64;
        s.refresh_global();
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn params(&self) -> DynParams {
        self.params
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    pub fn stats(&self) -> DynStats {
        let mut st = self.stats;
        st.relabels = self.retired_relabels + self.chunks.iter().map(|c| c.list.relabel_total()).sum::<u64>();
        st.list_inserts = self.retired_inserts + self.chunks.iter().map(|c| c.list.insert_total()).sum::<u64>();
        st.list_reinits = self.retired_reinits + self.chunks.iter().map(|c| c.list.reinit_count()).sum::<u64>();
        st
    }

    pub fn chunk_count(&self) -> usize {
        self.chunks.len()
    }

    pub fn live_blocks(&self) -> usize {
        self.chunks.iter().map(|c| c.list.len()).sum()
    }

    fn block_syms(&self, b: u32) -> &[Symbol] {
        let cap = self.params.block_cap;
        let m = &self.blocks[b as usize];
        &self.syms[b as usize * cap..b as usize * cap + m.len as usize]
    }

    fn alloc_block(&mut self, content: &[Symbol]) -> u32 {
        let cap = self.params.block_cap;
        let id = match self.free.pop() {
            Some(id) => id,
            None => {
                self.blocks.push(BlockMeta::default());
                self.syms.resize(self.blocks.len() * cap, 0);
                (self.blocks.len() - 1) as u32
            }
        };
        self.write_block(id, content);
        id
    }

    fn write_block(&mut self, id: u32, content: &[Symbol]) {
        let cap = self.params.block_cap;
        debug_assert!(!content.is_empty() && content.len() <= cap);
        let base = id as usize * cap;
        self.syms[base..base + content.len()].copy_from_slice(content);
        let mut code = 0u64;
        if self.table.is_some() {
            for &s in content.iter().rev() {
                code = code * self.sigma as u64 + s as u64;
            }
        }
        self.blocks[id as usize] = BlockMeta { len: content.len() as u16, label: 0, prefix: 0, code };
    }

    fn build_chunk(&mut self, seq: &[Symbol]) -> Chunk {
        let cap = self.params.block_cap;
        let mut ids = Vec::with_capacity(seq.len().div_ceil(cap));
        for piece in seq.chunks(cap) {
            ids.push(self.alloc_block(piece));
        }
        let list = LabeledList::new(ids, self.n_hint);
        // (symbol, position, block) sorted by symbol then position.
        let mut occ: Vec<(Symbol, u32, u32)> = Vec::with_capacity(seq.len());
        for (p, &s) in seq.iter().enumerate() {
            occ.push((s, p as u32, list.items()[p / cap]));
        }
        occ.sort_unstable();
        let mut groups = Vec::new();
        let mut heads = Vec::new();
        let g = self.params.group;
        let mut k = 0;
        while k < occ.len() {
            let a = occ[k].0;
            let mut before = 0;
            while k < occ.len() && occ[k].0 == a {
                let run_end = occ[k..].partition_point(|x| x.0 == a) + k;
                let end = (k + g).min(run_end);
                heads.push(groups.len() as u32);
                groups.push(Group { sym: a, before, blocks: occ[k..end].iter().map(|x| x.2).collect() });
                before += (end - k) as u32;
                k = end;
            }
        }
        let mut chunk = Chunk { list, len: seq.len(), groups, heads };
        self.refresh_blocks(&mut chunk);
        chunk
    }

    /// Copies labels into block metadata and recomputes prefixes.
    fn refresh_blocks(&mut self, chunk: &mut Chunk) {
        let mut prefix = 0u32;
        for (i, &b) in chunk.list.items().iter().enumerate() {
            let m = &mut self.blocks[b as usize];
            m.label = chunk.list.label(i);
            m.prefix = prefix;
            prefix += m.len as u32;
        }
        debug_assert_eq!(prefix as usize, chunk.len);
    }

    fn refresh_global(&mut self) {
        self.starts.clear();
        self.starts.push(0);
        let mut triples = Vec::new();
        for (ci, c) in self.chunks.iter().enumerate() {
            self.starts.push(self.starts.last().unwrap() + c.len);
            let mut h = 0;
            while h < c.heads.len() {
                let a = c.groups[c.heads[h] as usize].sym;
                let mut cnt = 0;
                while h < c.heads.len() && c.groups[c.heads[h] as usize].sym == a {
                    cnt += c.groups[c.heads[h] as usize].blocks.len();
                    h += 1;
                }
                triples.push((a, ci as u32, cnt as u32));
            }
        }
        triples.sort_unstable();
        self.counts = ChunkCounts::from_triples(self.sigma, self.params.chunk_base, self.chunks.len(), &triples);
    }

    /// Occurrences of `a` in the first `o + 1` symbols of block `b`.
    fn in_block_rank(&self, b: u32, a: Symbol, o: usize) -> usize {
        if let Some(t) = &self.table {
            let cap = self.params.block_cap;
            let code = self.blocks[b as usize].code as usize;
            return t[(code * self.sigma + a as usize) * cap + o] as usize;
        }
        self.block_syms(b)[..=o].iter().filter(|&&x| x == a).count()
    }

    fn locate_chunk(&self, pos: usize) -> usize {
        self.starts[1..].partition_point(|&s| s <= pos)
    }

    fn locate_block(&self, chunk: &Chunk, off: usize) -> (usize, u32) {
        let items = chunk.list.items();
        let i = items.partition_point(|&b| self.blocks[b as usize].prefix as usize <= off) - 1;
        (i, items[i])
    }

    /// Head index range of symbol `a` within `chunk.heads`.
    fn sym_heads(chunk: &Chunk, a: Symbol) -> (usize, usize) {
        let lo = chunk.heads.partition_point(|&g| chunk.groups[g as usize].sym < a);
        let hi = lo + chunk.heads[lo..].partition_point(|&g| chunk.groups[g as usize].sym == a);
        (lo, hi)
    }

    /// Cursor `(head index, index in group)` of the first `a`-handle whose
    /// block label is `>= l`, plus the number of `a`-handles before it.
    /// `None` if the chunk has no `a`.
    fn cursor(&self, chunk: &Chunk, a: Symbol, l: u64) -> Option<(usize, usize, usize)> {
        let (lo, hi) = Self::sym_heads(chunk, a);
        if lo == hi {
            return None;
        }
        let lab = |b: &u32| self.blocks[*b as usize].label;
        let k = lo + chunk.heads[lo..hi].partition_point(|&g| lab(&chunk.groups[g as usize].blocks[0]) < l);
        if k == lo {
            return Some((lo, 0, 0));
        }
        let g = &chunk.groups[chunk.heads[k - 1] as usize];
        let idx = g.blocks.partition_point(|b| lab(b) < l);
        Some((k - 1, idx, g.before as usize + idx))
    }

    /// Symbol at position `i`.
    pub fn access(&self, i: usize) -> Option<Symbol> {
        if i >= self.len {
            return None;
        }
        let c = self.locate_chunk(i);
        let off = i - self.starts[c];
        let (_, b) = self.locate_block(&self.chunks[c], off);
        Some(self.block_syms(b)[off - self.blocks[b as usize].prefix as usize])
    }

    pub fn to_vec(&self) -> Vec<Symbol> {
        let mut v = Vec::with_capacity(self.len);
        for c in &self.chunks {
            for &b in c.list.items() {
                v.extend_from_slice(self.block_syms(b));
            }
        }
        v
    }

    /// Inclusive ranks for a batch; `None` marks an out-of-range position.
    pub fn batch_rank(&self, queries: &[(Symbol, usize)]) -> Vec<Option<usize>> {
        let mut out = vec![None; queries.len()];
        // (chunk, symbol, block label, query, in-block count)
        let mut work: Vec<(u32, Symbol, u64, u32, u32)> = Vec::with_capacity(queries.len());
        for (q, &(a, i)) in queries.iter().enumerate() {
            if i >= self.len {
                continue;
            }
            if a as usize >= self.sigma {
                out[q] = Some(0);
                continue;
            }
            let c = self.locate_chunk(i);
            let off = i - self.starts[c];
            let (_, b) = self.locate_block(&self.chunks[c], off);
            let m = &self.blocks[b as usize];
            let r1 = self.in_block_rank(b, a, off - m.prefix as usize);
            work.push((c as u32, a, m.label, q as u32, r1 as u32));
        }
        work.sort_unstable();
        let mut k = 0;
        while k < work.len() {
            let c = work[k].0 as usize;
            let chunk = &self.chunks[c];
            let lab = |b: u32| self.blocks[b as usize].label;
            let key = |g: u32| {
                let g = &chunk.groups[g as usize];
                (g.sym, lab(g.blocks[0]))
            };
            let heads = &chunk.heads;
            let mut h = 0;
            while k < work.len() && work[k].0 as usize == c {
                let (_, a, l, q, r1) = work[k];
                // Advance to the number of heads with key strictly below (a, l).
                let mut step = 1;
                while h + step <= heads.len() && key(heads[h + step - 1]) < (a, l) {
                    h += step;
                    step *= 2;
                }
                let hi = (h + step).min(heads.len());
                h += heads[h..hi].partition_point(|&g| key(g) < (a, l));
                let mut r2 = 0;
                if h > 0 {
                    let g = &chunk.groups[heads[h - 1] as usize];
                    if g.sym == a {
                        r2 = g.before as usize + g.blocks.partition_point(|&b| lab(b) < l);
                    }
                }
                out[q as usize] = Some(self.counts.chunk_prefix_count(a, c) + r2 + r1 as usize);
                k += 1;
            }
        }
        out
    }

    pub fn rank(&self, a: Symbol, i: usize) -> Option<usize> {
        self.batch_rank(&[(a, i)])[0]
    }

    /// Inserts symbols at final positions: after the batch, symbol `s_k`
    /// sits at `p_k`. Positions must be strictly increasing.
    pub fn batch_insert(&mut self, inserts: &[(usize, Symbol)]) -> Result<()> {
        if inserts.is_empty() {
            return Ok(());
        }
        for (k, w) in inserts.windows(2).enumerate() {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidInput(format!("insert positions not increasing at batch index {}", k + 1)));
            }
        }
        let total = self.len + inserts.len();
        for &(p, s) in inserts {
            if p >= total {
                return Err(Error::OutOfRange { pos: p, len: total });
            }
            if s as usize >= self.sigma {
                return Err(Error::InvalidInput(format!("symbol {s} outside alphabet of size {}", self.sigma)));
            }
        }
        self.stats.inserted_symbols += inserts.len() as u64;
        self.stats.insert_batches += 1;
        if self.chunks.is_empty() {
            let seq: Vec<Symbol> = inserts.iter().map(|x| x.1).collect();
            for p in split_sizes(seq.len(), 2 * self.params.chunk_base).into_iter().scan(0, |o, p| {
                *o += p;
                Some((*o - p, p))
            }) {
                let c = self.build_chunk(&seq[p.0..p.0 + p.1]);
                self.chunks.push(c);
            }
            self.len = seq.len();
            self.refresh_global();
            return Ok(());
        }
        // Pre-insertion offsets, grouped by chunk.
        let mut per_chunk: Vec<(usize, Vec<(usize, Symbol)>)> = Vec::new();
        for (k, &(p, s)) in inserts.iter().enumerate() {
            let o = p - k;
            let c = if o >= self.len { self.chunks.len() - 1 } else { self.locate_chunk(o) };
            let local = o - self.starts[c];
            match per_chunk.last_mut() {
                Some((lc, v)) if *lc == c => v.push((local, s)),
                _ => per_chunk.push((c, vec![(local, s)])),
            }
        }
        let mut to_split = Vec::new();
        for (c, ins) in per_chunk {
            let mut chunk = std::mem::replace(&mut self.chunks[c], placeholder_chunk());
            self.insert_into_chunk(&mut chunk, &ins)?;
            if chunk.len > 4 * self.params.chunk_base {
                to_split.push(c);
            }
            self.chunks[c] = chunk;
        }
        self.len = total;
        for &c in to_split.iter().rev() {
            self.split_chunk(c);
        }
        self.refresh_global();
        Ok(())
    }

    fn insert_into_chunk(&mut self, chunk: &mut Chunk, ins: &[(usize, Symbol)]) -> Result<()> {
        let cap = self.params.block_cap;
        let items: Vec<u32> = chunk.list.items().to_vec();
        // Assign inserts to blocks: (list index, [(offset in block, sym)]).
        let mut per_block: Vec<(usize, Vec<(usize, Symbol)>)> = Vec::new();
        for &(o, s) in ins {
            let (bi, b) = if o >= chunk.len { (items.len() - 1, *items.last().unwrap()) } else { self.locate_block(chunk, o) };
            let x = o - self.blocks[b as usize].prefix as usize;
            match per_block.last_mut() {
                Some((lb, v)) if *lb == bi => v.push((x, s)),
                _ => per_block.push((bi, vec![(x, s)])),
            }
        }
        // Rewrite blocks. Old symbol destinations drive handle redirection;
        // new symbols are recorded as (block, offset).
        let mut list_inserts: Vec<(usize, u32)> = Vec::new();
        let mut moved: Vec<(u32, Vec<(Symbol, u32)>)> = Vec::new();
        let mut new_syms: Vec<(u32, usize, Symbol)> = Vec::new();
        for (bi, add) in per_block {
            let b = items[bi];
            let old: Vec<Symbol> = self.block_syms(b).to_vec();
            let mut merged: Vec<(Symbol, bool)> = Vec::with_capacity(old.len() + add.len());
            let mut a = add.iter().peekable();
            for (x, &s) in old.iter().enumerate() {
                while let Some(&&(ax, asym)) = a.peek() {
                    if ax != x {
                        break;
                    }
                    merged.push((asym, true));
                    a.next();
                }
                merged.push((s, false));
            }
            for &(_, asym) in a {
                merged.push((asym, true));
            }
            let pieces = split_sizes(merged.len(), cap);
            let mut ids = Vec::with_capacity(pieces.len());
            let mut off = 0;
            let mut dest: Vec<(Symbol, u32)> = Vec::new();
            for (pi, &len) in pieces.iter().enumerate() {
                let content: Vec<Symbol> = merged[off..off + len].iter().map(|x| x.0).collect();
                let id = if pi == 0 {
                    self.write_block(b, &content);
                    b
                } else {
                    let id = self.alloc_block(&content);
                    list_inserts.push((bi + 1, id));
                    id
                };
                for (x, &(s, is_new)) in merged[off..off + len].iter().enumerate() {
                    if is_new {
                        new_syms.push((id, x, s));
                    } else {
                        dest.push((s, id));
                    }
                }
                ids.push(id);
                off += len;
            }
            self.stats.split_blocks += (pieces.len() - 1) as u64;
            if pieces.len() > 1 {
                moved.push((b, dest));
            }
        }
        chunk.len += ins.len();
        if !list_inserts.is_empty() {
            chunk.list.batch_insert(list_inserts)?;
        }
        self.refresh_blocks(chunk);

        // Redirect handles of old symbols that left a split block.
        for (b, dest) in moved {
            let lb = self.blocks[b as usize].label;
            let mut seen: Vec<Symbol> = dest.iter().map(|x| x.0).collect();
            seen.sort_unstable();
            seen.dedup();
            for a in seen {
                let (_, hi) = Self::sym_heads(chunk, a);
                let (mut h, mut idx, _) = self.cursor(chunk, a, lb).expect("symbol has handles");
                for &(_, d) in dest.iter().filter(|x| x.0 == a) {
                    while idx == chunk.groups[chunk.heads[h] as usize].blocks.len() {
                        h += 1;
                        idx = 0;
                        debug_assert!(h < hi);
                    }
                    let g = &mut chunk.groups[chunk.heads[h] as usize];
                    debug_assert_eq!(g.blocks[idx], b);
                    g.blocks[idx] = d;
                    idx += 1;
                }
            }
        }
        // Handles for new symbols, in position order.
        for (blk, x, a) in new_syms {
            let lb = self.blocks[blk as usize].label;
            let skip = self.block_syms(blk)[..x].iter().filter(|&&s| s == a).count();
            match self.cursor(chunk, a, lb) {
                None => {
                    let (lo, _) = Self::sym_heads(chunk, a);
                    chunk.heads.insert(lo, chunk.groups.len() as u32);
                    chunk.groups.push(Group { sym: a, before: 0, blocks: vec![blk] });
                }
                Some((mut h, mut idx, _)) => {
                    let mut c = skip;
                    loop {
                        let len = chunk.groups[chunk.heads[h] as usize].blocks.len();
                        if idx + c <= len {
                            break;
                        }
                        c -= len - idx;
                        h += 1;
                        idx = 0;
                    }
                    chunk.groups[chunk.heads[h] as usize].blocks.insert(idx + c, blk);
                }
            }
        }
        self.split_groups(chunk);
        Ok(())
    }

    fn split_groups(&mut self, chunk: &mut Chunk) {
        let g = self.params.group;
        let mut heads = Vec::with_capacity(chunk.heads.len());
        for hi in 0..chunk.heads.len() {
            let gid = chunk.heads[hi] as usize;
            heads.push(gid as u32);
            if chunk.groups[gid].blocks.len() > 2 * g {
                let all = std::mem::take(&mut chunk.groups[gid].blocks);
                let sym = chunk.groups[gid].sym;
                let mut parts = split_sizes(all.len(), g).into_iter();
                let first = parts.next().unwrap();
                chunk.groups[gid].blocks = all[..first].to_vec();
                let mut off = first;
                for len in parts {
                    heads.push(chunk.groups.len() as u32);
                    chunk.groups.push(Group { sym, before: 0, blocks: all[off..off + len].to_vec() });
                    off += len;
                    self.stats.group_splits += 1;
                }
            }
        }
        chunk.heads = heads;
        let mut prev = None;
        let mut before = 0u32;
        for &gid in &chunk.heads {
            let g = &mut chunk.groups[gid as usize];
            if prev != Some(g.sym) {
                before = 0;
                prev = Some(g.sym);
            }
            g.before = before;
            before += g.blocks.len() as u32;
        }
    }

    fn split_chunk(&mut self, c: usize) {
        let chunk = std::mem::replace(&mut self.chunks[c], placeholder_chunk());
        let mut seq = Vec::with_capacity(chunk.len);
        for &b in chunk.list.items() {
            seq.extend_from_slice(self.block_syms(b));
            self.free.push(b);
        }
        self.retired_relabels += chunk.list.relabel_total();
        self.retired_inserts += chunk.list.insert_total();
        self.retired_reinits += chunk.list.reinit_count();
        let mut fresh = Vec::new();
        let mut off = 0;
        for p in split_sizes(seq.len(), 2 * self.params.chunk_base) {
            fresh.push(self.build_chunk(&seq[off..off + p]));
            off += p;
        }
        self.stats.chunk_splits += 1;
        self.chunks.splice(c..=c, fresh);
    }

    /// Checks structural invariants; returns a description of the first
    /// violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let cap = self.params.block_cap;
        let mut total = 0;
        for (ci, c) in self.chunks.iter().enumerate() {
            if c.list.labels().windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("chunk {ci}: labels not increasing"));
            }
            let mut prefix = 0;
            let mut occ: std::collections::BTreeMap<Symbol, Vec<u32>> = Default::default();
            for (i, &b) in c.list.items().iter().enumerate() {
                let m = &self.blocks[b as usize];
                if m.len == 0 || m.len as usize > cap {
                    return Err(format!("chunk {ci}: block {b} has size {}", m.len));
                }
                if m.label != c.list.label(i) || m.prefix as usize != prefix {
                    return Err(format!("chunk {ci}: stale metadata in block {b}"));
                }
                for &s in self.block_syms(b) {
                    occ.entry(s).or_default().push(b);
                }
                prefix += m.len as usize;
            }
            if prefix != c.len {
                return Err(format!("chunk {ci}: length {} but blocks hold {prefix}", c.len));
            }
            total += prefix;
            let mut handles: std::collections::BTreeMap<Symbol, Vec<u32>> = Default::default();
            let mut prev_key = None;
            for &gid in &c.heads {
                let g = &c.groups[gid as usize];
                let key = (g.sym, self.blocks[g.blocks[0] as usize].label);
                if prev_key.is_some_and(|p| p > key) {
                    return Err(format!("chunk {ci}: heads out of order"));
                }
                prev_key = Some(key);
                let v = handles.entry(g.sym).or_default();
                if g.before as usize != v.len() {
                    return Err(format!("chunk {ci}: wrong partial rank on group of {}", g.sym));
                }
                v.extend_from_slice(&g.blocks);
            }
            if handles != occ {
                return Err(format!("chunk {ci}: handles do not match block contents"));
            }
        }
        if total != self.len {
            return Err("total length mismatch".into());
        }
        Ok(())
    }

    /// `(all lists increasing, smallest gap over lists still within their
    /// batch budget)`.
    pub fn label_health(&self) -> (bool, Option<u64>) {
        let mut inc = true;
        let mut gap: Option<u64> = None;
        for c in &self.chunks {
            inc &= c.list.labels().windows(2).all(|w| w[0] < w[1]);
            if c.list.batch_count() <= c.list.max_batches() {
                let g = c.list.min_gap();
                gap = Some(gap.map_or(g, |x| x.min(g)));
            }
        }
        (inc, gap)
    }

    /// Largest number of batches applied to any list since its last full
    /// relabel.
    pub fn max_list_batches(&self) -> usize {
        self.chunks.iter().map(|c| c.list.batch_count()).max().unwrap_or(0)
    }

    pub fn size_bytes(&self) -> usize {
        let handles: usize = self.chunks.iter().map(|c| c.groups.iter().map(|g| 4 * g.blocks.len() + 32).sum::<usize>() + 4 * c.heads.len() + 16 * c.list.len()).sum();
        4 * self.syms.len() + 32 * self.blocks.len() + handles + self.counts.size_bytes() + self.table.as_ref().map_or(0, |t| t.len())
    }
}

fn placeholder_chunk() -> Chunk {
    Chunk { list: LabeledList::new(Vec::new(), 1), len: 0, groups: Vec::new(), heads: Vec::new() }
}

/// Splits `n` into `ceil(n / max)` near-equal parts, none larger than `max`.
fn split_sizes(n: usize, max: usize) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let k = n.div_ceil(max);
    (0..k).map(|i| n / k + usize::from(i < n % k)).collect()
}

/// `table[(code * sigma + a) * cap + o]` = occurrences of `a` in the first
/// `o + 1` symbols of the block whose base-`sigma` code is `code`.
fn build_table(sigma: usize, cap: usize) -> Option<Vec<u8>> {
    let codes = (sigma as u128).checked_pow(cap as u32)?;
    let size = codes * sigma as u128 * cap as u128;
    if size > TABLE_LIMIT as u128 || cap > u8::MAX as usize {
        return None;
    }
    let codes = codes as usize;
    let mut t = vec![0u8; size as usize];
    let mut digits = vec![0usize; cap];
    for code in 0..codes {
        let mut x = code;
        for d in digits.iter_mut() {
            *d = x % sigma;
            x /= sigma;
        }
        for a in 0..sigma {
            let mut cnt = 0u8;
            for (o, &d) in digits.iter().enumerate() {
                cnt += u8::from(d == a);
                t[(code * sigma + a) * cap + o] = cnt;
            }
        }
    }
    Some(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_rank;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn check_all(d: &DynBatchSeq, reference: &[Symbol]) {
        assert_eq!(d.to_vec(), reference);
        d.check_invariants().unwrap();
        let qs: Vec<(Symbol, usize)> = (0..reference.len()).flat_map(|i| (0..d.sigma() as Symbol).map(move |a| (a, i))).collect();
        let got = d.batch_rank(&qs);
        for (&(a, i), g) in qs.iter().zip(got) {
            assert_eq!(g, Some(naive_rank(reference, a, i)), "rank({a}, {i})");
        }
    }

    #[test]
    fn abracadabra_ranks() {
        let t: Vec<Symbol> = vec![1, 2, 5, 1, 3, 1, 4, 1, 2, 5, 1];
        let d = DynBatchSeq::with_params(&t, 6, 100, DynParams { block_cap: 2, chunk_base: 3, group: 2 });
        assert_eq!(d.rank(1, 6), Some(3));
        assert_eq!(d.rank(1, 11), None);
        check_all(&d, &t);
    }

    #[test]
    fn inserts_at_final_positions() {
        let mut d = DynBatchSeq::with_params(&[1, 1, 1], 4, 64, DynParams { block_cap: 2, chunk_base: 4, group: 1 });
        d.batch_insert(&[(0, 2), (2, 3), (5, 2)]).unwrap();
        check_all(&d, &[2, 1, 3, 1, 1, 2]);
        assert!(d.batch_insert(&[(3, 1), (3, 2)]).is_err());
        assert!(d.batch_insert(&[(7, 1)]).is_err());
    }

    #[test]
    fn grows_from_empty() {
        let mut d = DynBatchSeq::new(&[], 3, 100);
        d.batch_insert(&[(0, 2), (1, 1)]).unwrap();
        check_all(&d, &[2, 1]);
    }

    #[test]
    fn table_lookup_matches_scan() {
        let t = build_table(3, 2).unwrap();
        // Block [2, 0]: code 2 + 0 * 3 = 2.
        assert_eq!(t[(2 * 3 + 2) * 2], 1);
        assert_eq!(t[(2 * 3) * 2 + 1], 1);
        assert!(build_table(1 << 12, 3).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn random_batches_match_reference(
            seed in any::<u64>(),
            sigma in 2usize..12,
            cap in 1usize..5,
            chunk_base in 2usize..20,
            group in 1usize..6,
            init in 0usize..60,
        ) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut reference: Vec<Symbol> = (0..init).map(|_| rng.gen_range(0..sigma as Symbol)).collect();
            let mut d = DynBatchSeq::with_params(&reference, sigma, 400, DynParams { block_cap: cap, chunk_base, group });
            for _ in 0..6 {
                let m = rng.gen_range(0..=reference.len() + 3);
                let total = reference.len() + m;
                let mut pos: Vec<usize> = rand::seq::index::sample(&mut rng, total, m).into_vec();
                pos.sort_unstable();
                let ins: Vec<(usize, Symbol)> = pos.iter().map(|&p| (p, rng.gen_range(0..sigma as Symbol))).collect();
                let mut next = Vec::with_capacity(total);
                let mut it = ins.iter().peekable();
                let mut old = reference.iter();
                for p in 0..total {
                    if it.peek().is_some_and(|x| x.0 == p) {
                        next.push(it.next().unwrap().1);
                    } else {
                        next.push(*old.next().unwrap());
                    }
                }
                reference = next;
                d.batch_insert(&ins).unwrap();
                prop_assert_eq!(d.to_vec(), reference.clone());
                prop_assert_eq!(d.check_invariants(), Ok(()));
                let qs: Vec<(Symbol, usize)> = (0..40).map(|_| (rng.gen_range(0..sigma as Symbol), rng.gen_range(0..total + 2))).collect();
                for (&(a, i), g) in qs.iter().zip(d.batch_rank(&qs)) {
                    if i >= total {
                        prop_assert_eq!(g, None);
                    } else {
                        prop_assert_eq!(g, Some(naive_rank(&reference, a, i)));
                    }
                }
            }
        }
    }
}
