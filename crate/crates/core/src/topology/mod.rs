//! Suffix tree topology as balanced parentheses, built from a BWT.
//!
//! Internal nodes are found by walking Weiner links from the root: if a node
//! for `p` has children `u_1..u_k` (the intervals of `p a_1 .. p a_k`), the
//! distinct symbols `c` of `B` inside each child interval give the intervals
//! of `c p a_i`, and `c p` is a node exactly when `c` shows up below two or
//! more children. Each internal node is reached once, from its suffix link.
//! Sorting the intervals by `(left asc, right desc)` and interleaving the
//! leaves gives the parentheses in preorder.
//!
//! Besides navigation, the topology keeps the first symbol of every child
//! edge: `L` lists them node by node in preorder, sorted within a node, and
//! `D = 1^{deg_0} 0 1^{deg_1} 0 ...` delimits the nodes.

mod bp;
mod extend;
mod marking;
mod wlink;

use std::sync::Arc;

pub use bp::Parens;
pub use extend::{extend_right_run, ExtendStats, IntervalPair};
pub use marking::{ChildPath, NavStats, NodeMarking};
pub use wlink::{WeinerLinkIndex, WlinkPath};

use crate::bits::{BitVector, BitVectorBuilder, GeneralSeq};
use crate::rank_ext::{DistinctEntry, RankedSeq};
use crate::{Error, Result, Symbol};

/// Work done while enumerating internal nodes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub internal_nodes: usize,
    /// Weiner links (explicit or implicit) reported by range-distinct calls.
    pub wlinks: usize,
    /// Range-extreme probes spent inside range-distinct calls.
    pub probes: usize,
    /// Largest number of pending nodes held at once.
    pub peak_pending: usize,
}

#[derive(Clone, Debug)]
pub struct SuffixTopology {
    parens: Parens,
    /// Set at the opening parenthesis of every leaf.
    leaves: BitVector,
    labels: GeneralSeq,
    degrees: BitVector,
    stats: EnumStats,
}

struct Pending {
    l: u32,
    r: u32,
    /// Child intervals in order, with edge labels.
    children: Vec<(u32, u32, Symbol)>,
}

/// Checks that `bwt` is the BWT of a text with a unique sentinel: one `0`
/// and LF forming a single cycle.
pub fn validate_bwt(b: &RankedSeq) -> Result<()> {
    let n = b.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty BWT".into()));
    }
    if b.stats().count(0) != 1 {
        return Err(Error::InvalidInput("BWT must hold exactly one sentinel".into()));
    }
    let mut r = 0;
    for step in 1..=n {
        r = b.lf(r);
        if r == 0 && step < n {
            return Err(Error::InvalidInput("BWT is not the transform of a single text".into()));
        }
    }
    if r != 0 {
        return Err(Error::InvalidInput("BWT is not the transform of a single text".into()));
    }
    Ok(())
}

/// Builds the topology of the suffix tree whose BWT is `bwt`.
pub fn build_topology(bwt: &[Symbol], sigma: usize) -> Result<SuffixTopology> {
    if let Some(&m) = bwt.iter().max() {
        if m as usize >= sigma {
            return Err(Error::InvalidInput(format!("symbol {m} outside alphabet of size {sigma}")));
        }
    }
    let b = RankedSeq::new(Arc::from(bwt), sigma);
    validate_bwt(&b)?;
    Ok(SuffixTopology::from_ranked(&b))
}

impl SuffixTopology {
    /// Builds from an already indexed BWT (not validated).
    pub fn from_ranked(b: &RankedSeq) -> Self {
        let n = b.len();
        let mut stats = EnumStats::default();
        let root_children: Vec<(u32, u32, Symbol)> = (0..b.sigma() as Symbol)
            .filter(|&a| b.stats().count(a) > 0)
            .map(|a| (b.acc(a) as u32, (b.acc(a) + b.stats().count(a) - 1) as u32, a))
            .collect();
        let mut stack = vec![Pending { l: 0, r: n as u32 - 1, children: root_children }];
        // (l, r, label offset, degree)
        let mut nodes: Vec<(u32, u32, u32, u32)> = Vec::new();
        let mut flat: Vec<Symbol> = Vec::new();
        let mut out: Vec<DistinctEntry> = Vec::new();
        let mut links: Vec<(Symbol, u32, u32, u32, Symbol)> = Vec::new();
        let mut fresh: Vec<Pending> = Vec::new();
        while let Some(p) = stack.pop() {
            nodes.push((p.l, p.r, flat.len() as u32, p.children.len() as u32));
            flat.extend(p.children.iter().map(|c| c.2));
            links.clear();
            for (idx, &(cl, cr, lab)) in p.children.iter().enumerate() {
                out.clear();
                stats.probes += b.range_distinct(cl as usize, cr as usize, &mut out);
                for e in &out {
                    let lo = b.acc(e.symbol) + e.before;
                    links.push((e.symbol, idx as u32, lo as u32, (lo + e.count - 1) as u32, lab));
                }
            }
            stats.wlinks += links.len();
            links.sort_unstable_by_key(|x| (x.0, x.1));
            let mut k = 0;
            while k < links.len() {
                let c = links[k].0;
                let end = k + links[k..].partition_point(|x| x.0 == c);
                if end - k >= 2 {
                    fresh.push(Pending {
                        l: links[k].2,
                        r: links[end - 1].3,
                        children: links[k..end].iter().map(|x| (x.2, x.3, x.4)).collect(),
                    });
                }
                k = end;
            }
            // Largest last, so that it is processed after the others.
            fresh.sort_unstable_by_key(|q| std::cmp::Reverse(q.r - q.l));
            stack.append(&mut fresh);
            stats.peak_pending = stats.peak_pending.max(stack.len());
        }
        stats.internal_nodes = nodes.len();
        nodes.sort_unstable_by_key(|x| (x.0, std::cmp::Reverse(x.1)));

        let mut bp = BitVectorBuilder::with_capacity(2 * (n + nodes.len()));
        let mut leaf_bits = BitVectorBuilder::with_capacity(2 * (n + nodes.len()));
        let mut labels = Vec::with_capacity(flat.len());
        let mut degrees = BitVectorBuilder::with_capacity(flat.len() + nodes.len());
        let mut open: Vec<u32> = Vec::new();
        let mut k = 0;
        for row in 0..n as u32 {
            while k < nodes.len() && nodes[k].0 == row {
                let (_, r, off, deg) = nodes[k];
                bp.push(true);
                leaf_bits.push(false);
                open.push(r);
                labels.extend_from_slice(&flat[off as usize..(off + deg) as usize]);
                degrees.push_run(true, deg as usize);
                degrees.push(false);
                k += 1;
            }
            bp.push(true);
            bp.push(false);
            leaf_bits.push(true);
            leaf_bits.push(false);
            while open.last() == Some(&row) {
                open.pop();
                bp.push(false);
                leaf_bits.push(false);
            }
        }
        debug_assert!(open.is_empty());
        let sigma = b.sigma();
        Self {
            parens: Parens::new(bp.finish()),
            leaves: leaf_bits.finish(),
            labels: GeneralSeq::from_slice(&labels, sigma),
            degrees: degrees.finish(),
            stats,
        }
    }

    pub fn parens(&self) -> &Parens {
        &self.parens
    }

    /// Parentheses as booleans (`true` opens).
    pub fn bp(&self) -> Vec<bool> {
        (0..self.parens.len()).map(|i| self.parens.is_open(i)).collect()
    }

    pub fn stats(&self) -> EnumStats {
        self.stats
    }

    pub fn n_leaves(&self) -> usize {
        self.leaves.count_ones()
    }

    pub fn node_count(&self) -> usize {
        self.parens.len() / 2
    }

    pub fn internal_count(&self) -> usize {
        self.node_count() - self.n_leaves()
    }

    pub fn root(&self) -> usize {
        0
    }

    #[inline]
    pub fn is_leaf(&self, v: usize) -> bool {
        self.leaves.get(v)
    }

    #[inline]
    pub fn close(&self, v: usize) -> usize {
        if self.is_leaf(v) {
            v + 1
        } else {
            self.parens.find_close(v)
        }
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parens.enclose(v)
    }

    pub fn lca(&self, u: usize, v: usize) -> usize {
        self.parens.lca(u, v)
    }

    /// Tree depth; the root has depth 1.
    pub fn tree_depth(&self, v: usize) -> usize {
        self.parens.excess(v) as usize
    }

    /// Leaf of suffix-array row `row`.
    #[inline]
    pub fn leaf(&self, row: usize) -> usize {
        self.leaves.select1(row + 1).expect("row in range")
    }

    /// Suffix-array rows covered by `v`, inclusive.
    #[inline]
    pub fn interval(&self, v: usize) -> (usize, usize) {
        let l = self.leaves.rank1_before(v);
        if self.is_leaf(v) {
            return (l, l);
        }
        (l, self.leaves.rank1_before(self.close(v)) - 1)
    }

    pub fn leaf_count(&self, v: usize) -> usize {
        let (l, r) = self.interval(v);
        r - l + 1
    }

    pub fn leftmost_leaf(&self, v: usize) -> usize {
        self.leaf(self.interval(v).0)
    }

    pub fn rightmost_leaf(&self, v: usize) -> usize {
        self.leaf(self.interval(v).1)
    }

    /// Highest node whose interval is exactly `[l, r]`, or the lowest one
    /// containing it if no node matches.
    pub fn node_of_interval(&self, l: usize, r: usize) -> usize {
        if l == r {
            return self.leaf(l);
        }
        self.lca(self.leaf(l), self.leaf(r))
    }

    pub fn degree(&self, v: usize) -> usize {
        if self.is_leaf(v) {
            return 0;
        }
        let c = self.close(v);
        self.parens.range_min(v + 1, c - 1).1 as usize
    }

    /// `k`-th child (0-based).
    pub fn child(&self, v: usize, k: usize) -> Option<usize> {
        if self.is_leaf(v) {
            return None;
        }
        if k == 0 {
            return Some(v + 1);
        }
        let c = self.close(v);
        let (m, cnt) = self.parens.range_min(v + 1, c - 1);
        if k >= cnt as usize {
            return None;
        }
        self.parens.select_min(v + 1, c - 1, m, k as u32).map(|p| p + 1)
    }

    /// Number of earlier siblings of `v`.
    pub fn child_rank(&self, v: usize) -> usize {
        let p = match self.parent(v) {
            Some(p) => p,
            None => return 0,
        };
        if v == p + 1 {
            return 0;
        }
        let d = self.parens.excess(p);
        let (m, cnt) = self.parens.range_min(p + 1, v - 1);
        if m == d {
            cnt as usize
        } else {
            0
        }
    }

    /// Preorder rank of an internal node among internal nodes.
    #[inline]
    pub fn internal_rank(&self, v: usize) -> usize {
        self.parens.bits().rank1_before(v) - self.leaves.rank1_before(v)
    }

    /// Start of internal node `x`'s labels in `L`.
    #[inline]
    pub fn label_start(&self, x: usize) -> usize {
        if x == 0 {
            0
        } else {
            self.degrees.select0(x).expect("node rank in range") + 1 - x
        }
    }

    /// Edge labels of the children of internal node `v`, in order.
    pub fn child_labels(&self, v: usize) -> &[Symbol] {
        let x = self.internal_rank(v);
        let (s, e) = (self.label_start(x), self.label_start(x + 1));
        &self.labels.as_slice()[s..e]
    }

    /// The child label sequence `L`.
    pub fn labels(&self) -> &GeneralSeq {
        &self.labels
    }

    /// The degree sequence `D`.
    pub fn degrees(&self) -> &BitVector {
        &self.degrees
    }

    /// Child of `v` whose edge starts with `a`, by binary search over the
    /// node's labels; returns the child index and node.
    pub fn child_by_label_search(&self, v: usize, a: Symbol) -> Option<(usize, usize)> {
        if self.is_leaf(v) {
            return None;
        }
        let k = self.child_labels(v).binary_search(&a).ok()?;
        Some((k, self.child(v, k)?))
    }

    pub fn size_bytes(&self) -> usize {
        self.parens.size_bytes() + self.leaves.size_bytes() + self.labels.size_bytes() + self.degrees.size_bytes()
    }
}
