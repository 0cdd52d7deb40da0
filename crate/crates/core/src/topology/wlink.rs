//! Weiner links on the suffix tree, with a few of them stored.

use std::collections::HashMap;
use std::sync::Arc;

use super::SuffixTopology;
use crate::rank_ext::{DistinctEntry, LocalOccurrences, RankedSeq};
use crate::Symbol;

/// Which route a Weiner link query took.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WlinkPath {
    Stored,
    /// Both boundary ranks found within `d^2` of the interval ends.
    Window,
    /// General rank queries.
    Slow,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WlinkStats {
    pub stored: u64,
    pub window: u64,
    pub slow: u64,
}

/// `wlink(v, c)` maps the node of `p` to the node of `cp`, or to the
/// highest node below it if `cp` is not right-maximal.
///
/// A link is heavy when its target has at least `d` leaves. Heavy links
/// leaving a node with two or more heavy links are stored, and so is the
/// single heavy link of a node with more than `d` links. The rest are found
/// from the ranks of `c` at both ends of the interval: when the source has
/// few light links, the extreme occurrences of `c` lie within `d^2` of the
/// ends, inside groups of `B` of width `4 d^2`.
#[derive(Clone, Debug)]
pub struct WeinerLinkIndex {
    topo: Arc<SuffixTopology>,
    b: Arc<RankedSeq>,
    d: usize,
    local: LocalOccurrences,
    stored: HashMap<(u32, Symbol), u32>,
    wspecial: usize,
    unique: usize,
}

impl WeinerLinkIndex {
    pub fn new(topo: Arc<SuffixTopology>, b: Arc<RankedSeq>, d: usize) -> Self {
        let d = d.max(1);
        let local = LocalOccurrences::new(b.as_slice(), 4 * d * d);
        let mut stored = HashMap::new();
        let (mut wspecial, mut unique) = (0, 0);
        let mut out: Vec<DistinctEntry> = Vec::new();
        let p = topo.parens();
        for v in 0..p.len() {
            if !p.is_open(v) || topo.is_leaf(v) {
                continue;
            }
            let (l, r) = topo.interval(v);
            if r - l + 1 < d {
                continue;
            }
            out.clear();
            b.range_distinct(l, r, &mut out);
            let heavy = out.iter().filter(|e| e.count >= d).count();
            let keep = heavy >= 2 || (heavy == 1 && out.len() > d);
            if !keep {
                continue;
            }
            if heavy >= 2 {
                wspecial += 1;
            } else {
                unique += 1;
            }
            for e in out.iter().filter(|e| e.count >= d) {
                let lo = b.acc(e.symbol) + e.before;
                let u = topo.node_of_interval(lo, lo + e.count - 1);
                stored.insert((v as u32, e.symbol), u as u32);
            }
        }
        Self { topo, b, d, local, stored, wspecial, unique }
    }

    pub fn topology(&self) -> &Arc<SuffixTopology> {
        &self.topo
    }

    pub fn bwt(&self) -> &Arc<RankedSeq> {
        &self.b
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Stored links (heavy links of w-special nodes plus unique links).
    pub fn stored_links(&self) -> usize {
        self.stored.len()
    }

    pub fn wspecial_nodes(&self) -> usize {
        self.wspecial
    }

    pub fn unique_links(&self) -> usize {
        self.unique
    }

    /// Rows of `c p` given the rows `[l, r]` of `p`, with the route taken.
    pub fn link_interval(&self, l: usize, r: usize, c: Symbol) -> (Option<(usize, usize)>, WlinkPath) {
        let b = &self.b;
        let w = self.d * self.d;
        let left = self.local.leftmost(c, l, r.min(l + w));
        let right = self.local.rightmost(c, r.saturating_sub(w).max(l), r);
        match (left, right) {
            (Some(x), Some(y)) => {
                let acc = b.acc(c);
                return (Some((acc + b.partial_rank(x) - 1, acc + b.partial_rank(y) - 1)), WlinkPath::Window);
            }
            (None, None) if r - l <= w => return (None, WlinkPath::Window),
            _ => {}
        }
        let lo = b.rank_before(c, l);
        let hi = b.rank(c, r);
        if hi == lo {
            return (None, WlinkPath::Slow);
        }
        let acc = b.acc(c);
        (Some((acc + lo, acc + hi - 1)), WlinkPath::Slow)
    }

    pub fn weiner_link_path(&self, v: usize, c: Symbol) -> (Option<usize>, WlinkPath) {
        if let Some(&u) = self.stored.get(&(v as u32, c)) {
            return (Some(u as usize), WlinkPath::Stored);
        }
        let (l, r) = self.topo.interval(v);
        let (iv, path) = self.link_interval(l, r, c);
        (iv.map(|(lo, hi)| self.topo.node_of_interval(lo, hi)), path)
    }

    pub fn weiner_link(&self, v: usize, c: Symbol, stats: &mut WlinkStats) -> Option<usize> {
        let (u, p) = self.weiner_link_path(v, c);
        match p {
            WlinkPath::Stored => stats.stored += 1,
            WlinkPath::Window => stats.window += 1,
            WlinkPath::Slow => stats.slow += 1,
        }
        u
    }

    pub fn size_bytes(&self) -> usize {
        self.local.size_bytes() + 12 * self.stored.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{naive_bwt, naive_sa_interval, naive_suffix_array};
    use crate::util::lg;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup(t: &[Symbol], sigma: usize) -> (Arc<SuffixTopology>, WeinerLinkIndex) {
        let b = Arc::new(RankedSeq::new(naive_bwt(t).into(), sigma));
        let topo = Arc::new(SuffixTopology::from_ranked(&b));
        let d = lg(t.len());
        let idx = WeinerLinkIndex::new(topo.clone(), b, d);
        (topo, idx)
    }

    #[test]
    fn root_links_are_first_symbol_intervals() {
        let t: Vec<Symbol> = vec![1, 2, 5, 1, 3, 1, 4, 1, 2, 5, 1, 0];
        let (topo, idx) = setup(&t, 6);
        let mut st = WlinkStats::default();
        for c in 1..6 {
            let u = idx.weiner_link(topo.root(), c, &mut st).unwrap();
            assert_eq!(topo.interval(u), naive_sa_interval(&t, &[c]).unwrap());
        }
    }

    #[test]
    fn links_match_backward_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(n, sigma) in &[(2000usize, 3u32), (2000, 20), (600, 100)] {
            let mut t: Vec<Symbol> = (0..n - 1).map(|_| rng.gen_range(1..sigma)).collect();
            t.push(0);
            let (topo, idx) = setup(&t, sigma as usize);
            let d = idx.d();
            assert!(idx.stored_links() <= 8 * n / d);
            let sa = naive_suffix_array(&t);
            let mut isa = vec![0; n];
            for (k, &p) in sa.iter().enumerate() {
                isa[p] = k;
            }
            let mut st = WlinkStats::default();
            for v in 0..topo.parens().len() {
                if !topo.parens().is_open(v) || rng.gen_range(0..4) != 0 {
                    continue;
                }
                let (l, r) = topo.interval(v);
                // Oracle: rows whose suffix is c followed (cyclically) by a
                // suffix in [l, r].
                for c in 0..sigma {
                    let rows: Vec<usize> = (0..n)
                        .filter(|&k| t[sa[k]] == c && (l..=r).contains(&isa[(sa[k] + 1) % n]))
                        .collect();
                    let got = idx.weiner_link(v, c, &mut st).map(|u| topo.interval(u));
                    let want = rows.first().map(|&f| (f, *rows.last().unwrap()));
                    assert_eq!(got, want);
                }
            }
            assert!(st.window > 0);
        }
    }
}
