//! Heavy/light/special marking and child lookup by edge label.

use std::collections::HashMap;

use super::SuffixTopology;
use crate::bits::{BitVector, BitVectorBuilder};
use crate::Symbol;

/// Which route a child lookup took.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChildPath {
    /// Heavy child of a special node, from its dictionary.
    Dict,
    /// Node with at most `d + 1` children, scanned directly.
    Small,
    /// The single heavy child stored in a non-special node.
    Stored,
    /// Light child of a heavy node with many children: binary search.
    Slow,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NavStats {
    pub dict: u64,
    pub small: u64,
    pub stored: u64,
    pub slow: u64,
}

impl NavStats {
    fn record(&mut self, p: ChildPath) {
        match p {
            ChildPath::Dict => self.dict += 1,
            ChildPath::Small => self.small += 1,
            ChildPath::Stored => self.stored += 1,
            ChildPath::Slow => self.slow += 1,
        }
    }
}

/// A node is heavy when it has at least `d` leaves and special when it is
/// heavy with two or more heavy children. Special nodes keep a dictionary
/// of their heavy children; a non-special heavy node with more than `d + 1`
/// children keeps the index of its heavy child if it has one.
#[derive(Clone, Debug)]
pub struct NodeMarking {
    d: usize,
    /// Indexed by internal preorder rank.
    heavy: BitVector,
    special: BitVector,
    dict: HashMap<(u32, Symbol), u32>,
    stored: HashMap<u32, (Symbol, u32)>,
}

impl NodeMarking {
    pub fn new(topo: &SuffixTopology, d: usize) -> Self {
        let d = d.max(1);
        let mut heavy = BitVectorBuilder::with_capacity(topo.internal_count());
        let mut special = BitVectorBuilder::with_capacity(topo.internal_count());
        let mut dict = HashMap::new();
        let mut stored = HashMap::new();
        let p = topo.parens();
        let mut heavy_kids: Vec<(usize, Symbol)> = Vec::new();
        for v in 0..p.len() {
            if !p.is_open(v) || topo.is_leaf(v) {
                continue;
            }
            let x = topo.internal_rank(v) as u32;
            let is_heavy = topo.leaf_count(v) >= d;
            heavy.push(is_heavy);
            heavy_kids.clear();
            let labels = topo.child_labels(v);
            if is_heavy {
                let mut c = v + 1;
                for (k, &a) in labels.iter().enumerate() {
                    if topo.leaf_count(c) >= d {
                        heavy_kids.push((k, a));
                    }
                    c = topo.close(c) + 1;
                }
            }
            let is_special = heavy_kids.len() >= 2;
            special.push(is_special);
            if is_special {
                for &(k, a) in &heavy_kids {
                    dict.insert((x, a), k as u32);
                }
            } else if heavy_kids.len() == 1 && labels.len() > d + 1 {
                stored.insert(x, (heavy_kids[0].1, heavy_kids[0].0 as u32));
            }
        }
        Self { d, heavy: heavy.finish(), special: special.finish(), dict, stored }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_heavy(&self, topo: &SuffixTopology, v: usize) -> bool {
        if topo.is_leaf(v) {
            return self.d <= 1;
        }
        self.heavy.get(topo.internal_rank(v))
    }

    pub fn is_special(&self, topo: &SuffixTopology, v: usize) -> bool {
        !topo.is_leaf(v) && self.special.get(topo.internal_rank(v))
    }

    pub fn special_count(&self) -> usize {
        self.special.count_ones()
    }

    /// Heavy children kept in dictionaries.
    pub fn dict_entries(&self) -> usize {
        self.dict.len()
    }

    /// Non-special nodes with a stored heavy child.
    pub fn stored_count(&self) -> usize {
        self.stored.len()
    }

    /// Child of `v` whose edge starts with `a`, with the route taken.
    pub fn child_by_label_path(&self, topo: &SuffixTopology, v: usize, a: Symbol) -> (Option<usize>, ChildPath) {
        if topo.is_leaf(v) {
            return (None, ChildPath::Small);
        }
        let x = topo.internal_rank(v) as u32;
        if self.special.get(x as usize) {
            if let Some(&k) = self.dict.get(&(x, a)) {
                return (topo.child(v, k as usize), ChildPath::Dict);
            }
        }
        let labels = topo.child_labels(v);
        if labels.len() <= self.d + 1 {
            let k = labels.iter().position(|&b| b == a);
            return (k.and_then(|k| topo.child(v, k)), ChildPath::Small);
        }
        if let Some(&(b, k)) = self.stored.get(&x) {
            if b == a {
                return (topo.child(v, k as usize), ChildPath::Stored);
            }
        }
        let k = labels.binary_search(&a).ok();
        (k.and_then(|k| topo.child(v, k)), ChildPath::Slow)
    }

    pub fn child_by_label(&self, topo: &SuffixTopology, v: usize, a: Symbol, stats: &mut NavStats) -> Option<usize> {
        let (c, p) = self.child_by_label_path(topo, v, a);
        stats.record(p);
        c
    }

    pub fn size_bytes(&self) -> usize {
        self.heavy.size_bytes() + self.special.size_bytes() + 12 * self.dict.len() + 12 * self.stored.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_bwt;
    use crate::topology::build_topology;
    use crate::util::lg;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lookups_agree_with_search_and_budget_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(n, sigma) in &[(3000usize, 3u32), (3000, 40), (800, 200)] {
            let mut t: Vec<Symbol> = (0..n - 1).map(|_| rng.gen_range(1..sigma)).collect();
            t.push(0);
            let topo = build_topology(&naive_bwt(&t), sigma as usize).unwrap();
            let d = lg(n);
            let m = NodeMarking::new(&topo, d);
            assert!(m.special_count() + m.stored_count() <= 4 * n / d);
            let mut stats = NavStats::default();
            for v in 0..topo.parens().len() {
                if !topo.parens().is_open(v) || topo.is_leaf(v) {
                    continue;
                }
                for a in 0..sigma {
                    let want = topo.child_by_label_search(v, a).map(|x| x.1);
                    assert_eq!(m.child_by_label(&topo, v, a, &mut stats), want);
                }
                if m.is_special(&topo, v) {
                    assert!(m.is_heavy(&topo, v));
                }
            }
            assert!(stats.small > 0);
        }
    }

    /// Walking down any root-to-leaf path needs at most one slow lookup.
    #[test]
    fn one_slow_step_per_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 4000;
        let mut t: Vec<Symbol> = (0..n - 1).map(|_| rng.gen_range(1..60)).collect();
        t.push(0);
        let topo = build_topology(&naive_bwt(&t), 60).unwrap();
        let m = NodeMarking::new(&topo, lg(n));
        for row in (0..n).step_by(37) {
            let leaf = topo.leaf(row);
            let mut path = vec![leaf];
            while let Some(p) = topo.parent(*path.last().unwrap()) {
                path.push(p);
            }
            path.reverse();
            let mut stats = NavStats::default();
            for w in path.windows(2) {
                let k = topo.child_rank(w[1]);
                let a = topo.child_labels(w[0])[k];
                assert_eq!(m.child_by_label(&topo, w[0], a, &mut stats), Some(w[1]));
            }
            assert!(stats.slow <= 1);
        }
    }
}
