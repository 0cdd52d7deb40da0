//! Extending a factor to the right while tracking its rows in both the
//! text's and the reversed text's suffix arrays.

use super::{NavStats, NodeMarking, SuffixTopology, WeinerLinkIndex, WlinkPath};
use crate::Symbol;

/// Rows of a factor `p` in the text's suffix array (`fwd`) and of its
/// reverse in the reversed text's suffix array (`rev`), both inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalPair {
    pub fwd: (usize, usize),
    pub rev: (usize, usize),
}

impl IntervalPair {
    /// The empty factor: every row on both sides.
    pub fn full(n: usize) -> Self {
        Self { fwd: (0, n - 1), rev: (0, n - 1) }
    }

    /// Occurrences of the factor; never zero.
    pub fn occurrences(&self) -> usize {
        self.fwd.1 - self.fwd.0 + 1
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExtendStats {
    /// Steps where every occurrence was followed by the same symbol.
    pub uniform: u64,
    /// Steps that branched in the tree.
    pub branch: u64,
    pub nav: NavStats,
    pub slow_wlinks: u64,
}

/// Appends `symbols` to the factor described by `state`.
///
/// `fwd` is the text's suffix tree with its marking. `rev` holds the
/// reversed text's tree and BWT. If the reversed rows of `p` see a single
/// preceding symbol, `p` is always followed by it and only the reversed
/// side moves (by partial rank). Otherwise `p` is a node: the forward side
/// goes to its child and the reversed side follows a Weiner link.
/// Returns `None` once the factor no longer occurs.
pub fn extend_right_run(
    fwd: &SuffixTopology,
    marking: &NodeMarking,
    rev: &WeinerLinkIndex,
    state: IntervalPair,
    symbols: &[Symbol],
    stats: &mut ExtendStats,
) -> Option<IntervalPair> {
    let rb = rev.bwt();
    let rtopo = rev.topology();
    let mut st = state;
    for &c in symbols {
        let (l, r) = st.rev;
        if rb.is_uniform(l, r) {
            if rb.access(l) != c {
                return None;
            }
            stats.uniform += 1;
            let acc = rb.acc(c);
            st.rev = (acc + rb.partial_rank(l) - 1, acc + rb.partial_rank(r) - 1);
            continue;
        }
        stats.branch += 1;
        let v = fwd.node_of_interval(st.fwd.0, st.fwd.1);
        let u = marking.child_by_label(fwd, v, c, &mut stats.nav)?;
        let y = rtopo.node_of_interval(l, r);
        let (w, path) = rev.weiner_link_path(y, c);
        if path == WlinkPath::Slow {
            stats.slow_wlinks += 1;
        }
        st.fwd = fwd.interval(u);
        st.rev = rtopo.interval(w?);
    }
    Some(st)
}
