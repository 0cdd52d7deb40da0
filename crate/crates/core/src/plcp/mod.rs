//! Permuted LCP array: `PLCP[i]` is the length of the longest common prefix
//! of `T[i..]` and the suffix right before it in sorted order.
//!
//! Values are computed left to right by keeping, for the current position
//! `k`, the rows of `Y_k = T[k..k + l_k]` in both the text's and the
//! reversed text's suffix arrays. `Y_k` is shared with the preceding
//! suffix and then branches, so it is a node of the suffix tree. Dropping
//! its first symbol gives a node again, and `l_{k+1}` is found by extending
//! that node to the right until the interval starts at the row of
//! `T[k+1..]`.
//!
//! The work is split in three stages:
//!
//! 1. Every `delta'`-th value is found by comparing the text directly with
//!    the preceding suffix, whose position comes from an LF walk to the
//!    nearest sample. The pairs of the sampled `Y` are then obtained by
//!    contracting and extending from one sample to the next.
//! 2. Each gap between samples is a job. Jobs run round-robin and park on
//!    the rank queries of their right extensions; a pool of queries is
//!    answered with one batch once it is full.
//! 3. When too few jobs remain to fill the pools, the unknown values are
//!    finished with the stage-1 method.

mod bits;
mod jobs;

use std::sync::Arc;

pub use bits::PlcpBits;

use crate::bwt::{build_bwt, reverse_text, SuffixSamples};
use crate::rank_ext::RankedSeq;
use crate::topology::{extend_right_run, ExtendStats, IntervalPair, NodeMarking, SuffixTopology, WeinerLinkIndex};
use crate::util::{check_text, floor_log, lg};
use crate::{Result, Symbol};

/// Spacing of the stage-1 samples: `delta * ceil(log2 log2 max(sigma, 4))`
/// with `delta = max(1, floor(log_sigma n))`.
pub fn delta_prime(n: usize, sigma: usize) -> usize {
    let delta = floor_log(n.max(1), sigma.max(2)).max(1);
    let ll = crate::util::ceil_log2(crate::util::ceil_log2(sigma.max(4)));
    (delta * ll).max(1)
}

/// Size at which a query pool is answered: `max(2, n / lg(n)^2)`.
pub fn pool_capacity(n: usize) -> usize {
    let l = lg(n);
    (n / (l * l)).max(2)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlcpStats {
    pub delta_prime: usize,
    pub anchors: usize,
    pub jobs: usize,
    pub pool_capacity: usize,
    pub stage2_ran: bool,
    /// Symbol comparisons of the stage-1 scans.
    pub stage1_scanned: usize,
    pub stage2_values: usize,
    pub stage3_values: usize,
    pub stage3_scanned: usize,
    /// LF steps spent locating preceding suffixes in stages 1 and 3.
    pub lf_steps: usize,
    pub contracts: usize,
    /// Right extensions done by stage-2 jobs.
    pub extends: usize,
    pub rev_queries: usize,
    pub label_queries: usize,
    pub label_flushes: usize,
    pub rev_flushes: usize,
    /// Flushes answered with fewer queries than the capacity.
    pub short_flushes: usize,
    pub peak_pool: usize,
    pub peak_live_jobs: usize,
    pub scheduler_steps: usize,
    /// Queries still pooled when stage 2 stopped; their jobs were handed
    /// to stage 3.
    pub abandoned_queries: usize,
    /// Sum of `max(0, l_i - l_{i-1})`.
    pub increase_sum: usize,
    pub interval_extend: ExtendStats,
}

/// A rank query issued by a suspended right extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankQuery {
    /// Inclusive rank on the reversed text's BWT.
    Rev(Symbol, usize),
    /// Inclusive rank on the child label sequence `L`.
    Label(Symbol, usize),
}

#[derive(Clone, Copy, Debug)]
enum ExtPhase {
    Start,
    RevLo,
    RevHi,
    Label { x: usize, v: usize },
}

/// Right extension by one symbol, written so it can stop at each rank
/// query and resume once the answer is known.
#[derive(Clone, Copy, Debug)]
pub struct ExtendTask {
    pair: IntervalPair,
    c: Symbol,
    lo: usize,
    rev: (usize, usize),
    phase: ExtPhase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtendStep {
    /// Finished; `None` if the extended factor does not occur.
    Done(Option<IntervalPair>),
    Ask(RankQuery),
}

impl ExtendTask {
    pub fn new(pair: IntervalPair, c: Symbol) -> Self {
        Self { pair, c, lo: 0, rev: (0, 0), phase: ExtPhase::Start }
    }

    /// Runs until the next rank query or the end. `answer` replies to the
    /// query returned by the previous call.
    pub fn step(&mut self, ctx: &PlcpContext, answer: Option<usize>) -> ExtendStep {
        let c = self.c;
        let rb = &ctx.rbwt;
        match self.phase {
            ExtPhase::Start => {
                let (i, j) = self.pair.rev;
                if rb.is_uniform(i, j) {
                    if rb.access(i) != c {
                        return ExtendStep::Done(None);
                    }
                    let acc = rb.acc(c);
                    let rev = (acc + rb.partial_rank(i) - 1, acc + rb.partial_rank(j) - 1);
                    return ExtendStep::Done(Some(IntervalPair { fwd: self.pair.fwd, rev }));
                }
                if i == 0 {
                    self.lo = 0;
                    self.phase = ExtPhase::RevHi;
                    ExtendStep::Ask(RankQuery::Rev(c, j))
                } else {
                    self.phase = ExtPhase::RevLo;
                    ExtendStep::Ask(RankQuery::Rev(c, i - 1))
                }
            }
            ExtPhase::RevLo => {
                self.lo = answer.expect("rank answer");
                self.phase = ExtPhase::RevHi;
                ExtendStep::Ask(RankQuery::Rev(c, self.pair.rev.1))
            }
            ExtPhase::RevHi => {
                let hi = answer.expect("rank answer");
                if hi == self.lo {
                    return ExtendStep::Done(None);
                }
                let acc = rb.acc(c);
                self.rev = (acc + self.lo, acc + hi - 1);
                let topo = &ctx.topo;
                let x = topo.node_of_interval(self.pair.fwd.0, self.pair.fwd.1);
                let v = topo.label_start(topo.internal_rank(x));
                if v == 0 {
                    return self.finish(ctx, x, v, 0);
                }
                self.phase = ExtPhase::Label { x, v };
                ExtendStep::Ask(RankQuery::Label(c, v - 1))
            }
            ExtPhase::Label { x, v } => self.finish(ctx, x, v, answer.expect("rank answer")),
        }
    }

    fn finish(&self, ctx: &PlcpContext, x: usize, v: usize, before: usize) -> ExtendStep {
        let topo = &ctx.topo;
        let found = topo
            .labels()
            .select(self.c, before + 1)
            .filter(|&p| p < v + topo.degree(x))
            .and_then(|p| topo.child(x, p - v));
        ExtendStep::Done(found.map(|u| IntervalPair { fwd: topo.interval(u), rev: self.rev }))
    }
}

/// Everything the construction reads: the text, both BWTs and both tree
/// topologies, plus the navigation helpers used to compute sample pairs.
pub struct PlcpContext {
    text: Arc<[Symbol]>,
    sigma: usize,
    bwt: Arc<RankedSeq>,
    topo: Arc<SuffixTopology>,
    rbwt: Arc<RankedSeq>,
    rtopo: Arc<SuffixTopology>,
    marking: NodeMarking,
    wlinks: WeinerLinkIndex,
}

impl PlcpContext {
    /// Builds both BWTs and topologies for `text`.
    pub fn new(text: &[Symbol], sigma: usize) -> Result<Self> {
        check_text(text, sigma)?;
        let bwt = Arc::new(RankedSeq::new(build_bwt(text, sigma)?.into(), sigma));
        let rbwt = Arc::new(RankedSeq::new(build_bwt(&reverse_text(text), sigma)?.into(), sigma));
        let topo = Arc::new(SuffixTopology::from_ranked(&bwt));
        let rtopo = Arc::new(SuffixTopology::from_ranked(&rbwt));
        Ok(Self::from_parts(text.into(), sigma, bwt, topo, rbwt, rtopo))
    }

    /// Assembles a context from prebuilt parts (not validated).
    pub fn from_parts(
        text: Arc<[Symbol]>,
        sigma: usize,
        bwt: Arc<RankedSeq>,
        topo: Arc<SuffixTopology>,
        rbwt: Arc<RankedSeq>,
        rtopo: Arc<SuffixTopology>,
    ) -> Self {
        let d = lg(text.len());
        let marking = NodeMarking::new(&topo, d);
        let wlinks = WeinerLinkIndex::new(rtopo.clone(), rbwt.clone(), d);
        Self { text, sigma, bwt, topo, rbwt, rtopo, marking, wlinks }
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn text(&self) -> &[Symbol] {
        &self.text
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn bwt(&self) -> &Arc<RankedSeq> {
        &self.bwt
    }

    pub fn topology(&self) -> &Arc<SuffixTopology> {
        &self.topo
    }

    pub fn reverse_bwt(&self) -> &Arc<RankedSeq> {
        &self.rbwt
    }

    pub fn reverse_topology(&self) -> &Arc<SuffixTopology> {
        &self.rtopo
    }

    /// Pair of `p` from the pair of `cp`.
    ///
    /// The forward interval must be that of a suffix-tree node whose
    /// string is exactly `cp` (true when `cp` is right-maximal). A factor
    /// `cp` of length one gives the full pair.
    pub fn contract_left(&self, pair: IntervalPair, c: Symbol) -> IntervalPair {
        let b = &self.bwt;
        let topo = &self.topo;
        let acc = b.acc(c);
        let l = b.select(c, pair.fwd.0 - acc + 1).expect("row inside c's block");
        let r = b.select(c, pair.fwd.1 - acc + 1).expect("row inside c's block");
        let x = topo.node_of_interval(l.min(r), l.max(r));
        if x == topo.root() {
            return IntervalPair::full(self.len());
        }
        let fwd = topo.interval(x);
        if b.is_uniform(fwd.0, fwd.1) {
            // Every occurrence of p is preceded by c.
            return IntervalPair { fwd, rev: pair.rev };
        }
        let y = self.rtopo.node_of_interval(pair.rev.0, pair.rev.1);
        let up = self.rtopo.parent(y).expect("non-root");
        IntervalPair { fwd, rev: self.rtopo.interval(up) }
    }

    /// Pair of `pc` from the pair of `p`, answering rank queries directly.
    pub fn extend_right(&self, pair: IntervalPair, c: Symbol) -> Option<IntervalPair> {
        let mut task = ExtendTask::new(pair, c);
        let mut answer = None;
        loop {
            match task.step(self, answer) {
                ExtendStep::Done(out) => return out,
                ExtendStep::Ask(q) => answer = Some(self.rank_direct(q)),
            }
        }
    }

    fn rank_direct(&self, q: RankQuery) -> usize {
        match q {
            RankQuery::Rev(a, i) => self.rbwt.rank(a, i),
            RankQuery::Label(a, i) => self.topo.labels().rank(a, i),
        }
    }
}

/// The PLCP values with the counters of their construction.
#[derive(Clone, Debug)]
pub struct Plcp {
    values: Vec<u32>,
    stats: PlcpStats,
}

impl Plcp {
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    pub fn stats(&self) -> &PlcpStats {
        &self.stats
    }

    pub fn encode(&self) -> PlcpBits {
        PlcpBits::from_values(&self.values)
    }
}

/// Builds every structure from `text` and computes its PLCP.
pub fn build_plcp_from_text(text: &[Symbol], sigma: usize) -> Result<Plcp> {
    Ok(build_plcp(&PlcpContext::new(text, sigma)?))
}

pub fn build_plcp(ctx: &PlcpContext) -> Plcp {
    let n = ctx.len();
    let dp = delta_prime(n, ctx.sigma);
    let mut stats = PlcpStats { delta_prime: dp, pool_capacity: pool_capacity(n), ..Default::default() };
    let mut ell = vec![0u32; n];
    let samples = SuffixSamples::new(&ctx.bwt, dp);
    let anchors = stage1(ctx, &samples, &mut ell, &mut stats);
    let leftover = jobs::stage2(ctx, &anchors, &mut ell, &mut stats);
    stage3(ctx, &samples, &leftover, &mut ell, &mut stats);
    let mut prev = 0u32;
    for &v in &ell {
        stats.increase_sum += v.saturating_sub(prev) as usize;
        prev = v;
    }
    Plcp { values: ell, stats }
}

/// State at a sample position: its value, its row, and the pair of `Y`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Anchor {
    pub pos: usize,
    pub row: usize,
    pub pair: IntervalPair,
}

/// Length of the common prefix of `T[a + o..]` and `T[b + o..]`, plus `o`.
fn scan(text: &[Symbol], a: usize, b: usize, o: usize, scanned: &mut usize) -> usize {
    let mut k = o;
    while text[a + k] == text[b + k] {
        k += 1;
    }
    *scanned += k - o + 1;
    k
}

/// Value at `pos` whose row is `row`, by locating the preceding suffix and
/// comparing from offset `o`.
fn slow_value(ctx: &PlcpContext, samples: &SuffixSamples, pos: usize, row: usize, o: usize, stats: &mut PlcpStats, stage3: bool) -> usize {
    if row == 0 {
        return 0;
    }
    let (prev, steps) = samples.position(&ctx.bwt, row - 1);
    stats.lf_steps += steps;
    let counter = if stage3 { &mut stats.stage3_scanned } else { &mut stats.stage1_scanned };
    scan(&ctx.text, pos, prev, o, counter)
}

fn stage1(ctx: &PlcpContext, samples: &SuffixSamples, ell: &mut [u32], stats: &mut PlcpStats) -> Vec<Anchor> {
    let n = ctx.len();
    let dp = samples.step();
    let text = &ctx.text;
    let mut anchors = Vec::with_capacity(samples.count());
    let mut prev_val = 0usize;
    for j in 0..samples.count() {
        let pos = j * dp;
        let row = samples.row_of_sample(j);
        let o = if j == 0 { 0 } else { prev_val.saturating_sub(dp) };
        let v = slow_value(ctx, samples, pos, row, o, stats, false);
        ell[pos] = v as u32;

        // Pair of T[pos..pos + v]: contract the previous sample's factor
        // down to T[pos..prev_pos + prev_val], then extend.
        let mut pair = IntervalPair::full(n);
        let mut have = 0;
        if let Some(a) = anchors.last() {
            let a: &Anchor = a;
            pair = a.pair;
            let mut len = prev_val;
            for t in 0..dp {
                if len == 0 {
                    break;
                }
                pair = if len == 1 { IntervalPair::full(n) } else { ctx.contract_left(pair, text[a.pos + t]) };
                stats.contracts += 1;
                len -= 1;
            }
            have = len;
        }
        let tail = &text[pos + have..pos + v];
        pair = extend_right_run(&ctx.topo, &ctx.marking, &ctx.wlinks, pair, tail, &mut stats.interval_extend)
            .expect("text factor occurs");
        anchors.push(Anchor { pos, row, pair });
        prev_val = v;
    }
    stats.anchors = anchors.len();
    anchors
}

/// Positions `[start, end)` still unknown after stage 2, with the row of
/// `start - 1`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Leftover {
    pub start: usize,
    pub end: usize,
    pub prev_row: usize,
}

fn stage3(ctx: &PlcpContext, samples: &SuffixSamples, leftover: &[Leftover], ell: &mut [u32], stats: &mut PlcpStats) {
    for g in leftover {
        let mut row = g.prev_row;
        for k in g.start..g.end {
            row = ctx.bwt.psi(row);
            let o = (ell[k - 1] as usize).saturating_sub(1);
            ell[k] = slow_value(ctx, samples, k, row, o, stats, true) as u32;
            stats.stage3_values += 1;
        }
    }
}
