//! Stage 2: one job per gap between samples, run round-robin, with the
//! rank queries of right extensions collected in two pools.

use std::collections::VecDeque;

use super::{Anchor, ExtendStep, ExtendTask, Leftover, PlcpContext, PlcpStats, RankQuery};
use crate::batch_static::StaticBatchSeq;
use crate::topology::IntervalPair;
use crate::Symbol;

/// Computes the values of positions `(anchor, anchor + delta')`.
struct Job {
    next: usize,
    end: usize,
    /// Row of `next - 1`.
    prev_row: usize,
    /// Pair of `Y` at `next - 1` and its length.
    y: IntervalPair,
    prev_len: usize,
    /// Row of `next`, once started.
    row: usize,
    started: bool,
    /// Factor `T[next..next + m]` being extended, and its pair.
    cur: IntervalPair,
    m: usize,
    task: Option<ExtendTask>,
}

impl Job {
    fn new(a: &Anchor, end: usize, len: usize) -> Self {
        Self {
            next: a.pos + 1,
            end,
            prev_row: a.row,
            y: a.pair,
            prev_len: len,
            row: 0,
            started: false,
            cur: a.pair,
            m: 0,
            task: None,
        }
    }

    fn complete(&mut self, ell: &mut [u32], v: usize, y: IntervalPair) {
        ell[self.next] = v as u32;
        self.prev_len = v;
        self.y = y;
        self.prev_row = self.row;
        self.next += 1;
        self.started = false;
    }

    /// Runs until the job needs a rank answer or is finished (`None`).
    fn resume(&mut self, ctx: &PlcpContext, ell: &mut [u32], stats: &mut PlcpStats, mut answer: Option<usize>) -> Option<RankQuery> {
        let text = ctx.text();
        let n = text.len();
        loop {
            if !self.started {
                if self.next == self.end {
                    return None;
                }
                self.row = ctx.bwt().psi(self.prev_row);
                if self.row == 0 {
                    stats.stage2_values += 1;
                    self.complete(ell, 0, IntervalPair::full(n));
                    continue;
                }
                if self.prev_len >= 2 {
                    self.cur = ctx.contract_left(self.y, text[self.next - 1]);
                    self.m = self.prev_len - 1;
                    stats.contracts += 1;
                } else {
                    self.cur = IntervalPair::full(n);
                    self.m = 0;
                }
                self.started = true;
            }
            let (cur, c) = (self.cur, text[self.next + self.m]);
            let task = self.task.get_or_insert_with(|| ExtendTask::new(cur, c));
            match task.step(ctx, answer.take()) {
                ExtendStep::Ask(q) => return Some(q),
                ExtendStep::Done(out) => {
                    self.task = None;
                    stats.extends += 1;
                    let out = out.expect("text factor occurs");
                    if out.fwd.0 == self.row {
                        stats.stage2_values += 1;
                        self.complete(ell, self.m, self.cur);
                    } else {
                        self.cur = out;
                        self.m += 1;
                    }
                }
            }
        }
    }
}

struct Pool<'a> {
    seq: StaticBatchSeq,
    queries: Vec<(Symbol, usize)>,
    owners: Vec<u32>,
    flushes: &'a mut usize,
}

impl Pool<'_> {
    fn flush(&mut self, answers: &mut [Option<usize>], active: &mut VecDeque<usize>) {
        let out = self.seq.batch_rank(&self.queries);
        for (&j, a) in self.owners.iter().zip(out) {
            answers[j as usize] = Some(a.expect("query inside the sequence"));
            active.push_back(j as usize);
        }
        self.queries.clear();
        self.owners.clear();
        *self.flushes += 1;
    }
}

/// Runs the jobs while at least `2 * capacity` of them are unfinished and
/// returns what is left for stage 3.
pub(crate) fn stage2(ctx: &PlcpContext, anchors: &[Anchor], ell: &mut [u32], stats: &mut PlcpStats) -> Vec<Leftover> {
    let n = ctx.len();
    let dp = stats.delta_prime;
    let cap = stats.pool_capacity;
    let mut jobs: Vec<Job> = anchors
        .iter()
        .filter_map(|a| {
            let end = (a.pos + dp).min(n);
            (a.pos + 1 < end).then(|| Job::new(a, end, ell[a.pos] as usize))
        })
        .collect();
    stats.jobs = jobs.len();
    if jobs.len() >= 2 * cap {
        stats.stage2_ran = true;
        run(ctx, &mut jobs, ell, stats);
    }
    jobs.iter()
        .filter(|j| j.next < j.end)
        .map(|j| Leftover { start: j.next, end: j.end, prev_row: j.prev_row })
        .collect()
}

fn run(ctx: &PlcpContext, jobs: &mut [Job], ell: &mut [u32], stats: &mut PlcpStats) {
    let sigma = ctx.sigma();
    let cap = stats.pool_capacity;
    let (mut rev_flushes, mut label_flushes) = (0, 0);
    let mut rev = Pool {
        seq: StaticBatchSeq::new(ctx.reverse_bwt().as_slice(), sigma),
        queries: Vec::with_capacity(cap),
        owners: Vec::with_capacity(cap),
        flushes: &mut rev_flushes,
    };
    let mut lab = Pool {
        seq: StaticBatchSeq::new(ctx.topology().labels().as_slice(), sigma),
        queries: Vec::with_capacity(cap),
        owners: Vec::with_capacity(cap),
        flushes: &mut label_flushes,
    };
    let mut answers: Vec<Option<usize>> = vec![None; jobs.len()];
    let mut active: VecDeque<usize> = (0..jobs.len()).collect();
    let mut live = jobs.len();
    stats.peak_live_jobs = live;
    // With at least 2 * cap live jobs and both pools below capacity, some
    // job is always runnable.
    while live >= 2 * cap {
        let j = active.pop_front().expect("a runnable job");
        stats.scheduler_steps += 1;
        let pool = match jobs[j].resume(ctx, ell, stats, answers[j].take()) {
            None => {
                live -= 1;
                continue;
            }
            Some(RankQuery::Rev(a, i)) => {
                stats.rev_queries += 1;
                rev.queries.push((a, i));
                &mut rev
            }
            Some(RankQuery::Label(a, i)) => {
                stats.label_queries += 1;
                lab.queries.push((a, i));
                &mut lab
            }
        };
        pool.owners.push(j as u32);
        stats.peak_pool = stats.peak_pool.max(pool.queries.len());
        if pool.queries.len() == cap {
            pool.flush(&mut answers, &mut active);
        }
    }
    stats.abandoned_queries = rev.queries.len() + lab.queries.len();
    stats.rev_flushes = rev_flushes;
    stats.label_flushes = label_flushes;
}
