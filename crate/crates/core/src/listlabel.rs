//! Order-maintenance labels for batched list insertions.
//!
//! Every element carries an integer label, strictly increasing along the
//! list, so order comparisons are label comparisons. A batch of insertions
//! relabels a few disjoint intervals: each interval is grown until it has
//! at least as many gaps as it receives new elements, then its interior is
//! spread evenly between the (unchanged) endpoint labels. That at most
//! halves the smallest gap per batch, so starting from gaps of `4n` the
//! labels stay at least `4` apart for `log2 n` batches. After that many
//! batches, or when a batch is larger than the list, the whole list is
//! relabeled from scratch.
//!
//! A dummy head with label `0` precedes the list and an implicit tail with
//! label `(t + 1) * 4n` follows it; both serve as interval endpoints.

use crate::util::lg;
use crate::{Error, Result};

/// One relabeled interval of a batch, in pre-insertion element indices
/// (`0` is the head, `len + 1` the tail).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
    /// New elements placed inside the interval.
    pub new: usize,
    /// Gaps the interval spanned before insertion (`end - start`).
    pub gaps: usize,
    /// Distance between consecutive labels inside the interval afterwards.
    pub spacing: u64,
}

impl Interval {
    /// Gap count after insertion over gap count before, in `(1, 2]`.
    pub fn density_ratio(&self) -> f64 {
        (self.gaps + self.new) as f64 / self.gaps as f64
    }
}

#[derive(Clone, Debug, Default)]
pub struct BatchReport {
    pub inserted: usize,
    /// Pre-existing elements whose label changed.
    pub relabeled: usize,
    pub intervals: Vec<Interval>,
    /// The batch triggered a relabel of the whole list.
    pub reinit: bool,
}

#[derive(Clone, Debug)]
pub struct LabeledList<T> {
    items: Vec<T>,
    labels: Vec<u64>,
    n: usize,
    unit: u64,
    upper: u64,
    batches: usize,
    max_batches: usize,
    relabel_total: u64,
    insert_total: u64,
    reinits: u64,
}

impl<T> LabeledList<T> {
    /// Labels `items` as `i * 4n` for `i = 1..=t`. `n` sizes the label
    /// universe and the batch budget.
    pub fn new(items: Vec<T>, n: usize) -> Self {
        let n = n.max(items.len()).max(1);
        let mut list = Self {
            items,
            labels: Vec::new(),
            n,
            unit: 0,
            upper: 0,
            batches: 0,
            max_batches: lg(n),
            relabel_total: 0,
            insert_total: 0,
            reinits: 0,
        };
        list.assign_fresh();
        list
    }

    fn assign_fresh(&mut self) -> usize {
        self.n = self.n.max(self.items.len());
        self.unit = 4 * self.n as u64;
        let t = self.items.len();
        let mut changed = 0;
        let fresh = (1..=t as u64).map(|i| i * self.unit);
        if self.labels.len() == t {
            for (l, f) in self.labels.iter_mut().zip(fresh) {
                if *l != f {
                    *l = f;
                    changed += 1;
                }
            }
        } else {
            self.labels = fresh.collect();
        }
        self.upper = (t as u64 + 1) * self.unit;
        self.batches = 0;
        changed
    }

    /// Fresh labels after a merge; returns how many old elements changed.
    fn fresh_after_merge(&mut self, merged_pos: &[usize], old_labels: &[u64]) -> usize {
        self.labels.clear();
        self.assign_fresh();
        let changed = old_labels
            .iter()
            .enumerate()
            .filter(|&(k, &l)| self.labels[merged_pos[k + 1] - 1] != l)
            .count();
        self.relabel_total += changed as u64;
        self.reinits += 1;
        changed
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, i: usize) -> u64 {
        self.labels[i]
    }

    /// Batches applied since the last full relabel.
    pub fn batch_count(&self) -> usize {
        self.batches
    }

    /// Batches allowed before a full relabel (`log2 n`).
    pub fn max_batches(&self) -> usize {
        self.max_batches
    }

    pub fn relabel_total(&self) -> u64 {
        self.relabel_total
    }

    pub fn insert_total(&self) -> u64 {
        self.insert_total
    }

    pub fn reinit_count(&self) -> u64 {
        self.reinits
    }

    /// Smallest difference between consecutive labels, counting the head
    /// (label 0) and the tail.
    pub fn min_gap(&self) -> u64 {
        let mut prev = 0;
        let mut gap = u64::MAX;
        for &l in self.labels.iter().chain(std::iter::once(&self.upper)) {
            gap = gap.min(l - prev);
            prev = l;
        }
        gap
    }

    /// Relabels the whole list from scratch.
    pub fn reinit(&mut self) -> usize {
        let changed = self.assign_fresh();
        self.relabel_total += changed as u64;
        self.reinits += 1;
        changed
    }

    /// Inserts a batch. Each entry is `(pred, item)` where `pred` is the
    /// number of current elements preceding the new one (`0` = right after
    /// the head). Entries must be sorted by `pred`; equal `pred` keeps the
    /// given order.
    pub fn batch_insert(&mut self, inserts: Vec<(usize, T)>) -> Result<BatchReport> {
        let t = self.items.len();
        let m = inserts.len();
        if let Some(w) = inserts.windows(2).find(|w| w[0].0 > w[1].0) {
            return Err(Error::InvalidInput(format!("insert predecessors not sorted: {} > {}", w[0].0, w[1].0)));
        }
        if let Some(&(p, _)) = inserts.last() {
            if p > t {
                return Err(Error::OutOfRange { pos: p, len: t });
            }
        }
        let mut report = BatchReport { inserted: m, ..Default::default() };
        if m == 0 {
            return Ok(report);
        }
        let mut counts = vec![0usize; t + 1];
        for &(p, _) in &inserts {
            counts[p] += 1;
        }
        let full = m > t || self.batches >= self.max_batches;
        let intervals = if full { Vec::new() } else { choose_intervals(&counts) };

        // Merge items; remember where old elements land.
        let old_labels = std::mem::take(&mut self.labels);
        let old_items = std::mem::take(&mut self.items);
        let mut merged_pos = Vec::with_capacity(t + 2);
        merged_pos.push(0usize);
        let mut items = Vec::with_capacity(t + m);
        let mut labels = Vec::with_capacity(t + m);
        let mut ins = inserts.into_iter().peekable();
        let mut old = old_items.into_iter().zip(old_labels.iter().copied());
        for g in 0..=t {
            while let Some((_, it)) = ins.next_if(|&(p, _)| p == g) {
                items.push(it);
                labels.push(0);
            }
            if g < t {
                let (it, l) = old.next().unwrap();
                items.push(it);
                labels.push(l);
                merged_pos.push(items.len());
            }
        }
        merged_pos.push(items.len() + 1);
        self.items = items;
        self.insert_total += m as u64;

        if full {
            report.relabeled = self.fresh_after_merge(&merged_pos, &old_labels);
            report.reinit = true;
            return Ok(report);
        }

        let old_label = |k: usize| -> u64 {
            if k == 0 {
                0
            } else if k == t + 1 {
                self.upper
            } else {
                old_labels[k - 1]
            }
        };
        let mut relabeled = 0;
        let mut ok = true;
        let mut spacings = Vec::with_capacity(intervals.len());
        for iv in &intervals {
            let (lo, hi) = (old_label(iv.start), old_label(iv.end));
            let (ms, me) = (merged_pos[iv.start], merged_pos[iv.end]);
            let spacing = (hi - lo) / (me - ms) as u64;
            if spacing == 0 {
                ok = false;
                break;
            }
            spacings.push(spacing);
            for (k, mp) in (ms + 1..me).enumerate() {
                let nl = lo + spacing * (k as u64 + 1);
                // merged index mp is 1-based over items.
                let slot = &mut labels[mp - 1];
                if *slot != 0 && *slot != nl {
                    relabeled += 1;
                }
                *slot = nl;
            }
        }
        self.labels = labels;
        if !ok {
            // Gaps exhausted: fall back to a full relabel.
            report.relabeled = self.fresh_after_merge(&merged_pos, &old_labels);
            report.reinit = true;
            return Ok(report);
        }
        report.intervals = intervals
            .into_iter()
            .zip(spacings)
            .map(|(mut iv, s)| {
                iv.spacing = s;
                iv
            })
            .collect();
        report.relabeled = relabeled;
        self.relabel_total += relabeled as u64;
        self.batches += 1;
        debug_assert!(self.labels.windows(2).all(|w| w[0] < w[1]));
        Ok(report)
    }
}

/// Greedy left-to-right choice of disjoint intervals (they may share an
/// endpoint). `counts[g]` is the number of new elements for gap `g`, which
/// lies between element `g` and `g + 1`. Requires `sum(counts) <= len(counts)`.
fn choose_intervals(counts: &[usize]) -> Vec<Interval> {
    let last = counts.len(); // index of the tail
    let mut out: Vec<Interval> = Vec::new();
    let mut g = 0;
    while g < counts.len() {
        if counts[g] == 0 {
            g += 1;
            continue;
        }
        let (mut s, mut e) = (g, g + 1);
        let mut new = counts[g];
        while new > e - s && e < last {
            new += counts[e];
            e += 1;
        }
        while new > e - s {
            match out.last() {
                Some(prev) if prev.end == s => {
                    let prev = out.pop().unwrap();
                    new += prev.new;
                    s = prev.start;
                }
                _ => {
                    s -= 1;
                    new += counts[s];
                }
            }
        }
        out.push(Interval { start: s, end: e, new, gaps: e - s, spacing: 0 });
        g = e;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn initial_labels() {
        let l = LabeledList::new(vec!['x', 'y', 'z'], 10);
        assert_eq!(l.labels(), &[40, 80, 120]);
        assert_eq!(l.min_gap(), 40);
        assert_eq!(l.max_batches(), 3);
    }

    #[test]
    fn single_insert_splits_gap() {
        let mut l = LabeledList::new(vec![1, 2, 3], 10);
        let r = l.batch_insert(vec![(1, 9)]).unwrap();
        assert_eq!(l.items(), &[1, 9, 2, 3]);
        assert_eq!(l.labels(), &[40, 60, 80, 120]);
        assert_eq!(r.relabeled, 0);
        assert_eq!(r.intervals.len(), 1);
        assert_eq!(r.intervals[0].density_ratio(), 2.0);
    }

    #[test]
    fn crowded_gap_widens_interval() {
        let mut l = LabeledList::new(vec![0, 1, 2, 3, 4], 100);
        l.batch_insert(vec![(2, 10), (2, 11), (2, 12)]).unwrap();
        assert_eq!(l.items(), &[0, 1, 10, 11, 12, 2, 3, 4]);
        assert!(l.labels().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn oversized_batch_reinitializes() {
        let mut l = LabeledList::new(vec![0], 4);
        let r = l.batch_insert(vec![(0, 5), (1, 6)]).unwrap();
        assert!(r.reinit);
        assert_eq!(l.items(), &[5, 0, 6]);
        assert_eq!(l.labels(), &[16, 32, 48]);
    }

    #[test]
    fn unsorted_batch_rejected() {
        let mut l = LabeledList::new(vec![0, 1, 2], 4);
        assert!(l.batch_insert(vec![(2, 5), (1, 6)]).is_err());
        assert!(l.batch_insert(vec![(4, 5)]).is_err());
    }

    #[test]
    fn intervals_cover_counts() {
        let counts = [0, 3, 0, 0, 1, 0, 2];
        let iv = choose_intervals(&counts);
        for w in iv.windows(2) {
            assert!(w[0].end <= w[1].start);
        }
        assert_eq!(iv.iter().map(|i| i.new).sum::<usize>(), 6);
        assert!(iv.iter().all(|i| i.new <= i.gaps));
    }

    proptest! {
        #[test]
        fn gaps_survive_log_n_batches(t in 1usize..200, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 4 * t;
            let mut l = LabeledList::new((0..t).collect::<Vec<_>>(), n);
            let mut reference: Vec<usize> = (0..t).collect();
            let mut next_id = t;
            for _ in 0..l.max_batches() {
                let len = l.len();
                let m = rng.gen_range(0..=len);
                let mut preds: Vec<usize> = (0..m).map(|_| rng.gen_range(0..=len)).collect();
                preds.sort_unstable();
                let inserts: Vec<(usize, usize)> = preds.iter().map(|&p| { next_id += 1; (p, next_id) }).collect();
                // Reference merge.
                let mut merged = Vec::new();
                let mut it = inserts.iter().peekable();
                for g in 0..=len {
                    while let Some(&&(p, x)) = it.peek() { if p != g { break; } merged.push(x); it.next(); }
                    if g < len { merged.push(reference[g]); }
                }
                reference = merged;
                let r = l.batch_insert(inserts).unwrap();
                prop_assert!(!r.reinit);
                prop_assert_eq!(l.items(), &reference[..]);
                prop_assert!(l.labels().windows(2).all(|w| w[0] < w[1]));
                prop_assert!(l.min_gap() >= 3, "gap {} after {} batches", l.min_gap(), l.batch_count());
            }
            prop_assert!(l.relabel_total() <= 3 * l.insert_total());
        }
    }
}
