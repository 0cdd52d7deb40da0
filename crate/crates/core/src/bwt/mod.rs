//! BWT construction by slices.
//!
//! The text is padded to a multiple of `delta` and its suffixes are split
//! into `delta` slices: slice `j` holds the suffixes starting at positions
//! `i * delta - j - 1`. Slices 0 and 1 are sorted together as suffixes of a
//! text of packed `delta`-grams. Every later slice is merged into the
//! growing BWT `B` with one batch of rank queries (for its rank among the
//! slices already present, excluding slice 0) and one batch of insertions.
//! Its rank among slice 0 comes from sorting slice 0 and slice `j` together
//! as `delta`-gram texts.
//!
//! Padding: real symbols are shifted up by one and the pad symbol is `0`.
//! The pad suffixes are then the smallest ones, so the BWT of the original
//! text is the padded BWT without its first `pad` rows, shifted back down.

mod sais;
mod samples;

pub use sais::linear_suffix_array;
pub use samples::SuffixSamples;

use crate::batch_dynamic::DynBatchSeq;
use crate::util::{bits_for, check_text, floor_log, radix_sort_by_key};
use crate::{Result, Symbol};

/// How a BWT was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BwtPath {
    /// Slice merging with the given `delta`.
    Slices { delta: usize },
    /// Suffix array of the whole text.
    Direct,
}

/// One merge step of the slice builder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepTrace {
    /// Last slice included after this step.
    pub step: usize,
    pub queries: usize,
    pub inserts: usize,
    /// Length of `B` after the step.
    pub b_len: usize,
}

#[derive(Clone, Debug)]
pub struct BwtOutput {
    pub bwt: Vec<Symbol>,
    pub path: BwtPath,
    /// Pad symbols added to reach a multiple of `delta`.
    pub pad: usize,
    pub trace: Vec<StepTrace>,
}

/// `delta` for the slice path, or `None` when the direct path is used:
/// `sigma^4 > n` or `n < sigma^2`.
pub fn slice_delta(n: usize, sigma: usize) -> Option<usize> {
    let s = sigma.max(2) as u128;
    if s.pow(4) > n as u128 {
        return None;
    }
    let delta = floor_log(n, sigma.max(2)).max(2);
    (n >= delta * 2).then_some(delta)
}

/// BWT of `text` (unique sentinel `0` last, symbols below `sigma`).
pub fn build_bwt(text: &[Symbol], sigma: usize) -> Result<Vec<Symbol>> {
    Ok(build_bwt_traced(text, sigma)?.bwt)
}

pub fn build_bwt_traced(text: &[Symbol], sigma: usize) -> Result<BwtOutput> {
    check_text(text, sigma)?;
    match slice_delta(text.len(), sigma) {
        Some(delta) => build_with_delta(text, sigma, delta),
        None => Ok(BwtOutput { bwt: direct_bwt(text, sigma)?, path: BwtPath::Direct, pad: 0, trace: Vec::new() }),
    }
}

/// Slice path with an explicit `delta >= 2`.
pub fn build_with_delta(text: &[Symbol], sigma: usize, delta: usize) -> Result<BwtOutput> {
    check_text(text, sigma)?;
    let mut st = SliceState::new(text, sigma, delta)?;
    while st.step()?.is_some() {}
    let bwt = st.finish();
    Ok(BwtOutput { bwt, path: BwtPath::Slices { delta: st.delta }, pad: st.pad(), trace: st.trace })
}

/// Digits: `0` marks the end of the text, pad symbol `0` is `1`, real
/// symbol `c` is `c + 2`.
fn digit_bits(sigma: usize) -> u32 {
    bits_for(sigma as u64 + 2)
}

/// `reverse(T[0..n-1]) + [0]`: the text read backwards, sentinel kept last.
pub fn reverse_text(text: &[Symbol]) -> Vec<Symbol> {
    let mut r: Vec<Symbol> = text[..text.len().saturating_sub(1)].iter().rev().copied().collect();
    r.push(0);
    r
}

/// BWT from a suffix array of the whole text.
pub fn direct_bwt(text: &[Symbol], sigma: usize) -> Result<Vec<Symbol>> {
    check_text(text, sigma)?;
    let n = text.len();
    let sa = linear_suffix_array(text, sigma.max(1))?;
    Ok(sa.into_iter().map(|p| text[(p as usize + n - 1) % n]).collect())
}

/// A text cut into `delta`-grams, each packed into one word of digits.
#[derive(Clone, Debug)]
pub struct MetaText {
    pub keys: Vec<u64>,
}

impl MetaText {
    /// Renames the concatenation `a ∘ 1 ∘ b ∘ 0` to ranks (real grams start
    /// at `2`) and returns it with its alphabet size.
    fn joint_ranks(a: &MetaText, b: &MetaText, key_bits: u32) -> (Vec<u32>, usize) {
        let m = a.keys.len();
        let mut idx: Vec<u32> = (0..(a.keys.len() + b.keys.len()) as u32).collect();
        let key = |&i: &u32| if (i as usize) < m { a.keys[i as usize] } else { b.keys[i as usize - m] };
        radix_sort_by_key(&mut idx, key_bits, key);
        let mut out = vec![0u32; a.keys.len() + b.keys.len() + 2];
        let mut rank = 1u32;
        let mut prev = None;
        for &i in &idx {
            let k = key(&i);
            if prev != Some(k) {
                rank += 1;
                prev = Some(k);
            }
            let slot = if (i as usize) < m { i as usize } else { i as usize + 1 };
            out[slot] = rank;
        }
        out[m] = 1;
        (out, rank as usize + 1)
    }
}

/// State of the slice builder between steps.
pub struct SliceState {
    delta: usize,
    n: usize,
    padded: Vec<Symbol>,
    bits: u32,
    /// Number of suffixes per slice.
    m: usize,
    /// Next slice to merge.
    j: usize,
    b: DynBatchSeq,
    /// Position in `B` of the suffix of the last merged slice, per block.
    w: Vec<usize>,
    counts: Vec<usize>,
    slice0: MetaText,
    current: MetaText,
    pub trace: Vec<StepTrace>,
}

impl SliceState {
    /// Pads the text and merges slices 0 and 1.
    pub fn new(text: &[Symbol], sigma: usize, delta: usize) -> Result<Self> {
        check_text(text, sigma)?;
        let n = text.len();
        let bits = digit_bits(sigma);
        // A gram must fit in one word.
        let delta = delta.clamp(2, (64 / bits) as usize);
        let big_n = n.div_ceil(delta) * delta;
        let mut padded: Vec<Symbol> = text.iter().map(|&c| c + 1).collect();
        padded.resize(big_n, 0);
        let m = big_n / delta;
        let mut st = Self {
            delta,
            n,
            padded,
            bits,
            m,
            j: 2,
            b: DynBatchSeq::new(&[], sigma + 1, big_n),
            w: Vec::new(),
            counts: vec![0; sigma + 1],
            slice0: MetaText { keys: Vec::new() },
            current: MetaText { keys: Vec::new() },
            trace: Vec::new(),
        };
        st.slice0 = st.slice_text(0);
        st.current = st.slice_text(1);
        st.steps01();
        Ok(st)
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn pad(&self) -> usize {
        self.padded.len() - self.n
    }

    /// The shifted, padded text the slices are taken from.
    pub fn padded_text(&self) -> &[Symbol] {
        &self.padded
    }

    /// Slices merged so far.
    pub fn merged(&self) -> usize {
        self.j
    }

    /// Current content of `B` (over the padded text's alphabet).
    pub fn current(&self) -> Vec<Symbol> {
        self.b.to_vec()
    }

    /// Start of suffix `k` of slice `j`.
    fn start(&self, j: usize, k: usize) -> usize {
        (k + 1) * self.delta - j - 1
    }

    fn digit(&self, p: usize) -> u64 {
        if p < self.padded.len() {
            self.padded[p] as u64 + 1
        } else {
            0
        }
    }

    fn slice_text(&self, j: usize) -> MetaText {
        let keys = (0..self.m)
            .map(|k| {
                let s = self.start(j, k);
                (s..s + self.delta).fold(0u64, |acc, p| (acc << self.bits) | self.digit(p))
            })
            .collect();
        MetaText { keys }
    }

    fn key_bits(&self) -> u32 {
        self.bits * self.delta as u32
    }

    /// Symbol preceding the suffix at `p`, cyclically.
    fn preceding(&self, p: usize) -> Symbol {
        self.padded[(p + self.padded.len() - 1) % self.padded.len()]
    }

    /// Sorted order of slice 0 and the current slice: for each entry, the
    /// slice (`false` for 0) and block.
    fn joint_order(&self) -> Vec<(bool, usize)> {
        let (ranks, alpha) = MetaText::joint_ranks(&self.slice0, &self.current, self.key_bits());
        let sa = linear_suffix_array(&ranks, alpha).expect("meta text is well formed");
        let m = self.m;
        sa.into_iter()
            .filter_map(|p| {
                let p = p as usize;
                if p < m {
                    Some((false, p))
                } else if p > m && p <= 2 * m {
                    Some((true, p - m - 1))
                } else {
                    None
                }
            })
            .collect()
    }

    fn steps01(&mut self) {
        let order = self.joint_order();
        let mut init = Vec::with_capacity(order.len());
        self.w = vec![0; self.m];
        for (r, &(cur, k)) in order.iter().enumerate() {
            let p = self.start(if cur { 1 } else { 0 }, k);
            let c = self.preceding(p);
            init.push(c);
            self.counts[c as usize] += 1;
            if cur {
                self.w[k] = r;
            }
        }
        self.b = DynBatchSeq::new(&init, self.counts.len(), self.padded.len());
        self.trace.push(StepTrace { step: 1, queries: 0, inserts: init.len(), b_len: init.len() });
    }

    /// Merges the next slice; `None` once all slices are in.
    pub fn step(&mut self) -> Result<Option<StepTrace>> {
        if self.j >= self.delta {
            return Ok(None);
        }
        let j = self.j;
        let top = (self.delta as u32 - 1) * self.bits;
        for k in 0..self.m {
            let d = self.digit(self.start(j, k));
            self.current.keys[k] = (d << top) | (self.current.keys[k] >> self.bits);
        }
        // Slice-0 suffixes below each suffix of slice j.
        let mut q = vec![0usize; self.m];
        let mut seen0 = 0;
        for (cur, k) in self.joint_order() {
            if cur {
                q[k] = seen0;
            } else {
                seen0 += 1;
            }
        }
        let mut acc = vec![0usize; self.counts.len() + 1];
        for a in 0..self.counts.len() {
            acc[a + 1] = acc[a] + self.counts[a];
        }
        let mut queries = Vec::with_capacity(self.m);
        let mut pos = Vec::with_capacity(self.m);
        for k in 0..self.m {
            let a = self.padded[self.start(j, k)];
            if self.w[k] > 0 {
                queries.push((a, self.w[k] - 1));
                pos.push(k);
            }
        }
        let ranks = self.b.batch_rank(&queries);
        let mut before = vec![0usize; self.m];
        for (r, &k) in ranks.into_iter().zip(&pos) {
            before[k] = r.expect("query inside B");
        }
        let mut inserts: Vec<(usize, Symbol)> = Vec::with_capacity(self.m);
        for k in 0..self.m {
            let s = self.start(j, k);
            let o = acc[self.padded[s] as usize] + before[k] + q[k];
            self.w[k] = o;
            let c = self.preceding(s);
            inserts.push((o, c));
        }
        inserts.sort_unstable_by_key(|x| x.0);
        self.b.batch_insert(&inserts)?;
        for &(_, c) in &inserts {
            self.counts[c as usize] += 1;
        }
        self.j += 1;
        let t = StepTrace { step: j, queries: queries.len(), inserts: inserts.len(), b_len: self.b.len() };
        self.trace.push(t);
        Ok(Some(t))
    }

    /// BWT of the original text; all slices must be merged.
    pub fn finish(&self) -> Vec<Symbol> {
        debug_assert_eq!(self.j, self.delta);
        let pad = self.pad();
        self.b.to_vec()[pad..].iter().map(|&c| c.saturating_sub(1)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{naive_bwt, naive_suffix_array};
    use proptest::prelude::*;

    fn abra() -> Vec<Symbol> {
        vec![1, 2, 5, 1, 3, 1, 4, 1, 2, 5, 1, 0]
    }

    #[test]
    fn abracadabra_all_paths() {
        let want = vec![1, 5, 4, 0, 5, 3, 1, 1, 1, 1, 2, 2];
        assert_eq!(naive_bwt(&abra()), want);
        assert_eq!(build_bwt(&abra(), 6).unwrap(), want);
        assert_eq!(direct_bwt(&abra(), 6).unwrap(), want);
        for delta in 2..=6 {
            assert_eq!(build_with_delta(&abra(), 6, delta).unwrap().bwt, want, "delta {delta}");
        }
    }

    #[test]
    fn sentinel_only() {
        assert_eq!(build_bwt(&[0], 1).unwrap(), vec![0]);
        assert_eq!(build_with_delta(&[0], 1, 2).unwrap().bwt, vec![0]);
    }

    #[test]
    fn rejects_missing_sentinel() {
        assert!(build_bwt(&[1, 2], 3).is_err());
    }

    #[test]
    fn path_choice() {
        assert_eq!(slice_delta(1000, 2), Some(9));
        assert_eq!(slice_delta(1000, 16), None);
        assert_eq!(slice_delta(100_000, 16), Some(4));
        assert_eq!(slice_delta(10, 2), None);
    }

    /// After every step, `B` is the preceding symbols of the merged slices'
    /// suffixes in sorted order.
    #[test]
    fn each_step_matches_projection() {
        let text: Vec<Symbol> = vec![2, 1, 1, 2, 1, 2, 2, 1, 1, 1, 2, 1, 2, 0];
        let mut st = SliceState::new(&text, 3, 4).unwrap();
        let p = st.padded_text().to_vec();
        let big_n = p.len();
        let sa = naive_suffix_array(&p);
        loop {
            let merged = st.merged();
            let want: Vec<Symbol> = sa
                .iter()
                .filter(|&&s| (big_n - 1 - s) % 4 < merged)
                .map(|&s| p[(s + big_n - 1) % big_n])
                .collect();
            assert_eq!(st.current(), want, "after {merged} slices");
            if st.step().unwrap().is_none() {
                break;
            }
        }
        assert_eq!(st.finish(), naive_bwt(&text));
    }

    #[test]
    fn trace_sizes() {
        let text: Vec<Symbol> = (0..999).map(|i| 1 + (i * 7 % 3) as Symbol).chain([0]).collect();
        let out = build_with_delta(&text, 4, 5).unwrap();
        assert_eq!(out.trace.len(), 4);
        assert_eq!(out.trace[0].inserts, 400);
        for t in &out.trace[1..] {
            assert_eq!(t.inserts, 200);
        }
        assert_eq!(out.trace.last().unwrap().b_len, 1000);
    }

    proptest! {
        #[test]
        fn slices_match_naive(body in proptest::collection::vec(1u32..4, 0..300), delta in 2usize..9) {
            let mut t = body;
            t.push(0);
            prop_assert_eq!(build_with_delta(&t, 4, delta).unwrap().bwt, naive_bwt(&t));
        }

        #[test]
        fn binary_runs(body in proptest::collection::vec(prop_oneof![Just(1u32), Just(1u32), Just(1u32), Just(2u32)], 0..200), delta in 2usize..7) {
            let mut t = body;
            t.push(0);
            prop_assert_eq!(build_with_delta(&t, 3, delta).unwrap().bwt, naive_bwt(&t));
        }

        #[test]
        fn default_path_matches_naive(body in proptest::collection::vec(1u32..16, 0..600)) {
            let mut t = body;
            t.push(0);
            prop_assert_eq!(build_bwt(&t, 16).unwrap(), naive_bwt(&t));
        }
    }
}
