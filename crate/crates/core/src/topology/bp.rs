//! Balanced parentheses with a range min-max tree over excess values.
//!
//! `E(i)` is the number of opening minus closing parentheses in `P[0..=i]`,
//! with `E(-1) = 0`. Nodes are identified by the position of their opening
//! parenthesis. Blocks are single words; a segment tree keeps, per range
//! of blocks, the minimum excess and the number of positions reaching it.

use crate::bits::BitVector;

const BLOCK: usize = 64;

/// Per byte (bit 0 first): total excess change, minimum prefix excess and
/// how many prefixes reach it.
struct ByteTable {
    sum: [i8; 256],
    min: [i8; 256],
    cnt: [u8; 256],
}

const fn byte_table() -> ByteTable {
    let mut t = ByteTable { sum: [0; 256], min: [0; 256], cnt: [0; 256] };
    let mut b = 0;
    while b < 256 {
        let mut e: i8 = 0;
        let mut m: i8 = i8::MAX;
        let mut c: u8 = 0;
        let mut k = 0;
        while k < 8 {
            e += if (b >> k) & 1 == 1 { 1 } else { -1 };
            if e < m {
                m = e;
                c = 1;
            } else if e == m {
                c += 1;
            }
            k += 1;
        }
        t.sum[b] = e;
        t.min[b] = m;
        t.cnt[b] = c;
        b += 1;
    }
    t
}

static BYTES: ByteTable = byte_table();

#[derive(Clone, Debug)]
pub struct Parens {
    bits: BitVector,
    /// Segment tree over blocks, leaves at `size + b`.
    size: usize,
    min: Vec<i32>,
    cnt: Vec<u32>,
}

impl Parens {
    pub fn new(bits: BitVector) -> Self {
        let nb = bits.len().div_ceil(BLOCK);
        let size = nb.next_power_of_two().max(1);
        let mut min = vec![i32::MAX; 2 * size];
        let mut cnt = vec![0u32; 2 * size];
        let mut p = Self { bits, size, min: Vec::new(), cnt: Vec::new() };
        for b in 0..nb {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(p.bits.len());
            let (m, c) = p.scan_min(lo, hi - 1, p.before(lo));
            min[size + b] = m;
            cnt[size + b] = c;
        }
        for v in (1..size).rev() {
            let (m, c) = merge((min[2 * v], cnt[2 * v]), (min[2 * v + 1], cnt[2 * v + 1]));
            min[v] = m;
            cnt[v] = c;
        }
        p.min = min;
        p.cnt = cnt;
        p
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    #[inline]
    pub fn is_open(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    #[inline]
    fn step(&self, i: usize) -> i32 {
        if self.bits.get(i) {
            1
        } else {
            -1
        }
    }

    /// `E(i - 1)`, the excess before position `i`.
    #[inline]
    pub fn before(&self, i: usize) -> i32 {
        2 * self.bits.rank1_before(i) as i32 - i as i32
    }

    /// `E(i)`.
    #[inline]
    pub fn excess(&self, i: usize) -> i32 {
        self.before(i + 1)
    }

    fn byte_at(&self, p: usize) -> usize {
        debug_assert!(p.is_multiple_of(8));
        ((self.bits.words()[p / 64] >> (p % 64)) & 0xff) as usize
    }

    /// Minimum of `E` over `[lo, hi]` and its multiplicity, given `E(lo - 1)`.
    fn scan_min(&self, lo: usize, hi: usize, mut e: i32) -> (i32, u32) {
        let (mut m, mut c) = (i32::MAX, 0u32);
        let mut p = lo;
        while p <= hi {
            if p.is_multiple_of(8) && p + 7 <= hi {
                let b = self.byte_at(p);
                let bm = e + BYTES.min[b] as i32;
                if bm < m {
                    m = bm;
                    c = BYTES.cnt[b] as u32;
                } else if bm == m {
                    c += BYTES.cnt[b] as u32;
                }
                e += BYTES.sum[b] as i32;
                p += 8;
                continue;
            }
            e += self.step(p);
            if e < m {
                m = e;
                c = 1;
            } else if e == m {
                c += 1;
            }
            p += 1;
        }
        (m, c)
    }

    /// First `p` in `[lo, hi]` with `E(p) <= t`, given `E(lo - 1)`.
    fn scan_fwd(&self, lo: usize, hi: usize, mut e: i32, t: i32) -> Option<usize> {
        let mut p = lo;
        while p <= hi {
            if p.is_multiple_of(8) && p + 7 <= hi {
                let b = self.byte_at(p);
                if e + BYTES.min[b] as i32 > t {
                    e += BYTES.sum[b] as i32;
                    p += 8;
                    continue;
                }
            }
            e += self.step(p);
            if e <= t {
                return Some(p);
            }
            p += 1;
        }
        None
    }

    /// Last `p` in `[lo, hi]` with `E(p) <= t`, given `E(hi)`.
    fn scan_bwd(&self, lo: usize, hi: usize, e_hi: i32, t: i32) -> Option<usize> {
        let mut p = hi as isize;
        let mut e = e_hi;
        while p >= lo as isize {
            let q = p as usize;
            if (q + 1).is_multiple_of(8) && q >= lo + 7 {
                let b = self.byte_at(q - 7);
                let start = e - BYTES.sum[b] as i32;
                if start + BYTES.min[b] as i32 > t {
                    e = start;
                    p -= 8;
                    continue;
                }
            }
            if e <= t {
                return Some(q);
            }
            e -= self.step(q);
            p -= 1;
        }
        None
    }

    /// `k`-th (1-based) `p` in `[lo, hi]` with `E(p) == m`, given `E(lo - 1)`.
    fn scan_kth(&self, lo: usize, hi: usize, mut e: i32, m: i32, k: &mut u32) -> Option<usize> {
        for p in lo..=hi {
            e += self.step(p);
            if e == m {
                *k -= 1;
                if *k == 0 {
                    return Some(p);
                }
            }
        }
        None
    }

    fn block_range(b: usize) -> (usize, usize) {
        (b * BLOCK, (b + 1) * BLOCK - 1)
    }

    /// First block `>= from` whose minimum is `<= t`, climbing from the
    /// leaf so nearby answers are cheap.
    fn seg_first_le(&self, from: usize, t: i32) -> Option<usize> {
        if from >= self.size {
            return None;
        }
        let mut v = self.size + from;
        loop {
            if self.min[v] <= t {
                while v < self.size {
                    v *= 2;
                    if self.min[v] > t {
                        v += 1;
                    }
                }
                return Some(v - self.size);
            }
            while v > 1 && v & 1 == 1 {
                v >>= 1;
            }
            if v == 1 {
                return None;
            }
            v += 1;
        }
    }

    /// Last block `<= upto` whose minimum is `<= t`.
    fn seg_last_le(&self, upto: usize, t: i32) -> Option<usize> {
        let mut v = self.size + upto;
        loop {
            if self.min[v] <= t {
                while v < self.size {
                    v = 2 * v + 1;
                    if self.min[v] > t {
                        v -= 1;
                    }
                }
                return Some(v - self.size);
            }
            while v > 1 && v & 1 == 0 {
                v >>= 1;
            }
            if v == 1 {
                return None;
            }
            v -= 1;
        }
    }

    /// Minimum and count over blocks `[lo, hi]`.
    fn seg_min(&self, lo: usize, hi: usize) -> (i32, u32) {
        let mut acc = (i32::MAX, 0);
        let (mut l, mut r) = (lo + self.size, hi + self.size + 1);
        while l < r {
            if l & 1 == 1 {
                acc = merge(acc, (self.min[l], self.cnt[l]));
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                acc = merge(acc, (self.min[r], self.cnt[r]));
            }
            l >>= 1;
            r >>= 1;
        }
        acc
    }

    fn seg_kth(&self, v: usize, nl: usize, nr: usize, lo: usize, hi: usize, m: i32, k: &mut u32) -> Option<usize> {
        if hi < nl || nr < lo || self.min[v] > m {
            return None;
        }
        if lo <= nl && nr <= hi {
            // Inside the range the minimum is at least `m`.
            if self.min[v] != m {
                return None;
            }
            if self.cnt[v] < *k {
                *k -= self.cnt[v];
                return None;
            }
        }
        if nl == nr {
            return Some(nl);
        }
        let mid = (nl + nr) / 2;
        self.seg_kth(2 * v, nl, mid, lo, hi, m, k).or_else(|| self.seg_kth(2 * v + 1, mid + 1, nr, lo, hi, m, k))
    }

    /// Smallest `j > i` with `E(j) <= t`.
    pub fn fwd_first_le(&self, i: usize, t: i32) -> Option<usize> {
        let n = self.len();
        if i + 1 >= n {
            return None;
        }
        let b = (i + 1) / BLOCK;
        let end = ((b + 1) * BLOCK - 1).min(n - 1);
        if let Some(p) = self.scan_fwd(i + 1, end, self.excess(i), t) {
            return Some(p);
        }
        let nb = self.seg_first_le(b + 1, t)?;
        let (lo, hi) = Self::block_range(nb);
        self.scan_fwd(lo, hi.min(n - 1), self.before(lo), t)
    }

    /// Largest `j < i` with `E(j) <= t`; `-1` stands for the virtual
    /// position before the sequence, whose excess is `0`.
    pub fn bwd_last_le(&self, i: usize, t: i32) -> Option<isize> {
        if i > 0 {
            let b = (i - 1) / BLOCK;
            let (lo, _) = Self::block_range(b);
            if let Some(p) = self.scan_bwd(lo, i - 1, self.excess(i - 1), t) {
                return Some(p as isize);
            }
            if b > 0 {
                if let Some(nb) = self.seg_last_le(b - 1, t) {
                    let (lo, hi) = Self::block_range(nb);
                    return self.scan_bwd(lo, hi, self.excess(hi), t).map(|p| p as isize);
                }
            }
        }
        (t >= 0).then_some(-1)
    }

    /// Minimum of `E` over `[i, j]` and the number of positions reaching it.
    pub fn range_min(&self, i: usize, j: usize) -> (i32, u32) {
        debug_assert!(i <= j && j < self.len());
        let (bi, bj) = (i / BLOCK, j / BLOCK);
        if bi == bj {
            return self.scan_min(i, j, self.before(i));
        }
        let first = self.scan_min(i, (bi + 1) * BLOCK - 1, self.before(i));
        let last = self.scan_min(bj * BLOCK, j, self.before(bj * BLOCK));
        let mid = if bj > bi + 1 { self.seg_min(bi + 1, bj - 1) } else { (i32::MAX, 0) };
        merge(merge(first, mid), last)
    }

    /// `k`-th (1-based) position in `[i, j]` where `E` equals `m`, the
    /// minimum over that range.
    pub fn select_min(&self, i: usize, j: usize, m: i32, k: u32) -> Option<usize> {
        let mut k = k;
        let (bi, bj) = (i / BLOCK, j / BLOCK);
        let first_hi = if bi == bj { j } else { (bi + 1) * BLOCK - 1 };
        if let Some(p) = self.scan_kth(i, first_hi, self.before(i), m, &mut k) {
            return Some(p);
        }
        if bi == bj {
            return None;
        }
        if bj > bi + 1 {
            if let Some(b) = self.seg_kth(1, 0, self.size - 1, bi + 1, bj - 1, m, &mut k) {
                let (lo, hi) = Self::block_range(b);
                return self.scan_kth(lo, hi, self.before(lo), m, &mut k);
            }
        }
        let lo = bj * BLOCK;
        self.scan_kth(lo, j, self.before(lo), m, &mut k)
    }

    /// Matching closing parenthesis of the opening one at `i`.
    pub fn find_close(&self, i: usize) -> usize {
        debug_assert!(self.is_open(i));
        self.fwd_first_le(i, self.excess(i) - 1).expect("balanced")
    }

    /// Matching opening parenthesis of the closing one at `j`.
    pub fn find_open(&self, j: usize) -> usize {
        debug_assert!(!self.is_open(j));
        (self.bwd_last_le(j, self.excess(j)).expect("balanced") + 1) as usize
    }

    /// Opening parenthesis of the pair that strictly encloses `i`.
    pub fn enclose(&self, i: usize) -> Option<usize> {
        let t = self.excess(i) - 2;
        if t < 0 {
            return None;
        }
        self.bwd_last_le(i, t).map(|p| (p + 1) as usize)
    }

    /// Lowest common ancestor of the nodes opened at `u` and `v`.
    pub fn lca(&self, u: usize, v: usize) -> usize {
        let (a, b) = (u.min(v), u.max(v));
        let (m, _) = self.range_min(a, b);
        (self.bwd_last_le(a, m - 1).expect("balanced") + 1) as usize
    }

    pub fn size_bytes(&self) -> usize {
        self.bits.size_bytes() + 4 * (self.min.len() + self.cnt.len())
    }
}

fn merge(a: (i32, u32), b: (i32, u32)) -> (i32, u32) {
    match a.0.cmp(&b.0) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => (a.0, a.1 + b.1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_tree(shape: &[u8]) -> Vec<bool> {
        // Grow a tree by a random walk: 1 opens, 0 closes when possible.
        let mut bp = vec![true];
        let mut depth = 1;
        for &s in shape {
            if s % 3 != 0 || depth == 1 {
                bp.push(true);
                depth += 1;
            } else {
                bp.push(false);
                depth -= 1;
            }
        }
        while depth > 0 {
            bp.push(false);
            depth -= 1;
        }
        bp
    }

    /// `ex[i + 1] = E(i)`, `ex[0] = E(-1) = 0`.
    fn excess_table(bp: &[bool]) -> Vec<i32> {
        let mut ex = vec![0];
        for &b in bp {
            ex.push(ex.last().unwrap() + if b { 1 } else { -1 });
        }
        ex
    }

    proptest! {
        #[test]
        fn navigation_matches_scan(shape in proptest::collection::vec(any::<u8>(), 0..400)) {
            let bp = random_tree(&shape);
            let p = Parens::new(bp.iter().copied().collect());
            let n = bp.len();
            let ex = excess_table(&bp);
            let excess = |_: &[bool], i: isize| ex[(i + 1) as usize];
            for i in 0..n {
                prop_assert_eq!(p.excess(i), excess(&bp, i as isize));
                for t in [excess(&bp, i as isize) - 1, excess(&bp, i as isize) - 2, 0] {
                    let want = (i + 1..n).find(|&j| excess(&bp, j as isize) <= t);
                    prop_assert_eq!(p.fwd_first_le(i, t), want);
                    let mut want = (0..i).rev().find(|&j| excess(&bp, j as isize) <= t).map(|j| j as isize);
                    if want.is_none() && t >= 0 {
                        want = Some(-1);
                    }
                    prop_assert_eq!(p.bwd_last_le(i, t), want);
                }
            }
            for i in (0..n).step_by(5) {
                for j in (i..n).step_by(7) {
                    let vals: Vec<i32> = (i..=j).map(|k| excess(&bp, k as isize)).collect();
                    let m = *vals.iter().min().unwrap();
                    let c = vals.iter().filter(|&&x| x == m).count() as u32;
                    prop_assert_eq!(p.range_min(i, j), (m, c));
                    for k in 1..=c {
                        let want = (i..=j).filter(|&q| excess(&bp, q as isize) == m).nth(k as usize - 1);
                        prop_assert_eq!(p.select_min(i, j, m, k), want);
                    }
                }
            }
        }
    }

    #[test]
    fn matching_and_lca() {
        // ( ( ) ( ( ) ( ) ) )
        let s = "(()(()()))";
        let p = Parens::new(s.chars().map(|c| c == '(').collect());
        assert_eq!(p.find_close(0), 9);
        assert_eq!(p.find_close(3), 8);
        assert_eq!(p.find_open(8), 3);
        assert_eq!(p.enclose(4), Some(3));
        assert_eq!(p.enclose(3), Some(0));
        assert_eq!(p.enclose(0), None);
        assert_eq!(p.lca(4, 6), 3);
        assert_eq!(p.lca(1, 6), 0);
        assert_eq!(p.lca(3, 6), 3);
        assert_eq!(p.lca(6, 6), 6);
    }
}
