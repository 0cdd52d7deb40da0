/// Bits per rank superblock.
const SUPER: usize = 512;
const WORDS_PER_SUPER: usize = SUPER / 64;
/// One select sample every `SEL_SAMPLE` ones (or zeros).
const SEL_SAMPLE: usize = 1024;

/// Static bitvector with rank and select directories.
///
/// The rank directory stores one absolute count per 512 bits (12.5%
/// overhead); select keeps one superblock pointer per 1024 ones and zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
    supers: Vec<u64>,
    sel1: Vec<u32>,
    sel0: Vec<u32>,
    ones: usize,
}

/// Append-only builder for [`BitVector`].
#[derive(Clone, Debug, Default)]
pub struct BitVectorBuilder {
    words: Vec<u64>,
    len: usize,
}

impl BitVectorBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self { words: Vec::with_capacity(bits.div_ceil(64)), len: 0 }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1 << (self.len % 64);
        }
        self.len += 1;
    }

    pub fn push_run(&mut self, bit: bool, mut count: usize) {
        while count > 0 && !self.len.is_multiple_of(64) {
            self.push(bit);
            count -= 1;
        }
        let fill = if bit { u64::MAX } else { 0 };
        while count >= 64 {
            self.words.push(fill);
            self.len += 64;
            count -= 64;
        }
        for _ in 0..count {
            self.push(bit);
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn finish(self) -> BitVector {
        BitVector::from_words(self.words, self.len)
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut b = BitVectorBuilder::new();
        for bit in iter {
            b.push(bit);
        }
        b.finish()
    }
}

fn select_in_word(mut w: u64, mut r: u32) -> usize {
    // r is 0-based among the set bits of w.
    let mut base = 0;
    loop {
        let c = (w & 0xff).count_ones();
        if r < c {
            break;
        }
        r -= c;
        w >>= 8;
        base += 8;
    }
    for _ in 0..r {
        w &= w - 1;
    }
    base + w.trailing_zeros() as usize
}

impl BitVector {
    /// Builds from packed words (bit `i` is bit `i % 64` of word `i / 64`).
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(64), 0);
        if !len.is_multiple_of(64) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % 64)) - 1;
        }
        let nsup = len.div_ceil(SUPER);
        let mut supers = Vec::with_capacity(nsup + 1);
        let mut acc = 0u64;
        for s in 0..nsup {
            supers.push(acc);
            let end = ((s + 1) * WORDS_PER_SUPER).min(words.len());
            for w in &words[s * WORDS_PER_SUPER..end] {
                acc += w.count_ones() as u64;
            }
        }
        supers.push(acc);
        let ones = acc as usize;
        let mut sel1 = Vec::new();
        let mut sel0 = Vec::new();
        for s in 0..nsup {
            // Superblock s holds every sampled one whose 0-based rank is below hi1.
            let hi1 = supers[s + 1] as usize;
            while sel1.len() * SEL_SAMPLE < hi1 {
                sel1.push(s as u32);
            }
            let hi0 = ((s + 1) * SUPER).min(len) - hi1;
            while sel0.len() * SEL_SAMPLE < hi0 {
                sel0.push(s as u32);
            }
        }
        Self { words, len, supers, sel1, sel0, ones }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Ones in `[0, i)`, for `i <= len`.
    #[inline]
    pub fn rank1_before(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let s = i / SUPER;
        let mut r = self.supers[s] as usize;
        let w = i / 64;
        for k in s * WORDS_PER_SUPER..w {
            r += self.words[k].count_ones() as usize;
        }
        if !i.is_multiple_of(64) {
            r += (self.words[w] & ((1u64 << (i % 64)) - 1)).count_ones() as usize;
        }
        r
    }

    /// Ones in `[0, i]`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        self.rank1_before(i + 1)
    }

    /// Zeros in `[0, i)`.
    #[inline]
    pub fn rank0_before(&self, i: usize) -> usize {
        i - self.rank1_before(i)
    }

    /// Zeros in `[0, i]`.
    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i + 1 - self.rank1(i)
    }

    fn ones_before_super(&self, s: usize) -> usize {
        self.supers[s] as usize
    }

    fn zeros_before_super(&self, s: usize) -> usize {
        s * SUPER - self.supers[s] as usize
    }

    /// Position of the `k`-th one (1-based).
    pub fn select1(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.ones {
            return None;
        }
        let t = k - 1;
        let mut lo = self.sel1[t / SEL_SAMPLE] as usize;
        let mut hi = self
            .sel1
            .get(t / SEL_SAMPLE + 1)
            .map(|&s| s as usize + 1)
            .unwrap_or(self.supers.len() - 1);
        // Last superblock in [lo, hi) with ones_before <= t.
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.ones_before_super(mid) <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut rem = t - self.ones_before_super(lo);
        let mut w = lo * WORDS_PER_SUPER;
        loop {
            let c = self.words[w].count_ones() as usize;
            if rem < c {
                return Some(w * 64 + select_in_word(self.words[w], rem as u32));
            }
            rem -= c;
            w += 1;
        }
    }

    /// Position of the `k`-th zero (1-based).
    pub fn select0(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.len - self.ones {
            return None;
        }
        let t = k - 1;
        let mut lo = self.sel0[t / SEL_SAMPLE] as usize;
        let mut hi = self
            .sel0
            .get(t / SEL_SAMPLE + 1)
            .map(|&s| s as usize + 1)
            .unwrap_or(self.supers.len() - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.zeros_before_super(mid) <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut rem = t - self.zeros_before_super(lo);
        let mut w = lo * WORDS_PER_SUPER;
        loop {
            let valid = (self.len - w * 64).min(64);
            let inv = if valid == 64 { !self.words[w] } else { !self.words[w] & ((1u64 << valid) - 1) };
            let c = inv.count_ones() as usize;
            if rem < c {
                return Some(w * 64 + select_in_word(inv, rem as u32));
            }
            rem -= c;
            w += 1;
        }
    }

    /// Heap bytes used, including directories.
    pub fn size_bytes(&self) -> usize {
        8 * (self.words.len() + self.supers.len()) + 4 * (self.sel0.len() + self.sel1.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_select(bits: &[bool], b: bool, k: usize) -> Option<usize> {
        bits.iter().enumerate().filter(|(_, &x)| x == b).nth(k.checked_sub(1)?).map(|(i, _)| i)
    }

    #[test]
    fn small_vector() {
        let bv: BitVector = [true, false, true, true, false].into_iter().collect();
        assert_eq!(bv.rank1(0), 1);
        assert_eq!(bv.rank1(3), 3);
        assert_eq!(bv.rank0(4), 2);
        assert_eq!(bv.select1(3), Some(3));
        assert_eq!(bv.select0(2), Some(4));
        assert_eq!(bv.select0(3), None);
        assert_eq!(bv.select1(0), None);
    }

    #[test]
    fn runs_across_words() {
        let mut b = BitVectorBuilder::new();
        b.push(true);
        b.push_run(false, 3000);
        b.push_run(true, 5000);
        b.push(false);
        let bv = b.finish();
        assert_eq!(bv.len(), 8002);
        assert_eq!(bv.count_ones(), 5001);
        assert_eq!(bv.select1(2), Some(3001));
        assert_eq!(bv.select1(5001), Some(8000));
        assert_eq!(bv.select0(3001), Some(8001));
        assert_eq!(bv.rank1_before(3001), 1);
    }

    proptest! {
        #[test]
        fn rank_select_match_naive(bits in proptest::collection::vec(any::<bool>(), 0..5000), density in 1u32..8) {
            let bits: Vec<bool> = bits.iter().enumerate().map(|(i, &b)| b && (i as u32).is_multiple_of(density) || (density == 7 && !b)).collect();
            let bv: BitVector = bits.iter().copied().collect();
            let mut ones = 0;
            for (i, &b) in bits.iter().enumerate() {
                prop_assert_eq!(bv.rank1_before(i), ones);
                prop_assert_eq!(bv.get(i), b);
                if b { ones += 1; }
            }
            prop_assert_eq!(bv.count_ones(), ones);
            for k in 0..=ones + 1 {
                prop_assert_eq!(bv.select1(k), naive_select(&bits, true, k));
            }
            for k in 0..=(bits.len() - ones) + 1 {
                prop_assert_eq!(bv.select0(k), naive_select(&bits, false, k));
            }
        }
    }
}
