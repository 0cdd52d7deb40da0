use super::{BitVector, BitVectorBuilder};
use crate::util::{bits_for, radix_sort_by_key};
use crate::Symbol;

/// Wavelet matrix over an integer alphabet.
///
/// Rank, select and access cost one bitvector operation per level, i.e.
/// `ceil(log2 sigma)` operations; constant for the small alphabets it is
/// used with.
#[derive(Clone, Debug)]
pub struct SmallAlphabetSeq {
    len: usize,
    sigma: usize,
    levels: Vec<BitVector>,
    zeros: Vec<usize>,
    /// Where each symbol's run starts after the last level.
    starts: Vec<usize>,
}

impl SmallAlphabetSeq {
    pub fn new(seq: &[Symbol], sigma: usize) -> Self {
        let nlev = bits_for(sigma as u64) as usize;
        let mut cur: Vec<Symbol> = seq.to_vec();
        let mut next = vec![0 as Symbol; seq.len()];
        let mut levels = Vec::with_capacity(nlev);
        let mut zeros = Vec::with_capacity(nlev);
        for l in 0..nlev {
            let shift = nlev - 1 - l;
            let mut b = BitVectorBuilder::with_capacity(seq.len());
            let mut z = 0;
            for &s in &cur {
                let bit = (s >> shift) & 1 == 1;
                b.push(bit);
                if !bit {
                    z += 1;
                }
            }
            let (mut zi, mut oi) = (0, z);
            for &s in &cur {
                if (s >> shift) & 1 == 0 {
                    next[zi] = s;
                    zi += 1;
                } else {
                    next[oi] = s;
                    oi += 1;
                }
            }
            std::mem::swap(&mut cur, &mut next);
            levels.push(b.finish());
            zeros.push(z);
        }
        let mut w = Self { len: seq.len(), sigma, levels, zeros, starts: Vec::new() };
        w.starts = (0..sigma as Symbol).map(|a| w.descend(a, 0)).collect();
        w
    }

    /// Position after the last level of `p` following the bits of `a`.
    #[inline]
    fn descend(&self, a: Symbol, mut p: usize) -> usize {
        let nlev = self.levels.len();
        for (l, bv) in self.levels.iter().enumerate() {
            p = if (a >> (nlev - 1 - l)) & 1 == 1 { self.zeros[l] + bv.rank1_before(p) } else { bv.rank0_before(p) };
        }
        p
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn access(&self, mut i: usize) -> Symbol {
        let mut s = 0;
        for (l, bv) in self.levels.iter().enumerate() {
            let bit = bv.get(i);
            s = (s << 1) | bit as Symbol;
            i = if bit { self.zeros[l] + bv.rank1_before(i) } else { bv.rank0_before(i) };
        }
        s
    }

    /// Occurrences of `a` in `[0, end)`.
    pub fn rank_before(&self, a: Symbol, end: usize) -> usize {
        if a as usize >= self.sigma {
            return 0;
        }
        self.descend(a, end) - self.starts[a as usize]
    }

    /// `rank_before(a, end)` for every `(a, end)`, written to `out`.
    ///
    /// The queries descend the levels together, sorted by position. Each
    /// level splits them stably into a zero part, which maps below the
    /// level's zero count, and a one part, which maps above it, so the order
    /// stays sorted and every level is read front to back.
    pub fn batch_rank_before(&self, queries: &[(Symbol, usize)], out: &mut [usize]) {
        assert_eq!(queries.len(), out.len());
        let mut cur: Vec<(u32, usize)> = queries.iter().enumerate().map(|(k, &(_, e))| (k as u32, e)).collect();
        radix_sort_by_key(&mut cur, bits_for(self.len as u64), |x| x.1 as u64);
        let mut ones: Vec<(u32, usize)> = Vec::with_capacity(cur.len());
        let nlev = self.levels.len();
        for (l, bv) in self.levels.iter().enumerate() {
            let shift = nlev - 1 - l;
            let z = self.zeros[l];
            ones.clear();
            let mut kept = 0;
            for k in 0..cur.len() {
                let (q, p) = cur[k];
                let r1 = bv.rank1_before(p);
                if (queries[q as usize].0 >> shift) & 1 == 1 {
                    ones.push((q, z + r1));
                } else {
                    cur[kept] = (q, p - r1);
                    kept += 1;
                }
            }
            cur.truncate(kept);
            cur.extend_from_slice(&ones);
        }
        for &(q, p) in &cur {
            let a = queries[q as usize].0 as usize;
            out[q as usize] = if a < self.sigma { p - self.starts[a] } else { 0 };
        }
    }

    /// Occurrences of `a` in `[0, i]`.
    pub fn rank(&self, a: Symbol, i: usize) -> usize {
        self.rank_before(a, i + 1)
    }

    /// Position of the `k`-th (1-based) `a`.
    pub fn select(&self, a: Symbol, k: usize) -> Option<usize> {
        if k == 0 || a as usize >= self.sigma || self.rank_before(a, self.len) < k {
            return None;
        }
        let nlev = self.levels.len();
        let mut p = self.starts[a as usize] + k - 1;
        for (l, bv) in self.levels.iter().enumerate().rev() {
            p = if (a >> (nlev - 1 - l)) & 1 == 1 {
                bv.select1(p - self.zeros[l] + 1).unwrap()
            } else {
                bv.select0(p + 1).unwrap()
            };
        }
        Some(p)
    }

    pub fn size_bytes(&self) -> usize {
        self.levels.iter().map(|b| b.size_bytes()).sum::<usize>() + 8 * (self.zeros.len() + self.starts.len())
    }
}
