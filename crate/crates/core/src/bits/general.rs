use std::sync::Arc;

use crate::Symbol;

/// Sequence over a large alphabet with constant-time access and select.
///
/// Occurrences of every symbol are stored as a sorted position list, so
/// `select` is a lookup and `rank` a binary search inside one list.
#[derive(Clone, Debug)]
pub struct GeneralSeq {
    seq: Arc<[Symbol]>,
    starts: Vec<u32>,
    pos: Vec<u32>,
}

impl GeneralSeq {
    pub fn new(seq: Arc<[Symbol]>, sigma: usize) -> Self {
        let mut starts = vec![0u32; sigma + 1];
        for &s in seq.iter() {
            starts[s as usize + 1] += 1;
        }
        for a in 1..=sigma {
            starts[a] += starts[a - 1];
        }
        let mut next = starts[..sigma].to_vec();
        let mut pos = vec![0u32; seq.len()];
        for (i, &s) in seq.iter().enumerate() {
            pos[next[s as usize] as usize] = i as u32;
            next[s as usize] += 1;
        }
        Self { seq, starts, pos }
    }

    pub fn from_slice(seq: &[Symbol], sigma: usize) -> Self {
        Self::new(seq.into(), sigma)
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn sigma(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn symbols(&self) -> &Arc<[Symbol]> {
        &self.seq
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.seq
    }

    #[inline]
    pub fn access(&self, i: usize) -> Symbol {
        self.seq[i]
    }

    fn occ(&self, a: Symbol) -> &[u32] {
        if a as usize >= self.sigma() {
            return &[];
        }
        &self.pos[self.starts[a as usize] as usize..self.starts[a as usize + 1] as usize]
    }

    /// Total occurrences of `a`.
    pub fn count(&self, a: Symbol) -> usize {
        self.occ(a).len()
    }

    /// Occurrences of `a` in `[0, end)`.
    #[inline]
    pub fn rank_before(&self, a: Symbol, end: usize) -> usize {
        self.occ(a).partition_point(|&p| (p as usize) < end)
    }

    /// Occurrences of `a` in `[0, i]`.
    #[inline]
    pub fn rank(&self, a: Symbol, i: usize) -> usize {
        self.rank_before(a, i + 1)
    }

    /// Position of the `k`-th (1-based) `a`.
    #[inline]
    pub fn select(&self, a: Symbol, k: usize) -> Option<usize> {
        if k == 0 {
            return None;
        }
        self.occ(a).get(k - 1).map(|&p| p as usize)
    }

    pub fn size_bytes(&self) -> usize {
        4 * (self.seq.len() + self.pos.len() + self.starts.len())
    }
}
