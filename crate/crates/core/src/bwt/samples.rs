//! Suffix-array samples: the rows of every `step`-th text position, found
//! by one LF sweep over the BWT.

use crate::bits::{BitVector, BitVectorBuilder};
use crate::rank_ext::RankedSeq;

/// Rows of positions `0, step, 2*step, ...` plus the last position, and
/// the inverse map from marked rows back to positions.
#[derive(Clone, Debug)]
pub struct SuffixSamples {
    step: usize,
    n: usize,
    /// `rows[j]` is the row of position `j * step`.
    rows: Vec<u32>,
    /// Rows whose position is sampled.
    marked: BitVector,
    /// Position of each marked row, in row order.
    positions: Vec<u32>,
}

impl SuffixSamples {
    pub fn new(bwt: &RankedSeq, step: usize) -> Self {
        assert!(step > 0);
        let n = bwt.len();
        let mut rows = vec![0u32; (n - 1) / step + 1];
        let mut pos_of_row = vec![u32::MAX; n];
        // Row 0 holds the sentinel suffix at position n - 1.
        let mut r = 0;
        for p in (0..n).rev() {
            if p % step == 0 {
                rows[p / step] = r as u32;
                pos_of_row[r] = p as u32;
            }
            if p == n - 1 {
                pos_of_row[r] = p as u32;
            }
            r = bwt.lf(r);
        }
        let mut marked = BitVectorBuilder::with_capacity(n);
        let mut positions = Vec::with_capacity(rows.len() + 1);
        for &p in &pos_of_row {
            marked.push(p != u32::MAX);
            if p != u32::MAX {
                positions.push(p);
            }
        }
        Self { step, n, rows, marked: marked.finish(), positions }
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of sampled positions `0, step, ...`.
    pub fn count(&self) -> usize {
        self.rows.len()
    }

    /// Row of position `j * step`.
    #[inline]
    pub fn row_of_sample(&self, j: usize) -> usize {
        self.rows[j] as usize
    }

    /// Position of `row` if it is sampled.
    #[inline]
    pub fn sampled_position(&self, row: usize) -> Option<usize> {
        self.marked.get(row).then(|| self.positions[self.marked.rank1_before(row)] as usize)
    }

    /// Text position of `row`, by LF steps up to the nearest sample.
    /// Returns the position and the number of steps taken.
    pub fn position(&self, bwt: &RankedSeq, row: usize) -> (usize, usize) {
        let mut r = row;
        let mut steps = 0;
        loop {
            if let Some(p) = self.sampled_position(r) {
                return ((p + steps) % self.n, steps);
            }
            r = bwt.lf(r);
            steps += 1;
        }
    }

    pub fn size_bytes(&self) -> usize {
        4 * (self.rows.len() + self.positions.len()) + self.marked.size_bytes()
    }
}
