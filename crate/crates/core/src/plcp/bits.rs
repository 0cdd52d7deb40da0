//! PLCP in `2n` bits: `l_i + i` never decreases, so the gaps between
//! consecutive values are written in unary.

use crate::bits::{BitVector, BitVectorBuilder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlcpBits {
    n: usize,
    /// For each `i`, `(l_i + i) - (l_{i-1} + i - 1)` zeros and then a one.
    bits: BitVector,
}

impl PlcpBits {
    /// Panics if `l_i + 1 < l_{i-1}` somewhere, which no PLCP array does.
    pub fn from_values(values: &[u32]) -> Self {
        let mut b = BitVectorBuilder::with_capacity(2 * values.len() + 1);
        let mut prev = 0usize;
        for (i, &v) in values.iter().enumerate() {
            let cur = v as usize + i;
            assert!(cur >= prev, "not a PLCP array at {i}");
            b.push_run(false, cur - prev);
            b.push(true);
            prev = cur;
        }
        Self { n: values.len(), bits: b.finish() }
    }

    pub fn from_bits(n: usize, bits: BitVector) -> Self {
        Self { n, bits }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn get(&self, i: usize) -> u32 {
        let p = self.bits.select1(i + 1).expect("index in range");
        (p - 2 * i) as u32
    }

    pub fn to_vec(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n);
        let mut zeros = 0usize;
        for k in 0..self.bits.len() {
            if self.bits.get(k) {
                out.push((zeros - out.len()) as u32);
            } else {
                zeros += 1;
            }
        }
        out
    }

    pub fn size_bytes(&self) -> usize {
        self.bits.size_bytes()
    }
}
