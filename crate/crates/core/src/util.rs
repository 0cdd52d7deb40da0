use crate::{Error, Result, Symbol};

/// `max(1, floor(log2 n))`.
pub(crate) fn lg(n: usize) -> usize {
    if n < 2 {
        1
    } else {
        (usize::BITS - 1 - n.leading_zeros()) as usize
    }
}

/// Smallest `k` with `2^k >= n`; `0` for `n <= 1`.
pub(crate) fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// `floor(log_base n)` for `base >= 2`, `n >= 1`.
pub(crate) fn floor_log(n: usize, base: usize) -> usize {
    debug_assert!(base >= 2);
    let mut k = 0;
    let mut p: u128 = base as u128;
    while p <= n as u128 {
        p *= base as u128;
        k += 1;
    }
    k
}

/// Checks that `text` ends with a unique `0` sentinel and all symbols are
/// below `sigma`.
pub(crate) fn check_text(text: &[Symbol], sigma: usize) -> Result<()> {
    match text.last() {
        None => return Err(Error::InvalidText("empty text".into())),
        Some(&0) => {}
        Some(_) => return Err(Error::InvalidText("text must end with sentinel 0".into())),
    }
    if text[..text.len() - 1].contains(&0) {
        return Err(Error::InvalidText("sentinel 0 occurs before the end".into()));
    }
    if let Some(&m) = text.iter().max() {
        if m as usize >= sigma {
            return Err(Error::InvalidText(format!("symbol {m} outside alphabet of size {sigma}")));
        }
    }
    Ok(())
}

/// Stable LSD radix sort of `items` by the low `key_bits` of `key(item)`.
pub(crate) fn radix_sort_by_key<T: Copy, F: Fn(&T) -> u64>(items: &mut Vec<T>, key_bits: u32, key: F) {
    const DIGIT: u32 = 11;
    if items.len() < 64 {
        items.sort_by_key(|x| key(x));
        return;
    }
    let mut buf = items.clone();
    let mut shift = 0;
    let mut counts = vec![0usize; 1 << DIGIT];
    while shift < key_bits.max(1) {
        counts.iter_mut().for_each(|c| *c = 0);
        let mask = (1u64 << DIGIT) - 1;
        for it in items.iter() {
            counts[((key(it) >> shift) & mask) as usize] += 1;
        }
        let mut sum = 0;
        for c in counts.iter_mut() {
            let t = *c;
            *c = sum;
            sum += t;
        }
        for it in items.iter() {
            let d = ((key(it) >> shift) & mask) as usize;
            buf[counts[d]] = *it;
            counts[d] += 1;
        }
        std::mem::swap(items, &mut buf);
        shift += DIGIT;
    }
}

/// Number of bits needed to represent values `< n`.
pub(crate) fn bits_for(n: u64) -> u32 {
    if n <= 1 {
        1
    } else {
        64 - (n - 1).leading_zeros()
    }
}
