//! Induced-sorting suffix array construction.

use crate::{Error, Result};

const EMPTY: u32 = u32::MAX;

/// Suffix array of `seq` in linear time.
///
/// `seq` must end with a unique `0` and every symbol must be below `sigma`.
pub fn linear_suffix_array(seq: &[u32], sigma: usize) -> Result<Vec<u32>> {
    match seq.last() {
        None => return Err(Error::InvalidInput("empty sequence".into())),
        Some(&0) => {}
        Some(_) => return Err(Error::InvalidInput("sequence must end with 0".into())),
    }
    if seq.len() >= EMPTY as usize {
        return Err(Error::InvalidInput("sequence too long".into()));
    }
    if seq[..seq.len() - 1].contains(&0) {
        return Err(Error::InvalidInput("0 occurs before the end".into()));
    }
    if let Some(&m) = seq.iter().max() {
        if m as usize >= sigma {
            return Err(Error::InvalidInput(format!("symbol {m} not below alphabet size {sigma}")));
        }
    }
    Ok(sais(seq, sigma))
}

fn bucket_bounds(s: &[u32], k: usize) -> Vec<u32> {
    let mut b = vec![0u32; k + 1];
    for &c in s {
        b[c as usize + 1] += 1;
    }
    for a in 1..=k {
        b[a] += b[a - 1];
    }
    b
}

fn induce(s: &[u32], stype: &[bool], sa: &mut [u32], bounds: &[u32]) {
    let n = s.len();
    let mut head: Vec<u32> = bounds[..bounds.len() - 1].to_vec();
    for i in 0..n {
        let j = sa[i];
        if j != EMPTY && j > 0 && !stype[j as usize - 1] {
            let c = s[j as usize - 1] as usize;
            sa[head[c] as usize] = j - 1;
            head[c] += 1;
        }
    }
    let mut tail: Vec<u32> = bounds[1..].to_vec();
    for i in (0..n).rev() {
        let j = sa[i];
        if j != EMPTY && j > 0 && stype[j as usize - 1] {
            let c = s[j as usize - 1] as usize;
            tail[c] -= 1;
            sa[tail[c] as usize] = j - 1;
        }
    }
}

fn sais(s: &[u32], k: usize) -> Vec<u32> {
    let n = s.len();
    if n == 1 {
        return vec![0];
    }
    let mut stype = vec![false; n];
    stype[n - 1] = true;
    for i in (0..n - 1).rev() {
        stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && stype[i] && !stype[i - 1];
    let bounds = bucket_bounds(s, k);

    let mut sa = vec![EMPTY; n];
    let mut tail: Vec<u32> = bounds[1..].to_vec();
    for i in 1..n {
        if is_lms(i) {
            let c = s[i] as usize;
            tail[c] -= 1;
            sa[tail[c] as usize] = i as u32;
        }
    }
    induce(s, &stype, &mut sa, &bounds);

    let mut m = 0;
    for i in 0..n {
        if is_lms(sa[i] as usize) {
            sa[m] = sa[i];
            m += 1;
        }
    }
    sa[m..].fill(EMPTY);
    let same = |a: usize, b: usize| {
        let mut d = 0;
        loop {
            let (x, y) = (a + d, b + d);
            if x >= n || y >= n || s[x] != s[y] || stype[x] != stype[y] {
                return false;
            }
            if d > 0 && (is_lms(x) || is_lms(y)) {
                return is_lms(x) && is_lms(y);
            }
            d += 1;
        }
    };
    let mut names = 0u32;
    let mut prev = usize::MAX;
    for i in 0..m {
        let p = sa[i] as usize;
        if prev == usize::MAX || !same(prev, p) {
            names += 1;
            prev = p;
        }
        sa[m + p / 2] = names - 1;
    }
    let reduced: Vec<u32> = sa[m..].iter().copied().filter(|&x| x != EMPTY).collect();
    let lms_pos: Vec<u32> = (1..n).filter(|&i| is_lms(i)).map(|i| i as u32).collect();
    debug_assert_eq!(reduced.len(), m);

    let order = if (names as usize) < m {
        sais(&reduced, names as usize)
    } else {
        let mut o = vec![0u32; m];
        for (i, &r) in reduced.iter().enumerate() {
            o[r as usize] = i as u32;
        }
        o
    };

    sa.fill(EMPTY);
    let mut tail: Vec<u32> = bounds[1..].to_vec();
    for &r in order.iter().rev() {
        let p = lms_pos[r as usize];
        let c = s[p as usize] as usize;
        tail[c] -= 1;
        sa[tail[c] as usize] = p;
    }
    induce(s, &stype, &mut sa, &bounds);
    sa
}
