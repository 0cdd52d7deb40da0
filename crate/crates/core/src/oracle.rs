//! Brute-force reference implementations.
//!
//! Each function is a direct transcription of its definition, with no
//! sharing of code paths with the fast structures. Tests compare against
//! these on small inputs.

use crate::Symbol;

/// Suffix array by comparison sort of all suffixes.
pub fn naive_suffix_array(text: &[Symbol]) -> Vec<usize> {
    let mut sa: Vec<usize> = (0..text.len()).collect();
    sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
    sa
}

/// BWT as the symbol cyclically preceding each sorted suffix.
pub fn naive_bwt(text: &[Symbol]) -> Vec<Symbol> {
    let n = text.len();
    naive_suffix_array(text)
        .into_iter()
        .map(|p| text[(p + n - 1) % n])
        .collect()
}

/// Occurrences of `a` in `seq[0..=i]`.
pub fn naive_rank(seq: &[Symbol], a: Symbol, i: usize) -> usize {
    seq[..=i].iter().filter(|&&x| x == a).count()
}

/// Occurrences of `a` in `seq[0..i]`.
pub fn naive_rank_before(seq: &[Symbol], a: Symbol, i: usize) -> usize {
    seq[..i].iter().filter(|&&x| x == a).count()
}

/// Position of the `k`-th (1-based) occurrence of `a`.
pub fn naive_select(seq: &[Symbol], a: Symbol, k: usize) -> Option<usize> {
    if k == 0 {
        return None;
    }
    seq.iter()
        .enumerate()
        .filter(|&(_, &x)| x == a)
        .nth(k - 1)
        .map(|(p, _)| p)
}

/// `rank(seq[i], i)`.
pub fn naive_partial_rank(seq: &[Symbol], i: usize) -> usize {
    naive_rank(seq, seq[i], i)
}

/// Distinct symbols of `seq[i..=j]` with their count inside the range and
/// their count before `i`, sorted by symbol.
pub fn naive_range_distinct(seq: &[Symbol], i: usize, j: usize) -> Vec<(Symbol, usize, usize)> {
    let mut syms: Vec<Symbol> = seq[i..=j].to_vec();
    syms.sort_unstable();
    syms.dedup();
    syms.into_iter()
        .map(|a| {
            let inside = seq[i..=j].iter().filter(|&&x| x == a).count();
            (a, inside, naive_rank_before(seq, a, i))
        })
        .collect()
}

fn lcp(text: &[Symbol], a: usize, b: usize) -> usize {
    text[a..].iter().zip(&text[b..]).take_while(|(x, y)| x == y).count()
}

/// `plcp[i]` is the longest common prefix of suffix `i` and its
/// predecessor in sorted order, `0` for the smallest suffix.
pub fn naive_plcp(text: &[Symbol]) -> Vec<usize> {
    let sa = naive_suffix_array(text);
    let mut plcp = vec![0; text.len()];
    for r in 1..sa.len() {
        plcp[sa[r]] = lcp(text, sa[r], sa[r - 1]);
    }
    plcp
}

/// Start positions of `pattern` in `text`, increasing.
pub fn naive_occurrences(text: &[Symbol], pattern: &[Symbol]) -> Vec<usize> {
    if pattern.is_empty() {
        return (0..text.len()).collect();
    }
    if pattern.len() > text.len() {
        return Vec::new();
    }
    (0..=text.len() - pattern.len())
        .filter(|&p| &text[p..p + pattern.len()] == pattern)
        .collect()
}

/// Suffix-array rows whose suffix starts with `pattern`, as `(first, last)`.
pub fn naive_sa_interval(text: &[Symbol], pattern: &[Symbol]) -> Option<(usize, usize)> {
    let sa = naive_suffix_array(text);
    let rows: Vec<usize> = (0..sa.len())
        .filter(|&r| text[sa[r]..].starts_with(pattern))
        .collect();
    Some((*rows.first()?, *rows.last()?))
}

/// Balanced-parentheses topology of the suffix tree (`true` is an opening
/// parenthesis), children ordered by edge label, built by recursively
/// partitioning sorted suffixes on their next symbol.
pub fn naive_suffix_tree_bp(text: &[Symbol]) -> Vec<bool> {
    let sa = naive_suffix_array(text);
    let mut bp = Vec::with_capacity(4 * text.len());
    enum Task {
        Node { lo: usize, hi: usize, depth: usize, root: bool },
        Close,
    }
    let mut stack = vec![Task::Node { lo: 0, hi: sa.len(), depth: 0, root: true }];
    while let Some(task) = stack.pop() {
        let (lo, hi, depth, root) = match task {
            Task::Close => {
                bp.push(false);
                continue;
            }
            Task::Node { lo, hi, depth, root } => (lo, hi, depth, root),
        };
        if hi - lo == 1 && !root {
            bp.push(true);
            bp.push(false);
            continue;
        }
        // Branching depth: where the first and last suffix of the group part.
        let split = if root { 0 } else { depth + lcp(text, sa[lo] + depth, sa[hi - 1] + depth) };
        let mut groups = Vec::new();
        let mut s = lo;
        while s < hi {
            let c = text.get(sa[s] + split).copied();
            let mut e = s + 1;
            while e < hi && text.get(sa[e] + split).copied() == c {
                e += 1;
            }
            groups.push((s, e));
            s = e;
        }
        bp.push(true);
        stack.push(Task::Close);
        for &(s, e) in groups.iter().rev() {
            stack.push(Task::Node { lo: s, hi: e, depth: split + 1, root: false });
        }
    }
    bp
}

/// Renders a parenthesis sequence as a string of `(` and `)`.
pub fn bp_string(bp: &[bool]) -> String {
    bp.iter().map(|&b| if b { '(' } else { ')' }).collect()
}
