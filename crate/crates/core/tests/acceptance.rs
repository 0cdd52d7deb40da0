//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Correctness checks are exact and any mismatch fails the run. Time
//! budgets and the throughput ratio are reported on the line but do not
//! fail the run, since they depend on the machine.
//!
//! The default corpus samples the larger configurations (counts below).
//! Set `LINCST_ACCEPTANCE=full` for the complete corpus.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lincst::batch_dynamic::DynBatchSeq;
use lincst::batch_static::StaticBatchSeq;
use lincst::bits::GeneralSeq;
use lincst::bwt::build_bwt;
use lincst::fm::{CountTrace, FmIndex};
use lincst::oracle::{naive_bwt, naive_occurrences, naive_plcp, naive_rank, naive_suffix_array, naive_suffix_tree_bp};
use lincst::plcp::build_plcp_from_text;
use lincst::rank_ext::{RankedSeq, SmallIntervalRankIndex};
use lincst::topology::build_topology;
use lincst::Symbol;

const SIZES: [usize; 3] = [1_000, 10_000, 100_000];
const SIGMAS: [u32; 4] = [2, 4, 16, 64];
const TEXTS_PER_CONFIG: usize = 200;

/// Texts per `(n, sigma)` configuration checked by the default run, in the
/// order of `SIZES`.
const BWT_SAMPLE: [usize; 3] = [200, 200, 25];
const PLCP_SAMPLE: [usize; 3] = [200, 25, 3];
const FM_SAMPLE: [usize; 3] = [10, 5, 1];
const FM_PATTERNS: usize = 1_000;

const RANK_BATCHES: usize = 10_000;
const DYN_RUNS: usize = 50;
const BIG_INPUT: usize = 64 << 20;
const THROUGHPUT_QUERIES: usize = 2_000_000;
/// Stored FM pairs may not exceed this many times `n / lg(sigma)`.
const PAIR_FACTOR: usize = 8;
const MIN_LABEL_GAP: u64 = 3;
const RELABEL_FACTOR: u64 = 3;

type Check = Result<String, String>;

fn full() -> bool {
    std::env::var("LINCST_ACCEPTANCE").is_ok_and(|v| v == "full")
}

fn sample(counts: [usize; 3], k: usize) -> usize {
    if full() {
        TEXTS_PER_CONFIG
    } else {
        counts[k]
    }
}

fn lg(n: usize) -> usize {
    (usize::BITS - 1 - n.max(2).leading_zeros()) as usize
}

/// Text `k` of configuration `(n, sigma)`: uniform symbols `1..=sigma`.
fn corpus_text(n: usize, sigma: u32, k: usize) -> Vec<Symbol> {
    let mut rng = ChaCha8Rng::seed_from_u64((n as u64) << 32 ^ (sigma as u64) << 16 ^ k as u64);
    let mut t: Vec<Symbol> = (0..n - 1).map(|_| rng.gen_range(1..=sigma)).collect();
    t.push(0);
    t
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Rank oracle from sorted occurrence lists, checked against
/// `naive_rank` on a sample before use.
struct OccOracle {
    occ: Vec<Vec<u32>>,
}

impl OccOracle {
    fn new(seq: &[Symbol], sigma: usize) -> Self {
        let mut occ = vec![Vec::new(); sigma];
        for (i, &s) in seq.iter().enumerate() {
            occ[s as usize].push(i as u32);
        }
        Self { occ }
    }

    fn rank(&self, a: Symbol, i: usize) -> usize {
        self.occ.get(a as usize).map_or(0, |v| v.partition_point(|&p| p as usize <= i))
    }

    fn rank_before(&self, a: Symbol, end: usize) -> usize {
        self.occ.get(a as usize).map_or(0, |v| v.partition_point(|&p| (p as usize) < end))
    }

    fn spot_check(&self, seq: &[Symbol], rng: &mut ChaCha8Rng) -> Result<(), String> {
        for _ in 0..20 {
            let i = rng.gen_range(0..seq.len());
            let a = seq[rng.gen_range(0..seq.len())];
            ensure(self.rank(a, i) == naive_rank(seq, a, i), || "rank oracle disagrees with naive_rank".into())?;
        }
        Ok(())
    }
}

fn c1_bwt() -> Check {
    let abra: Vec<Symbol> = vec![1, 2, 5, 1, 3, 1, 4, 1, 2, 5, 1, 0];
    let got: String = build_bwt(&abra, 6).map_err(|e| e.to_string())?.iter().map(|&s| b"$abcdr"[s as usize] as char).collect();
    ensure(got == "ard$rcaaaabb", || format!("abracadabra$ gave {got}"))?;
    let mut texts = 0;
    for (k, &n) in SIZES.iter().enumerate() {
        for &s in &SIGMAS {
            for j in 0..sample(BWT_SAMPLE, k) {
                let t = corpus_text(n, s, j);
                let b = build_bwt(&t, s as usize + 1).map_err(|e| e.to_string())?;
                ensure(b == naive_bwt(&t), || format!("BWT mismatch n={n} sigma={s} text {j}"))?;
                texts += 1;
            }
        }
    }
    Ok(format!("{texts} texts plus abracadabra$ exact"))
}

fn c2_static_rank() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let configs: Vec<(usize, usize)> =
        [10_000, 100_000, 1_000_000].iter().flat_map(|&n| [16, 256, 4096].map(|s| (n, s))).collect();
    let per = RANK_BATCHES / configs.len();
    let (mut batches, mut answers) = (0, 0usize);
    for (c, &(n, sigma)) in configs.iter().enumerate() {
        let seq: Vec<Symbol> = (0..n).map(|_| rng.gen_range(0..sigma as Symbol)).collect();
        let oracle = OccOracle::new(&seq, sigma);
        oracle.spot_check(&seq, &mut rng)?;
        let s = StaticBatchSeq::new(&seq, sigma);
        let regime = (n / (lg(n) * lg(n))).max(1);
        let count = if c == configs.len() - 1 { RANK_BATCHES - per * c } else { per };
        for b in 0..count {
            let log_uniform = |rng: &mut ChaCha8Rng, lo: usize, hi: usize| {
                let x = rng.gen_range((lo as f64).ln()..=(hi as f64).ln());
                (x.exp() as usize).clamp(lo, hi)
            };
            // Mostly around the n / lg^2 n regime, occasionally up to n.
            let m = match b % 10 {
                0 => log_uniform(&mut rng, regime, n),
                1..=4 => log_uniform(&mut rng, 1, regime),
                _ => regime,
            };
            let queries: Vec<(Symbol, usize)> = (0..m)
                .map(|_| {
                    let a = if rng.gen_bool(0.8) { seq[rng.gen_range(0..n)] } else { rng.gen_range(0..sigma as Symbol) };
                    (a, rng.gen_range(0..n))
                })
                .collect();
            let got = s.batch_rank(&queries);
            for (&(a, i), g) in queries.iter().zip(&got) {
                ensure(*g == Some(oracle.rank(a, i)), || format!("rank({a}, {i}) wrong, n={n} sigma={sigma}"))?;
            }
            batches += 1;
            answers += m;
        }
    }
    Ok(format!("{batches} batches, {answers} answers exact"))
}

/// Criteria 3 and 4 share the runs.
fn c3_c4_dynamic() -> (Check, Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut label_batches = 0;
    let mut worst_gap = u64::MAX;
    let mut label_err: Option<String> = None;
    let mut run_all = || -> Result<String, String> {
        let mut total_inserted = 0u64;
        let mut total_relabels = 0u64;
        let mut answers = 0usize;
        for run in 0..DYN_RUNS {
            let n0 = [1_000, 10_000, 100_000, 1_000_000][run % 4];
            let sigma = [4usize, 16, 256][run % 3];
            let rounds = if n0 >= 1_000_000 { 4 } else { 12 };
            let mut reference: Vec<Symbol> = (0..n0).map(|_| rng.gen_range(0..sigma as Symbol)).collect();
            let regime = (n0 / (lg(n0) * lg(n0))).max(1);
            let mut d = DynBatchSeq::new(&reference, sigma, n0 + 2 * rounds * regime);
            for _ in 0..rounds {
                if rng.gen_bool(0.6) {
                    let m = rng.gen_range(1..=2 * regime);
                    let len = reference.len();
                    let mut pos = rand::seq::index::sample(&mut rng, len + m, m).into_vec();
                    pos.sort_unstable();
                    let batch: Vec<(usize, Symbol)> =
                        pos.into_iter().map(|p| (p, rng.gen_range(0..sigma as Symbol))).collect();
                    d.batch_insert(&batch).map_err(|e| e.to_string())?;
                    let mut merged = Vec::with_capacity(len + m);
                    let mut old = reference.iter();
                    for &(p, s) in &batch {
                        while merged.len() < p {
                            merged.push(*old.next().unwrap());
                        }
                        merged.push(s);
                    }
                    merged.extend(old);
                    reference = merged;
                    let (inc, gap) = d.label_health();
                    label_batches += 1;
                    if let Some(g) = gap {
                        worst_gap = worst_gap.min(g);
                    }
                    if (!inc || gap.is_some_and(|g| g < MIN_LABEL_GAP)) && label_err.is_none() {
                        label_err = Some(format!("run {run}: increasing={inc} gap={gap:?}"));
                    }
                } else {
                    let oracle = OccOracle::new(&reference, sigma);
                    let m = rng.gen_range(1..=4 * regime);
                    let queries: Vec<(Symbol, usize)> = (0..m)
                        .map(|_| (rng.gen_range(0..sigma as Symbol), rng.gen_range(0..reference.len())))
                        .collect();
                    let got = d.batch_rank(&queries);
                    for (&(a, i), g) in queries.iter().zip(&got) {
                        ensure(*g == Some(oracle.rank(a, i)), || format!("run {run}: rank({a}, {i}) wrong"))?;
                    }
                    answers += m;
                }
            }
            ensure(d.to_vec() == reference, || format!("run {run}: content differs from reference"))?;
            d.check_invariants().map_err(|e| format!("run {run}: {e}"))?;
            let st = d.stats();
            ensure(st.relabels <= RELABEL_FACTOR * st.list_inserts.max(1), || {
                format!("run {run}: {} relabels for {} list inserts", st.relabels, st.list_inserts)
            })?;
            total_inserted += st.list_inserts;
            total_relabels += st.relabels;
        }
        Ok(format!(
            "{DYN_RUNS} runs, {answers} answers and contents exact, relabels {total_relabels} <= {RELABEL_FACTOR} x {total_inserted} inserts"
        ))
    };
    let c3 = run_all();
    let c4 = match (&c3, label_err) {
        (_, Some(e)) => Err(e),
        (Err(_), None) => Err("runs aborted before completion".into()),
        (Ok(_), None) => Ok(format!("{label_batches} batches: labels increasing, min gap {worst_gap} >= {MIN_LABEL_GAP}")),
    };
    (c3, c4)
}

fn c5_rank_extensions() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checks = 0usize;
    let mut configs: Vec<(usize, usize, bool)> =
        [1_000, 10_000, 100_000].iter().flat_map(|&n| [4, 64, 1024].map(|s| (n, s, true))).collect();
    configs.push((1_000_000, 256, false));
    for (n, sigma, exhaustive) in configs {
        // Runs make uniform ranges non-trivial.
        let mut seq = Vec::with_capacity(n);
        while seq.len() < n {
            let s = rng.gen_range(0..sigma as Symbol);
            let run = if rng.gen_bool(0.2) { rng.gen_range(2..40) } else { 1 };
            seq.extend(std::iter::repeat_n(s, run.min(n - seq.len())));
        }
        let oracle = OccOracle::new(&seq, sigma);
        oracle.spot_check(&seq, &mut rng)?;
        let rs = RankedSeq::new(seq.clone().into(), sigma);
        let small = SmallIntervalRankIndex::new(&seq, sigma);
        let positions: Vec<usize> =
            if exhaustive { (0..n).collect() } else { (0..100_000).map(|_| rng.gen_range(0..n)).collect() };
        let mut running = vec![0usize; sigma];
        let prefix_ok = exhaustive;
        let mut out = Vec::new();
        for (k, &i) in positions.iter().enumerate() {
            let expect = if prefix_ok {
                running[seq[i] as usize] += 1;
                running[seq[i] as usize]
            } else {
                oracle.rank(seq[i], i)
            };
            ensure(rs.partial_rank(i) == expect, || format!("partial_rank({i}) n={n}"))?;
            // Short ranges by scan, every 64th long range by the oracle.
            let len = if k % 64 == 0 { rng.gen_range(1..=n - i) } else { rng.gen_range(1..=64usize.min(n - i)) };
            let j = i + len - 1;
            out.clear();
            rs.range_distinct(i, j, &mut out);
            let mut want: BTreeMap<Symbol, usize> = BTreeMap::new();
            if len <= 64 {
                for &s in &seq[i..=j] {
                    *want.entry(s).or_default() += 1;
                }
            } else {
                for a in 0..sigma as Symbol {
                    let c = oracle.rank(a, j) - oracle.rank_before(a, i);
                    if c > 0 {
                        want.insert(a, c);
                    }
                }
            }
            let got: Vec<(Symbol, usize, usize)> = out.iter().map(|e| (e.symbol, e.count, e.before)).collect();
            let expect: Vec<(Symbol, usize, usize)> =
                want.iter().map(|(&a, &c)| (a, c, oracle.rank_before(a, i))).collect();
            ensure(got == expect, || format!("range_distinct({i}, {j}) n={n}"))?;
            ensure(rs.is_uniform(i, j) == (want.len() == 1), || format!("is_uniform({i}, {j}) n={n}"))?;
            let sj = (i + rng.gen_range(0..small.span())).min(n - 1);
            let a = if rng.gen_bool(0.7) { seq[rng.gen_range(i..=sj)] } else { rng.gen_range(0..sigma as Symbol) };
            let want_small = {
                let lo = oracle.rank_before(a, i);
                let hi = oracle.rank(a, sj);
                (hi > lo).then_some((lo, hi))
            };
            ensure(small.small_interval_rank(rs.partial(), a, i, sj) == want_small, || {
                format!("small_interval_rank({a}, {i}, {sj}) n={n}")
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks} positions, each with partial rank, range distinct, uniformity and small-interval rank"))
}

fn c6_topology() -> Check {
    let mut texts = 0;
    for &n in &SIZES[..2] {
        for &s in &SIGMAS {
            for j in 0..TEXTS_PER_CONFIG {
                let t = corpus_text(n, s, j);
                let b = naive_bwt(&t);
                let topo = build_topology(&b, s as usize + 1).map_err(|e| e.to_string())?;
                ensure(topo.bp() == naive_suffix_tree_bp(&t), || format!("BP mismatch n={n} sigma={s} text {j}"))?;
                texts += 1;
            }
        }
    }
    Ok(format!("{texts} texts exact"))
}

fn c7_plcp() -> Check {
    let mut texts = 0;
    let mut flushes = 0;
    let check = |t: &[Symbol], s: u32, exact: bool| -> Result<usize, String> {
        let p = build_plcp_from_text(t, s as usize + 1).map_err(|e| e.to_string())?;
        let v = p.values();
        ensure(v.windows(2).all(|w| w[0] <= w[1] + 1), || format!("l_i <= l_(i+1) + 1 fails, n={}", t.len()))?;
        let st = p.stats();
        ensure(st.short_flushes == 0, || format!("{} singleton flushes, n={}", st.short_flushes, t.len()))?;
        if exact {
            let want = naive_plcp(t);
            ensure(v.iter().zip(&want).all(|(&a, &b)| a as usize == b), || format!("PLCP mismatch n={}", t.len()))?;
        }
        Ok(st.label_flushes + st.rev_flushes)
    };
    for (k, &n) in SIZES.iter().enumerate() {
        for &s in &SIGMAS {
            for j in 0..sample(PLCP_SAMPLE, k) {
                flushes += check(&corpus_text(n, s, j), s, true)?;
                texts += 1;
            }
        }
    }
    // The output invariant alone, one size up.
    check(&corpus_text(1_000_000, 16, 0), 16, false)?;
    Ok(format!("{texts} texts exact, invariant also at n=1e6, {flushes} full pool flushes, 0 singleton"))
}

fn c8_fm() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut texts = 0;
    let mut worst_slow = 0;
    let mut trace_total = CountTrace::default();
    for (k, &n) in SIZES.iter().enumerate() {
        for &s in &SIGMAS {
            for j in 0..sample(FM_SAMPLE, k) {
                let t = corpus_text(n, s, j);
                let fm = FmIndex::build(&t, s as usize + 1).map_err(|e| e.to_string())?;
                for q in 0..FM_PATTERNS {
                    let m = rng.gen_range(1..=32usize);
                    let p: Vec<Symbol> = if q % 2 == 0 {
                        let i = rng.gen_range(0..n - 1);
                        let m = m.min(n - 1 - i);
                        t[i..i + m].to_vec()
                    } else {
                        (0..m).map(|_| rng.gen_range(1..=s)).collect()
                    };
                    let want = naive_occurrences(&t, &p);
                    let mut tr = CountTrace::default();
                    let c = fm.count_traced(&p, &mut tr).map_err(|e| e.to_string())?;
                    ensure(c == want.len(), || format!("count wrong n={n} sigma={s} pattern {p:?}"))?;
                    ensure(tr.slow <= 1, || format!("{} general-rank calls for one pattern", tr.slow))?;
                    worst_slow = worst_slow.max(tr.slow);
                    trace_total.stored += tr.stored;
                    trace_total.window += tr.window;
                    trace_total.small += tr.small;
                    trace_total.uniform += tr.uniform;
                    trace_total.slow += tr.slow;
                    ensure(fm.locate(&p).map_err(|e| e.to_string())? == want, || format!("locate wrong n={n} sigma={s}"))?;
                    let i = rng.gen_range(0..n);
                    let len = rng.gen_range(0..=(n - i).min(64));
                    ensure(fm.extract(i, len).map_err(|e| e.to_string())? == t[i..i + len], || {
                        format!("extract({i}, {len}) wrong n={n}")
                    })?;
                }
                if n <= 10_000 {
                    let sa = naive_suffix_array(&lincst::bwt::reverse_text(&t));
                    for r in 0..n {
                        let l = fm.lf(r).map_err(|e| e.to_string())?;
                        ensure(fm.psi(l).map_err(|e| e.to_string())? == r, || format!("psi(lf({r})) != {r}"))?;
                        ensure(sa[l] == (sa[r] + n - 1) % n, || format!("SA[LF({r})] wrong"))?;
                    }
                }
                texts += 1;
            }
        }
    }
    Ok(format!(
        "{texts} texts x {FM_PATTERNS} patterns exact, max general-rank calls per query {worst_slow}, steps: stored {} window {} small {} uniform {} slow {}",
        trace_total.stored, trace_total.window, trace_total.small, trace_total.uniform, trace_total.slow
    ))
}

fn c9_space() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut lines = Vec::new();
    for sigma in [16usize, 256, 4096] {
        let n = 1_000_000;
        let seq: Vec<Symbol> = (0..n).map(|_| rng.gen_range(0..sigma as Symbol)).collect();
        let rs = RankedSeq::new(seq.clone().into(), sigma);
        let bits = 8.0 * rs.partial().size_bytes() as f64 / n as f64;
        let loglog = (sigma as f64).log2().log2().max(1.0);
        lines.push(format!("partial rank sigma={sigma}: {bits:.1} bits/sym = {:.1} x loglog sigma", bits / loglog));
        let d = DynBatchSeq::new(&seq, sigma, n);
        lines.push(format!("dynamic sigma={sigma}: {:.1} bits/sym", 8.0 * d.size_bytes() as f64 / n as f64));
    }
    for &s in &SIGMAS {
        for n in [10_000, 100_000] {
            let t = corpus_text(n, s, 0);
            let fm = FmIndex::build(&t, s as usize + 1).map_err(|e| e.to_string())?;
            let bound = PAIR_FACTOR * n / fm.d();
            ensure(fm.pair_count() <= bound, || format!("{} pairs > {bound} at n={n} sigma={s}", fm.pair_count()))?;
            if n == 100_000 {
                let sp = fm.space();
                lines.push(format!(
                    "fm sigma={s}: {} pairs <= {bound}, {:.2} dictionary bits/sym",
                    sp.pairs,
                    sp.dictionary_bits_per_symbol()
                ));
            }
        }
    }
    Ok(lines.join("; "))
}

/// Returns the speedup; the criterion passes at 1.0 or more.
fn c10_throughput() -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let n = BIG_INPUT;
    let sigma = 256;
    let seq: Arc<[Symbol]> = (0..n).map(|_| rng.gen::<u8>() as Symbol).collect();
    let m = n / (lg(n) * lg(n));
    let queries: Vec<(Symbol, usize)> =
        (0..THROUGHPUT_QUERIES).map(|_| (rng.gen_range(0..sigma as Symbol), rng.gen_range(0..n))).collect();
    let batched = StaticBatchSeq::new(&seq, sigma);
    let t = Instant::now();
    let mut a = Vec::with_capacity(queries.len());
    for chunk in queries.chunks(m) {
        a.extend(batched.batch_rank(chunk));
    }
    let tb = t.elapsed();
    drop(batched);
    let general = GeneralSeq::new(seq.clone(), sigma);
    let t = Instant::now();
    let b: Vec<usize> = queries.iter().map(|&(c, i)| general.rank(c, i)).collect();
    let tn = t.elapsed();
    ensure(a.iter().zip(&b).all(|(x, y)| *x == Some(*y)), || "batched and per-query answers differ".into())?;
    Ok(tn.as_secs_f64() / tb.as_secs_f64())
}

struct Report {
    failed: bool,
}

impl Report {
    fn line(&mut self, id: usize, check: Check, elapsed: Duration, budget: Option<u64>) {
        let secs = elapsed.as_secs_f64();
        let over = budget.is_some_and(|b| secs > b as f64);
        let timing = match budget {
            Some(b) => format!("{secs:.1} s, budget {b} s"),
            None => format!("{secs:.1} s"),
        };
        match check {
            Ok(detail) if !over => println!("criterion {id}: PASS {detail} ({timing})"),
            Ok(detail) => println!("criterion {id}: FAIL over time budget: {detail} ({timing})"),
            Err(e) => {
                self.failed = true;
                println!("criterion {id}: FAIL {e} ({timing})");
            }
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

fn main() {
    // Accept and ignore libtest flags such as `--nocapture`.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let wanted = |id: usize| args.is_empty() || args.iter().any(|a| a == &id.to_string());
    println!("acceptance corpus: {}", if full() { "full" } else { "sampled (LINCST_ACCEPTANCE=full for all)" });
    let mut report = Report { failed: false };
    if wanted(1) {
        let (c, t) = timed(c1_bwt);
        report.line(1, c, t, Some(60));
    }
    if wanted(2) {
        let (c, t) = timed(c2_static_rank);
        report.line(2, c, t, Some(120));
    }
    if wanted(3) || wanted(4) {
        let ((c3, c4), t) = timed(c3_c4_dynamic);
        report.line(3, c3, t, Some(180));
        report.line(4, c4, t, None);
    }
    if wanted(5) {
        let (c, t) = timed(c5_rank_extensions);
        report.line(5, c, t, Some(120));
    }
    if wanted(6) {
        let (c, t) = timed(c6_topology);
        report.line(6, c, t, Some(60));
    }
    if wanted(7) {
        let (c, t) = timed(c7_plcp);
        report.line(7, c, t, Some(180));
    }
    if wanted(8) {
        let (c, t) = timed(c8_fm);
        report.line(8, c, t, Some(120));
    }
    if wanted(9) {
        let (c, t) = timed(c9_space);
        report.line(9, c, t, None);
    }
    if wanted(10) {
        let (r, t) = timed(c10_throughput);
        match r {
            Ok(x) if x >= 1.0 => println!("criterion 10: PASS batched/per-query speedup {x:.2}x ({:.1} s)", t.as_secs_f64()),
            Ok(x) => println!("criterion 10: FAIL batched/per-query speedup {x:.2}x below 1.0 ({:.1} s)", t.as_secs_f64()),
            Err(e) => report.line(10, Err(e), t, None),
        }
    }
    if report.failed {
        std::process::exit(1);
    }
}
