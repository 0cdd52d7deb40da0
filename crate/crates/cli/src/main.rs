use std::fs;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lincst::batch_dynamic::DynBatchSeq;
use lincst::batch_static::StaticBatchSeq;
use lincst::bits::GeneralSeq;
use lincst::format::{Alphabet, IndexFile};
use lincst::index::Index;
use lincst::oracle::bp_string;
use lincst::plcp::build_plcp_from_text;
use lincst::Symbol;

#[derive(Parser)]
#[command(name = "lincst", version, about = "Build and query compressed suffix indexes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an index file from an input file.
    Build {
        input: PathBuf,
        output: PathBuf,
        /// Suffix-array sampling factor (default ceil(log2 n)).
        #[arg(long)]
        sample: Option<usize>,
        /// Cross-check every section against brute force (inputs up to 1e5 bytes).
        #[arg(long)]
        verify: bool,
        /// Keep all 256 byte values as symbols instead of the bytes present.
        #[arg(long)]
        raw: bool,
    },
    /// Query an index.
    Query {
        index: PathBuf,
        #[command(subcommand)]
        what: QueryCmd,
    },
    /// Print a section of an index.
    Dump { index: PathBuf, what: DumpWhat },
    /// Time batched rank against one-at-a-time rank.
    Bench {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        mode: BenchMode,
        /// Queries per batch (default n / lg^2 n).
        #[arg(long)]
        batch: Option<usize>,
        /// Total rank queries.
        #[arg(long, default_value_t = 1_000_000)]
        queries: usize,
        /// Treat input bytes as symbols `0..256`.
        #[arg(long)]
        raw: bool,
        /// Declare at least this alphabet size.
        #[arg(long)]
        sigma: Option<usize>,
        /// Also run this many insertion batches on the dynamic sequence.
        #[arg(long, default_value_t = 0)]
        inserts: usize,
        /// Also build the PLCP array and report its pool counters.
        #[arg(long)]
        plcp: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum QueryCmd {
    /// Number of occurrences.
    Count {
        pattern: String,
        /// Pattern is hex-encoded bytes.
        #[arg(long)]
        hex: bool,
    },
    /// Start positions, one per line, ascending.
    Locate {
        pattern: String,
        #[arg(long)]
        hex: bool,
    },
    /// Text bytes `start..start+len`.
    Extract { start: usize, len: usize },
}

#[derive(Clone, Copy, ValueEnum)]
enum DumpWhat {
    Bwt,
    Plcp,
    Bp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchMode {
    Batched,
    Naive,
    Both,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Build { input, output, sample, verify, raw } => build(&input, &output, sample, verify, raw),
        Cmd::Query { index, what } => query(&index, what),
        Cmd::Dump { index, what } => dump(&index, what),
        Cmd::Bench { input, mode, batch, queries, raw, sigma, inserts, plcp, seed } => {
            bench(&input, BenchArgs { mode, batch, queries, raw, sigma, inserts, plcp, seed })
        }
    }
}

const VERIFY_LIMIT: usize = 100_000;

fn build(input: &Path, output: &Path, sample: Option<usize>, verify: bool, raw: bool) -> Result<()> {
    let data = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let (alphabet, text) = Alphabet::encode_text(&data, raw);
    let start = Instant::now();
    let (index, report) = Index::build_text(alphabet, &text, sample)?;
    eprintln!(
        "n={} sigma={} pad={} bwt={:?} topology={:?} plcp={:?} fm={:?} total={:?}",
        report.n,
        report.sigma,
        index.file().pad,
        report.bwt_time,
        report.topology_time,
        report.plcp_time,
        report.fm_time,
        start.elapsed()
    );
    eprintln!(
        "plcp: anchors={} jobs={} stage2={} flushes={} fm: heavy={} pairs={}",
        report.plcp.anchors,
        report.plcp.jobs,
        report.plcp.stage2_ran,
        report.plcp.label_flushes + report.plcp.rev_flushes,
        report.fm.heavy_nodes,
        report.fm.pairs
    );
    if verify {
        if text.len() > VERIFY_LIMIT {
            eprintln!("verify: skipped, n = {} exceeds {VERIFY_LIMIT}", text.len());
        } else {
            index.verify(&text).context("index does not match brute force")?;
            eprintln!("verify: ok");
        }
    }
    let file = fs::File::create(output).with_context(|| format!("creating {}", output.display()))?;
    let mut w = BufWriter::new(file);
    index.file().write(&mut w)?;
    w.flush()?;
    Ok(())
}

fn load(path: &Path) -> Result<IndexFile> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    IndexFile::read(&mut BufReader::new(file)).with_context(|| format!("loading {}", path.display()))
}

fn decode_pattern(pattern: &str, hex: bool) -> Result<Vec<u8>> {
    if !hex {
        return Ok(pattern.as_bytes().to_vec());
    }
    if !pattern.len().is_multiple_of(2) {
        bail!("hex pattern has odd length");
    }
    (0..pattern.len())
        .step_by(2)
        .map(|k| {
            pattern
                .get(k..k + 2)
                .and_then(|h| u8::from_str_radix(h, 16).ok())
                .with_context(|| format!("bad hex digits at offset {k}"))
        })
        .collect()
}

fn query(path: &Path, what: QueryCmd) -> Result<()> {
    let index = Index::from_file(load(path)?)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match what {
        QueryCmd::Count { pattern, hex } => {
            writeln!(out, "{}", index.count(&decode_pattern(&pattern, hex)?)?)?;
        }
        QueryCmd::Locate { pattern, hex } => {
            for p in index.locate(&decode_pattern(&pattern, hex)?)? {
                writeln!(out, "{p}")?;
            }
        }
        QueryCmd::Extract { start, len } => {
            out.write_all(&index.extract(start, len)?)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn dump(path: &Path, what: DumpWhat) -> Result<()> {
    let file = load(path)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match what {
        DumpWhat::Bwt => {
            eprintln!("n={} pad={}", file.len(), file.pad);
            let bytes: Vec<u8> = file.bwt.iter().map(|&s| file.alphabet.decode(s)).collect();
            out.write_all(&bytes)?;
        }
        DumpWhat::Plcp => {
            for v in file.plcp.to_vec() {
                writeln!(out, "{v}")?;
            }
        }
        DumpWhat::Bp => {
            let bp: Vec<bool> = (0..file.bp.len()).map(|i| file.bp.get(i)).collect();
            writeln!(out, "{}", bp_string(&bp))?;
        }
    }
    out.flush()?;
    Ok(())
}

struct BenchArgs {
    mode: BenchMode,
    batch: Option<usize>,
    queries: usize,
    raw: bool,
    sigma: Option<usize>,
    inserts: usize,
    plcp: bool,
    seed: u64,
}

fn lg(n: usize) -> usize {
    (usize::BITS - 1 - n.max(2).leading_zeros()) as usize
}

fn bench(input: &Path, args: BenchArgs) -> Result<()> {
    let data = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    if data.is_empty() {
        bail!("empty input");
    }
    let (seq, present): (Vec<Symbol>, usize) = if args.raw {
        (data.iter().map(|&b| b as Symbol).collect(), 256)
    } else {
        let (alphabet, mut text) = Alphabet::encode_text(&data, false);
        text.pop();
        (text, alphabet.sigma())
    };
    let sigma = present.max(args.sigma.unwrap_or(0));
    let n = seq.len();
    let regime = (n / (lg(n) * lg(n))).max(1);
    let m = args.batch.unwrap_or(regime).max(1);
    println!("n: {n}");
    println!("sigma: {sigma}");
    println!("batch: {m}");
    if m < regime {
        println!("note: batch size below n/lg^2 n = {regime}; out of the batched regime");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let queries: Vec<(Symbol, usize)> = (0..args.queries)
        .map(|_| {
            let a = seq[rng.gen_range(0..n)];
            (a, rng.gen_range(0..n))
        })
        .collect();
    let seq: Arc<[Symbol]> = seq.into();

    let mut batched_rate = None;
    let mut naive_rate = None;
    if args.mode != BenchMode::Naive {
        let t = Instant::now();
        let s = StaticBatchSeq::new(&seq, sigma);
        println!("batched build: {:?}", t.elapsed());
        let t = Instant::now();
        let mut sum = 0usize;
        let mut merge_steps = 0usize;
        for chunk in queries.chunks(m) {
            let (ans, st) = s.batch_rank_stats(chunk);
            sum = sum.wrapping_add(ans.iter().map(|x| x.unwrap_or(0)).sum::<usize>());
            merge_steps += st.merge_steps;
        }
        let dt = t.elapsed();
        let rate = queries.len() as f64 / dt.as_secs_f64();
        println!("batched: {:?} for {} queries, {:.0} queries/s, merge steps {merge_steps}, checksum {sum}", dt, queries.len(), rate);
        batched_rate = Some(rate);
    }
    if args.mode != BenchMode::Batched {
        let t = Instant::now();
        let g = GeneralSeq::new(seq.clone(), sigma);
        println!("naive build: {:?}", t.elapsed());
        let t = Instant::now();
        let sum = queries.iter().fold(0usize, |acc, &(a, i)| acc.wrapping_add(g.rank(a, i)));
        let dt = t.elapsed();
        let rate = queries.len() as f64 / dt.as_secs_f64();
        println!("naive: {:?} for {} queries, {:.0} queries/s, checksum {sum}", dt, queries.len(), rate);
        naive_rate = Some(rate);
    }
    if let (Some(b), Some(q)) = (batched_rate, naive_rate) {
        println!("speedup: {:.2}x", b / q);
    }

    if args.inserts > 0 {
        let mut d = DynBatchSeq::new(&seq, sigma, n + args.inserts * m);
        let t = Instant::now();
        for _ in 0..args.inserts {
            let len = d.len();
            let mut pos = rand::seq::index::sample(&mut rng, len + m, m).into_vec();
            pos.sort_unstable();
            let batch: Vec<(usize, Symbol)> = pos.into_iter().map(|p| (p, seq[rng.gen_range(0..n)])).collect();
            d.batch_insert(&batch)?;
        }
        let st = d.stats();
        println!(
            "dynamic: {:?} for {} batches, inserted {}, relabels {}, list reinits {}",
            t.elapsed(),
            args.inserts,
            st.inserted_symbols,
            st.relabels,
            st.list_reinits
        );
    }

    if args.plcp {
        let mut text: Vec<Symbol> = seq.iter().map(|&s| s + 1).collect();
        text.push(0);
        let t = Instant::now();
        let p = build_plcp_from_text(&text, sigma + 1)?;
        let st = p.stats();
        println!(
            "plcp: {:?}, pool capacity {}, label flushes {}, rev flushes {}, short flushes {}",
            t.elapsed(),
            st.pool_capacity,
            st.label_flushes,
            st.rev_flushes,
            st.short_flushes
        );
    }
    Ok(())
}
