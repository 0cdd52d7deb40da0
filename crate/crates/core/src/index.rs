//! The full build pipeline over byte input, and queries over a loaded index.

use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::bwt::{build_bwt, build_bwt_traced, reverse_text};
use crate::fm::{default_sample_rate, FmBuildStats, FmIndex};
use crate::format::{Alphabet, IndexFile};
use crate::oracle::{naive_bwt, naive_occurrences, naive_plcp, naive_suffix_tree_bp};
use crate::plcp::{build_plcp, PlcpContext, PlcpStats};
use crate::rank_ext::RankedSeq;
use crate::topology::SuffixTopology;
use crate::{Error, Result, Symbol};

#[derive(Clone, Debug, Default)]
pub struct BuildReport {
    pub n: usize,
    pub sigma: usize,
    pub bwt_time: Duration,
    pub topology_time: Duration,
    pub plcp_time: Duration,
    pub fm_time: Duration,
    pub plcp: PlcpStats,
    pub fm: FmBuildStats,
}

/// An index file together with the FM-index rebuilt from it.
pub struct Index {
    file: IndexFile,
    fm: FmIndex,
}

impl Index {
    /// Builds every section for `data`. `sample` defaults to `ceil(log2 n)`.
    pub fn build(data: &[u8], raw: bool, sample: Option<usize>) -> Result<(Self, BuildReport)> {
        let (alphabet, text) = Alphabet::encode_text(data, raw);
        Self::build_text(alphabet, &text, sample)
    }

    pub fn build_text(alphabet: Alphabet, text: &[Symbol], sample: Option<usize>) -> Result<(Self, BuildReport)> {
        let sigma = alphabet.sigma();
        let n = text.len();
        let sample = sample.unwrap_or_else(|| default_sample_rate(n));
        if sample == 0 {
            return Err(Error::InvalidInput("sample rate must be positive".into()));
        }
        let mut report = BuildReport { n, sigma, ..Default::default() };

        let t = Instant::now();
        let out = build_bwt_traced(text, sigma)?;
        let pad = out.pad as u32;
        let bwt = Arc::new(RankedSeq::new(out.bwt.into(), sigma));
        let rbwt = Arc::new(RankedSeq::new(build_bwt(&reverse_text(text), sigma)?.into(), sigma));
        report.bwt_time = t.elapsed();

        let t = Instant::now();
        let topo = Arc::new(SuffixTopology::from_ranked(&bwt));
        let rtopo = Arc::new(SuffixTopology::from_ranked(&rbwt));
        report.topology_time = t.elapsed();

        let t = Instant::now();
        let ctx = PlcpContext::from_parts(text.into(), sigma, bwt.clone(), topo.clone(), rbwt.clone(), rtopo);
        let plcp = build_plcp(&ctx);
        drop(ctx);
        report.plcp_time = t.elapsed();
        report.plcp = plcp.stats().clone();

        let t = Instant::now();
        let fm = FmIndex::from_bwts(&bwt, rbwt.clone(), sample);
        report.fm_time = t.elapsed();
        report.fm = *fm.stats();

        let file = IndexFile {
            alphabet,
            pad,
            sample: sample as u32,
            bwt: bwt.as_slice().to_vec(),
            bp: topo.parens().bits().clone(),
            plcp: plcp.encode(),
            rbwt: rbwt.as_slice().to_vec(),
            pairs: fm.stored_pairs(),
        };
        Ok((Self { file, fm }, report))
    }

    pub fn from_file(file: IndexFile) -> Result<Self> {
        let rbwt = Arc::new(RankedSeq::new(file.rbwt.clone().into(), file.alphabet.sigma()));
        let fm = FmIndex::from_stored(rbwt, file.sample as usize, &file.pairs)?;
        Ok(Self { file, fm })
    }

    pub fn file(&self) -> &IndexFile {
        &self.file
    }

    pub fn fm(&self) -> &FmIndex {
        &self.fm
    }

    pub fn len(&self) -> usize {
        self.file.len()
    }

    pub fn is_empty(&self) -> bool {
        self.file.is_empty()
    }

    fn pattern(&self, p: &[u8]) -> Result<Option<Vec<Symbol>>> {
        if p.is_empty() {
            return Err(Error::InvalidInput("empty pattern".into()));
        }
        Ok(self.file.alphabet.encode_pattern(p))
    }

    pub fn count(&self, p: &[u8]) -> Result<usize> {
        match self.pattern(p)? {
            Some(s) => self.fm.count(&s),
            None => Ok(0),
        }
    }

    pub fn locate(&self, p: &[u8]) -> Result<Vec<usize>> {
        match self.pattern(p)? {
            Some(s) => self.fm.locate(&s),
            None => Ok(Vec::new()),
        }
    }

    /// Bytes `i..i+len` of the indexed text, the sentinel included.
    pub fn extract(&self, i: usize, len: usize) -> Result<Vec<u8>> {
        Ok(self.fm.extract(i, len)?.into_iter().map(|s| self.file.alphabet.decode(s)).collect())
    }

    /// Cross-checks every section against the brute-force oracles.
    pub fn verify(&self, text: &[Symbol]) -> Result<()> {
        let fail = |what: &str| Err(Error::InvalidInput(format!("verification failed: {what}")));
        if naive_bwt(text) != self.file.bwt {
            return fail("BWT");
        }
        if naive_bwt(&reverse_text(text)) != self.file.rbwt {
            return fail("reversed BWT");
        }
        let bp: Vec<bool> = (0..self.file.bp.len()).map(|i| self.file.bp.get(i)).collect();
        if naive_suffix_tree_bp(text) != bp {
            return fail("tree topology");
        }
        let plcp: Vec<usize> = self.file.plcp.to_vec().into_iter().map(|v| v as usize).collect();
        if naive_plcp(text) != plcp {
            return fail("PLCP");
        }
        if self.fm.extract(0, text.len())? != text {
            return fail("extract");
        }
        let n = text.len();
        let step = (n / 64).max(1);
        for i in (0..n - 1).step_by(step) {
            let p = &text[i..(i + 8).min(n - 1)];
            if self.fm.locate(p)? != naive_occurrences(text, p) {
                return fail("locate");
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abracadabra_pipeline() {
        let (idx, report) = Index::build(b"abracadabra$", false, None).unwrap();
        assert_eq!(report.n, 12);
        let (_, text) = Alphabet::encode_text(b"abracadabra$", false);
        idx.verify(&text).unwrap();
        let bwt: Vec<u8> = idx.file().bwt.iter().map(|&s| idx.file().alphabet.decode(s)).collect();
        assert_eq!(bwt, b"ard$rcaaaabb");
        assert_eq!(idx.count(b"abra").unwrap(), 2);
        assert_eq!(idx.locate(b"abra").unwrap(), vec![0, 7]);
        assert_eq!(idx.locate(b"zz").unwrap(), Vec::<usize>::new());
        assert_eq!(idx.extract(0, 5).unwrap(), b"abrac");
        assert!(idx.count(b"").is_err());

        let bytes = idx.file().to_bytes();
        let back = Index::from_file(IndexFile::read(&mut bytes.as_slice()).unwrap()).unwrap();
        assert_eq!(back.file(), idx.file());
        assert_eq!(back.file().to_bytes(), bytes);
        assert_eq!(back.locate(b"a").unwrap(), vec![0, 3, 5, 7, 10]);
    }

    #[test]
    fn empty_and_raw_inputs() {
        let (idx, _) = Index::build(b"", false, None).unwrap();
        assert_eq!(idx.len(), 1);
        assert_eq!(idx.count(b"a").unwrap(), 0);
        let data = b"\x00\x01\x00\xff\x01\x00";
        let (idx, _) = Index::build(data, true, Some(3)).unwrap();
        let (_, text) = Alphabet::encode_text(data, true);
        idx.verify(&text).unwrap();
        assert_eq!(idx.locate(b"\x01\x00").unwrap(), vec![1, 4]);
    }
}
