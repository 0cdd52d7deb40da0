//! On-disk index format.
//!
//! A file is a header (magic, version, section count) followed by tagged
//! sections. Each section carries its payload length and a CRC-32 of the
//! payload, checked on load. All integers are little-endian.

use std::io::{Read, Write};

use crate::bits::BitVector;
use crate::plcp::PlcpBits;
use crate::{Error, Result, Symbol};

pub const MAGIC: [u8; 8] = *b"LCSTIDX\0";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub tag: [u8; 4],
    pub payload: Vec<u8>,
}

pub fn write_sections<W: Write>(w: &mut W, sections: &[Section]) -> Result<()> {
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(sections.len() as u32).to_le_bytes())?;
    for s in sections {
        w.write_all(&s.tag)?;
        w.write_all(&(s.payload.len() as u64).to_le_bytes())?;
        w.write_all(&crc32fast::hash(&s.payload).to_le_bytes())?;
        w.write_all(&s.payload)?;
    }
    Ok(())
}

pub fn read_sections<R: Read>(r: &mut R) -> Result<Vec<Section>> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = read_u32(r)?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let count = read_u32(r)?;
    let mut out = Vec::with_capacity(count.min(64) as usize);
    for _ in 0..count {
        let mut tag = [0u8; 4];
        r.read_exact(&mut tag)?;
        let len = read_u64(r)?;
        let crc = read_u32(r)?;
        let mut payload = Vec::new();
        r.take(len).read_to_end(&mut payload)?;
        if payload.len() as u64 != len {
            return Err(Error::Format(format!("section {} truncated", tag_name(&tag))));
        }
        if crc32fast::hash(&payload) != crc {
            return Err(Error::Format(format!("checksum mismatch in section {}", tag_name(&tag))));
        }
        out.push(Section { tag, payload });
    }
    Ok(out)
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn tag_name(tag: &[u8; 4]) -> String {
    String::from_utf8_lossy(tag).into_owned()
}

/// Little-endian payload writer.
#[derive(Default)]
pub struct Encoder {
    buf: Vec<u8>,
}

impl Encoder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn u8(&mut self, v: u8) -> &mut Self {
        self.buf.push(v);
        self
    }

    pub fn u32(&mut self, v: u32) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    /// Length-prefixed bytes.
    pub fn bytes(&mut self, v: &[u8]) -> &mut Self {
        self.u64(v.len() as u64);
        self.buf.extend_from_slice(v);
        self
    }

    /// Length-prefixed symbols at the narrowest of 1, 2 or 4 bytes each.
    pub fn symbols(&mut self, v: &[Symbol]) -> &mut Self {
        let max = v.iter().copied().max().unwrap_or(0);
        let width: u8 = if max <= u8::MAX as u32 {
            1
        } else if max <= u16::MAX as u32 {
            2
        } else {
            4
        };
        self.u8(width).u64(v.len() as u64);
        for &s in v {
            self.buf.extend_from_slice(&s.to_le_bytes()[..width as usize]);
        }
        self
    }

    pub fn bits(&mut self, v: &BitVector) -> &mut Self {
        self.u64(v.len() as u64).u64(v.words().len() as u64);
        for &w in v.words() {
            self.u64(w);
        }
        self
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

/// Little-endian payload reader; every read is bounds checked.
pub struct Decoder<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Decoder<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < k {
            return Err(Error::Format("payload too short".into()));
        }
        let s = &self.buf[self.pos..self.pos + k];
        self.pos += k;
        Ok(s)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn len(&mut self, unit: usize) -> Result<usize> {
        let k = self.u64()?;
        let k = usize::try_from(k).map_err(|_| Error::Format("length overflow".into()))?;
        if k.checked_mul(unit).is_none_or(|b| b > self.buf.len() - self.pos) {
            return Err(Error::Format("length exceeds payload".into()));
        }
        Ok(k)
    }

    pub fn bytes(&mut self) -> Result<Vec<u8>> {
        let k = self.len(1)?;
        Ok(self.take(k)?.to_vec())
    }

    pub fn symbols(&mut self) -> Result<Vec<Symbol>> {
        let width = self.u8()? as usize;
        if !matches!(width, 1 | 2 | 4) {
            return Err(Error::Format(format!("bad symbol width {width}")));
        }
        let k = self.len(width)?;
        let raw = self.take(k * width)?;
        Ok(raw
            .chunks_exact(width)
            .map(|c| {
                let mut b = [0u8; 4];
                b[..width].copy_from_slice(c);
                u32::from_le_bytes(b)
            })
            .collect())
    }

    pub fn bits(&mut self) -> Result<BitVector> {
        let len = self.u64()? as usize;
        let k = self.len(8)?;
        if k != len.div_ceil(64) {
            return Err(Error::Format("bit vector word count mismatch".into()));
        }
        let words = (0..k).map(|_| self.u64()).collect::<Result<Vec<_>>>()?;
        Ok(BitVector::from_words(words, len))
    }

    /// Fails unless the whole payload was read.
    pub fn finish(self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Format("trailing bytes in section".into()));
        }
        Ok(())
    }
}

/// Mapping between input bytes and dense symbols.
///
/// Symbol `s >= 1` stands for `bytes[s - 1]`. Symbol `0` is the sentinel;
/// it stands for `sentinel` when the input supplied one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub sentinel: Option<u8>,
    pub bytes: Vec<u8>,
}

impl Alphabet {
    /// Maps `data` to a text ending in sentinel `0`.
    ///
    /// If the last byte is unique and smaller than every other byte it
    /// becomes the sentinel; otherwise a sentinel is appended. With `raw`
    /// every byte value is kept as its own symbol, `byte + 1`.
    pub fn encode_text(data: &[u8], raw: bool) -> (Self, Vec<Symbol>) {
        let sentinel = match data.split_last() {
            Some((&last, rest)) if !raw && rest.iter().all(|&b| b > last) => Some(last),
            _ => None,
        };
        let body = if sentinel.is_some() { &data[..data.len() - 1] } else { data };
        let bytes: Vec<u8> = if raw {
            (0..=u8::MAX).collect()
        } else {
            let mut seen = [false; 256];
            for &b in body {
                seen[b as usize] = true;
            }
            (0..=u8::MAX).filter(|&b| seen[b as usize]).collect()
        };
        let alphabet = Self { sentinel, bytes };
        let map = alphabet.symbol_table();
        let mut text: Vec<Symbol> = body.iter().map(|&b| map[b as usize].unwrap()).collect();
        text.push(0);
        (alphabet, text)
    }

    fn symbol_table(&self) -> [Option<Symbol>; 256] {
        let mut map = [None; 256];
        for (k, &b) in self.bytes.iter().enumerate() {
            map[b as usize] = Some(k as Symbol + 1);
        }
        map
    }

    pub fn sigma(&self) -> usize {
        self.bytes.len() + 1
    }

    /// Symbols for a pattern, or `None` if some byte never occurs in the
    /// text body.
    pub fn encode_pattern(&self, p: &[u8]) -> Option<Vec<Symbol>> {
        let map = self.symbol_table();
        p.iter().map(|&b| map[b as usize]).collect()
    }

    /// Byte for a symbol; an appended sentinel decodes to `0`.
    pub fn decode(&self, s: Symbol) -> u8 {
        if s == 0 {
            self.sentinel.unwrap_or(0)
        } else {
            self.bytes[s as usize - 1]
        }
    }

    fn encode(&self, e: &mut Encoder) {
        e.u8(self.sentinel.is_some() as u8).u8(self.sentinel.unwrap_or(0)).bytes(&self.bytes);
    }

    fn decode_from(d: &mut Decoder) -> Result<Self> {
        let has = d.u8()? != 0;
        let s = d.u8()?;
        let bytes = d.bytes()?;
        if bytes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format("alphabet bytes not increasing".into()));
        }
        Ok(Self { sentinel: has.then_some(s), bytes })
    }
}

/// Everything an index file holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexFile {
    pub alphabet: Alphabet,
    /// Pad symbols the BWT builder appended internally; the stored BWT is
    /// of the unpadded text.
    pub pad: u32,
    pub sample: u32,
    /// BWT of the text.
    pub bwt: Vec<Symbol>,
    /// Balanced parentheses of the suffix tree.
    pub bp: BitVector,
    pub plcp: PlcpBits,
    /// BWT of the reversed text.
    pub rbwt: Vec<Symbol>,
    /// Stored FM rank pairs `(l, r, label, lo, hi)`.
    pub pairs: Vec<(u32, u32, Symbol, u32, u32)>,
}

const META: [u8; 4] = *b"META";
const BWT: [u8; 4] = *b"BWT ";
const TOPO: [u8; 4] = *b"TOPO";
const PLCP: [u8; 4] = *b"PLCP";
const RBWT: [u8; 4] = *b"RBWT";
const PAIR: [u8; 4] = *b"PAIR";

impl IndexFile {
    pub fn len(&self) -> usize {
        self.bwt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bwt.is_empty()
    }

    pub fn sections(&self) -> Vec<Section> {
        let mut meta = Encoder::new();
        meta.u64(self.bwt.len() as u64).u32(self.pad).u32(self.sample);
        self.alphabet.encode(&mut meta);
        let mut bwt = Encoder::new();
        bwt.symbols(&self.bwt);
        let mut topo = Encoder::new();
        topo.bits(&self.bp);
        let mut plcp = Encoder::new();
        plcp.u64(self.plcp.len() as u64).bits(self.plcp.bits());
        let mut rbwt = Encoder::new();
        rbwt.symbols(&self.rbwt);
        let mut pairs = Encoder::new();
        pairs.u64(self.pairs.len() as u64);
        for &(l, r, c, lo, hi) in &self.pairs {
            pairs.u32(l).u32(r).u32(c).u32(lo).u32(hi);
        }
        [(META, meta), (BWT, bwt), (TOPO, topo), (PLCP, plcp), (RBWT, rbwt), (PAIR, pairs)]
            .into_iter()
            .map(|(tag, e)| Section { tag, payload: e.finish() })
            .collect()
    }

    pub fn write<W: Write>(&self, w: &mut W) -> Result<()> {
        write_sections(w, &self.sections())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.write(&mut v).expect("writing to memory");
        v
    }

    pub fn read<R: Read>(r: &mut R) -> Result<Self> {
        let sections = read_sections(r)?;
        let find = |tag: [u8; 4]| {
            sections
                .iter()
                .find(|s| s.tag == tag)
                .map(|s| Decoder::new(&s.payload))
                .ok_or_else(|| Error::Format(format!("missing section {}", tag_name(&tag))))
        };
        let mut d = find(META)?;
        let n = d.u64()? as usize;
        let pad = d.u32()?;
        let sample = d.u32()?;
        let alphabet = Alphabet::decode_from(&mut d)?;
        d.finish()?;

        let mut d = find(BWT)?;
        let bwt = d.symbols()?;
        d.finish()?;
        let mut d = find(TOPO)?;
        let bp = d.bits()?;
        d.finish()?;
        let mut d = find(PLCP)?;
        let plcp_len = d.u64()? as usize;
        let plcp = PlcpBits::from_bits(plcp_len, d.bits()?);
        d.finish()?;
        let mut d = find(RBWT)?;
        let rbwt = d.symbols()?;
        d.finish()?;
        let mut d = find(PAIR)?;
        let k = d.u64()? as usize;
        let mut pairs = Vec::with_capacity(k.min(1 << 20));
        for _ in 0..k {
            pairs.push((d.u32()?, d.u32()?, d.u32()?, d.u32()?, d.u32()?));
        }
        d.finish()?;

        let sigma = alphabet.sigma();
        if bwt.len() != n || rbwt.len() != n || plcp_len != n || bp.len() < 2 * n {
            return Err(Error::Format("section lengths disagree".into()));
        }
        if bwt.iter().chain(&rbwt).any(|&s| s as usize >= sigma) {
            return Err(Error::Format("symbol outside alphabet".into()));
        }
        if n == 0 || sample == 0 {
            return Err(Error::Format("empty index".into()));
        }
        Ok(Self { alphabet, pad, sample, bwt, bp, plcp, rbwt, pairs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_sentinel_rule() {
        let (a, t) = Alphabet::encode_text(b"abracadabra$", false);
        assert_eq!(a.sentinel, Some(b'$'));
        assert_eq!(a.bytes, b"abcdr");
        assert_eq!(t, vec![1, 2, 5, 1, 3, 1, 4, 1, 2, 5, 1, 0]);
        let (a, t) = Alphabet::encode_text(b"banana", false);
        assert_eq!(a.sentinel, None);
        assert_eq!(t.len(), 7);
        assert_eq!(a.decode(0), 0);
        let (a, t) = Alphabet::encode_text(b"", false);
        assert_eq!((a.sigma(), t), (1, vec![0]));
        let (a, t) = Alphabet::encode_text(b"\x00a", true);
        assert_eq!((a.sigma(), t), (257, vec![1, 98, 0]));
        assert_eq!(a.encode_pattern(b"ab"), Some(vec![98, 99]));
        let (a, _) = Alphabet::encode_text(b"abc", false);
        assert_eq!(a.encode_pattern(b"ax"), None);
    }

    fn sample_file() -> IndexFile {
        let v: Vec<u32> = vec![0, 4, 3, 2, 1, 0, 1, 0, 3, 2, 1, 0];
        IndexFile {
            alphabet: Alphabet { sentinel: Some(b'$'), bytes: b"abcdr".to_vec() },
            pad: 0,
            sample: 4,
            bwt: vec![1, 5, 4, 0, 5, 3, 1, 1, 1, 1, 2, 2],
            bp: BitVector::from_words(vec![0x5555_0fff], 40),
            plcp: PlcpBits::from_values(&v),
            rbwt: vec![1, 5, 4, 0, 5, 3, 1, 1, 1, 1, 2, 2],
            pairs: vec![(0, 11, 1, 0, 5), (0, 11, 2, 0, 2)],
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let f = sample_file();
        let bytes = f.to_bytes();
        let back = IndexFile::read(&mut bytes.as_slice()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn corruption_is_detected() {
        let bytes = sample_file().to_bytes();
        for k in [0, 9, 40, bytes.len() - 1] {
            let mut b = bytes.clone();
            b[k] ^= 0x10;
            assert!(IndexFile::read(&mut b.as_slice()).is_err(), "flip at {k}");
        }
        assert!(IndexFile::read(&mut &bytes[..bytes.len() - 3]).is_err());
    }

    #[test]
    fn wide_symbols() {
        let v: Vec<Symbol> = vec![0, 70_000, 3, 300];
        let mut e = Encoder::new();
        e.symbols(&v).symbols(&[1, 300]);
        let buf = e.finish();
        let mut d = Decoder::new(&buf);
        assert_eq!(d.symbols().unwrap(), v);
        assert_eq!(d.symbols().unwrap(), vec![1, 300]);
        d.finish().unwrap();
    }
}
