//! Wire frames: encode, interleave, serialize with checksums, and the
//! reverse path with CRC-flagged erasures.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! 0  magic "PFEC"        4  version            5  mode (0 RR, 1 BCH-gen, 2 BCH-idem)
//! 6  log2 k              7  flags (bit0 CRC, bit1 per-frame multiplier)
//! 8  N (u32)             12 t (u16)            14 b (u16)
//! 16 a or frame index (u32)                    20 chunk symbols (u16), 2 zero bytes
//! 24 payload: N symbols of k/8 bytes
//!    then, with CRC: one CRC-16 per chunk, CRC-32 over header and payload
//! ```

use serde::{Deserialize, Serialize};

use crate::bch::{bch_decode, bch_encode_gen, bch_encode_idem, bch_idem_section, BchCodecConfig, MessageDomain};
use crate::crc::{crc16, crc32};
use crate::error::{Error, Result};
use crate::interleave::{derive_multiplier, sigma_apply, sigma_invert, InterleaveParams};
use crate::pattern::{Decoded, ErasureSet};
use crate::ring::{RingElement, RingParams};
use crate::rr::{rr_decode, rr_encode, RrConfig};

pub const MAGIC: [u8; 4] = *b"PFEC";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 24;
pub const DEFAULT_CHUNK_SYMBOLS: usize = 64;

const FLAG_CRC: u8 = 1;
const FLAG_PER_FRAME: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Rr,
    BchGen,
    BchIdem,
}

impl Mode {
    fn code(self) -> u8 {
        match self {
            Mode::Rr => 0,
            Mode::BchGen => 1,
            Mode::BchIdem => 2,
        }
    }

    fn from_code(c: u8) -> Option<Self> {
        match c {
            0 => Some(Mode::Rr),
            1 => Some(Mode::BchGen),
            2 => Some(Mode::BchIdem),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrameHeader {
    pub mode: Mode,
    pub k: u32,
    pub crc: bool,
    pub per_frame: bool,
    pub n: u32,
    pub t: u16,
    pub b: u16,
    /// The multiplier, or the frame index when `per_frame` is set.
    pub a_or_index: u32,
    pub chunk_symbols: u16,
}

impl FrameHeader {
    pub fn symbol_bytes(&self) -> usize {
        self.k as usize / 8
    }

    pub fn chunk_count(&self) -> usize {
        if self.crc {
            (self.n as usize).div_ceil(self.chunk_symbols as usize)
        } else {
            0
        }
    }

    /// Total serialized length of a frame with this header.
    pub fn frame_len(&self) -> usize {
        HEADER_LEN
            + self.n as usize * self.symbol_bytes()
            + if self.crc { 2 * self.chunk_count() + 4 } else { 0 }
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut h = [0u8; HEADER_LEN];
        h[..4].copy_from_slice(&MAGIC);
        h[4] = VERSION;
        h[5] = self.mode.code();
        h[6] = self.k.trailing_zeros() as u8;
        h[7] = if self.crc { FLAG_CRC } else { 0 } | if self.per_frame { FLAG_PER_FRAME } else { 0 };
        h[8..12].copy_from_slice(&self.n.to_le_bytes());
        h[12..14].copy_from_slice(&self.t.to_le_bytes());
        h[14..16].copy_from_slice(&self.b.to_le_bytes());
        h[16..20].copy_from_slice(&self.a_or_index.to_le_bytes());
        h[20..22].copy_from_slice(&self.chunk_symbols.to_le_bytes());
        h
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::HeaderCorrupt(m.into());
        if bytes.len() < HEADER_LEN {
            return Err(bad("shorter than a header"));
        }
        if bytes[..4] != MAGIC {
            return Err(bad("bad magic"));
        }
        if bytes[4] != VERSION {
            return Err(Error::HeaderCorrupt(format!("unsupported version {}", bytes[4])));
        }
        let mode = Mode::from_code(bytes[5]).ok_or_else(|| bad("unknown mode"))?;
        if !(3..=6).contains(&bytes[6]) {
            return Err(bad("symbol width must be 8, 16, 32 or 64 bits"));
        }
        if bytes[7] & !(FLAG_CRC | FLAG_PER_FRAME) != 0 {
            return Err(bad("unknown flag bits"));
        }
        let u16_at = |i: usize| u16::from_le_bytes([bytes[i], bytes[i + 1]]);
        let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        let h = Self {
            mode,
            k: 1 << bytes[6],
            crc: bytes[7] & FLAG_CRC != 0,
            per_frame: bytes[7] & FLAG_PER_FRAME != 0,
            n: u32_at(8),
            t: u16_at(12),
            b: u16_at(14),
            a_or_index: u32_at(16),
            chunk_symbols: u16_at(20),
        };
        if bytes[22..24] != [0, 0] {
            return Err(bad("reserved bytes set"));
        }
        if h.n < 2 || 2 * h.t as u32 >= h.n || h.t == 0 {
            return Err(bad("inconsistent N and t"));
        }
        if (mode == Mode::Rr) != h.n.is_power_of_two() || (mode == Mode::Rr && h.b != 0) {
            return Err(bad("mode does not match N"));
        }
        if h.crc && h.chunk_symbols == 0 {
            return Err(bad("zero chunk size"));
        }
        Ok(h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameEnvelope {
    pub header: FrameHeader,
    /// Interleaved codeword symbols in transmission order.
    pub payload: Vec<u64>,
    pub chunk_crcs: Vec<u16>,
    pub crc32: Option<u32>,
}

fn payload_bytes(symbols: &[u64], s: usize) -> Vec<u8> {
    symbols.iter().flat_map(|v| v.to_le_bytes()[..s].to_vec()).collect()
}

fn frame_crc32(header: &FrameHeader, payload: &[u8]) -> u32 {
    let mut buf = header.to_bytes().to_vec();
    buf.extend_from_slice(payload);
    crc32(&buf)
}

impl FrameEnvelope {
    pub fn payload_bytes(&self) -> Vec<u8> {
        payload_bytes(&self.payload, self.header.symbol_bytes())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.header.to_bytes().to_vec();
        out.extend(self.payload_bytes());
        for c in &self.chunk_crcs {
            out.extend_from_slice(&c.to_le_bytes());
        }
        if let Some(c) = self.crc32 {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let header = FrameHeader::parse(bytes)?;
        if bytes.len() != header.frame_len() {
            return Err(Error::HeaderCorrupt(format!(
                "frame is {} bytes, header implies {}",
                bytes.len(),
                header.frame_len()
            )));
        }
        let s = header.symbol_bytes();
        let n = header.n as usize;
        let body = &bytes[HEADER_LEN..];
        let payload = body[..n * s]
            .chunks_exact(s)
            .map(|c| {
                let mut w = [0u8; 8];
                w[..s].copy_from_slice(c);
                u64::from_le_bytes(w)
            })
            .collect();
        let mut rest = &body[n * s..];
        let mut chunk_crcs = Vec::new();
        let mut crc = None;
        if header.crc {
            for _ in 0..header.chunk_count() {
                chunk_crcs.push(u16::from_le_bytes([rest[0], rest[1]]));
                rest = &rest[2..];
            }
            crc = Some(u32::from_le_bytes(rest[..4].try_into().unwrap()));
        }
        Ok(Self {
            header,
            payload,
            chunk_crcs,
            crc32: crc,
        })
    }

    /// Payload symbol indices (transmission order) of chunks whose CRC-16
    /// does not match.
    pub fn flagged_positions(&self) -> Vec<usize> {
        if !self.header.crc {
            return Vec::new();
        }
        let c = self.header.chunk_symbols as usize;
        let bytes = self.payload_bytes();
        let s = self.header.symbol_bytes();
        let mut out = Vec::new();
        for (i, &stored) in self.chunk_crcs.iter().enumerate() {
            let lo = i * c;
            let hi = ((i + 1) * c).min(self.payload.len());
            if crc16(&bytes[lo * s..hi * s]) != stored {
                out.extend(lo..hi);
            }
        }
        out
    }
}

/// A code together with the frame mode it is used in.
#[derive(Debug, Clone)]
pub enum Codec {
    Rr(RrConfig),
    Bch(BchCodecConfig),
}

impl Codec {
    /// Builds the code named by a mode and parameters. `b` is ignored for RR.
    pub fn build(mode: Mode, n: usize, k: u32, t: usize, b: usize) -> Result<Self> {
        if ![8, 16, 32, 64].contains(&k) {
            return Err(Error::InvalidParams(format!("frames need k in {{8,16,32,64}}, got {k}")));
        }
        match mode {
            Mode::Rr => Ok(Codec::Rr(RrConfig::new(RingParams::new(n, k)?, t)?)),
            Mode::BchGen => Ok(Codec::Bch(BchCodecConfig::new(n, k, t, b, MessageDomain::GeneratorSystematic)?)),
            Mode::BchIdem => Ok(Codec::Bch(BchCodecConfig::new(n, k, t, b, MessageDomain::IdempotentProjector)?)),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Codec::Rr(_) => Mode::Rr,
            Codec::Bch(c) => match c.domain() {
                MessageDomain::GeneratorSystematic => Mode::BchGen,
                MessageDomain::IdempotentProjector => Mode::BchIdem,
            },
        }
    }

    pub fn params(&self) -> RingParams {
        match self {
            Codec::Rr(c) => c.params(),
            Codec::Bch(c) => c.params(),
        }
    }

    pub fn t(&self) -> usize {
        match self {
            Codec::Rr(c) => c.t(),
            Codec::Bch(c) => c.t(),
        }
    }

    pub fn b(&self) -> usize {
        match self {
            Codec::Rr(_) => 0,
            Codec::Bch(c) => c.state().b,
        }
    }

    /// Message symbols per frame.
    pub fn message_len(&self) -> usize {
        match self {
            Codec::Rr(c) => c.message_len(),
            Codec::Bch(c) => c.message_len(),
        }
    }

    /// Encodes a message of degree below [`Codec::message_len`].
    pub fn encode(&self, m: &RingElement) -> Result<RingElement> {
        match self {
            Codec::Rr(c) => rr_encode(m, c),
            Codec::Bch(c) => match c.domain() {
                MessageDomain::GeneratorSystematic => bch_encode_gen(m, c),
                MessageDomain::IdempotentProjector => {
                    let max = c.message_len();
                    if !m.degree_below(max) {
                        let len = m.coeffs().iter().rposition(|&x| x != 0).map_or(0, |p| p + 1);
                        return Err(Error::MessageTooLong { len, max });
                    }
                    bch_encode_idem(m, c)
                }
            },
        }
    }

    /// Decodes and maps the codeword back to the short message.
    pub fn decode(&self, r: &RingElement, erasures: &ErasureSet) -> Result<Decoded> {
        match self {
            Codec::Rr(c) => rr_decode(r, erasures, c),
            Codec::Bch(c) => {
                let mut d = bch_decode(r, erasures, c)?;
                if c.domain() == MessageDomain::IdempotentProjector {
                    d.message = bch_idem_section(&d.codeword, c)?;
                }
                Ok(d)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultiplierPolicy {
    Fixed(u64),
    /// Derived per frame from this public seed and the frame index.
    PerFrame(Vec<u8>),
}

#[derive(Debug, Clone)]
pub struct Session {
    pub codec: Codec,
    pub multiplier: MultiplierPolicy,
    pub crc: bool,
    pub chunk_symbols: usize,
}

impl Session {
    pub fn new(codec: Codec, multiplier: MultiplierPolicy) -> Self {
        Self {
            codec,
            multiplier,
            crc: true,
            chunk_symbols: DEFAULT_CHUNK_SYMBOLS,
        }
    }

    pub fn with_crc(mut self, crc: bool) -> Self {
        self.crc = crc;
        self
    }

    pub fn with_chunk_symbols(mut self, c: usize) -> Self {
        self.chunk_symbols = c;
        self
    }

    /// Rebuilds a session from a received header. Per-frame headers need
    /// the flow seed.
    pub fn from_header(h: &FrameHeader, seed: Option<&[u8]>) -> Result<Self> {
        let codec = Codec::build(h.mode, h.n as usize, h.k, h.t as usize, h.b as usize)?;
        let multiplier = if h.per_frame {
            let seed = seed.ok_or_else(|| Error::SessionMismatch("per-frame multiplier needs a seed".into()))?;
            MultiplierPolicy::PerFrame(seed.to_vec())
        } else {
            MultiplierPolicy::Fixed(h.a_or_index as u64)
        };
        Ok(Self {
            codec,
            multiplier,
            crc: h.crc,
            chunk_symbols: if h.crc { h.chunk_symbols as usize } else { DEFAULT_CHUNK_SYMBOLS },
        })
    }

    fn interleaver(&self, frame_index: u64) -> Result<InterleaveParams> {
        let n = self.codec.params().n();
        match &self.multiplier {
            MultiplierPolicy::Fixed(a) => InterleaveParams::new(*a, n),
            MultiplierPolicy::PerFrame(seed) => derive_multiplier(seed, frame_index, n),
        }
    }

    fn header(&self, a_or_index: u32) -> Result<FrameHeader> {
        let p = self.codec.params();
        let too_big = |what: &str| Error::InvalidParams(format!("{what} does not fit the frame header"));
        Ok(FrameHeader {
            mode: self.codec.mode(),
            k: p.k(),
            crc: self.crc,
            per_frame: matches!(self.multiplier, MultiplierPolicy::PerFrame(_)),
            n: u32::try_from(p.n()).map_err(|_| too_big("N"))?,
            t: u16::try_from(self.codec.t()).map_err(|_| too_big("t"))?,
            b: u16::try_from(self.codec.b()).map_err(|_| too_big("b"))?,
            a_or_index,
            chunk_symbols: if self.crc {
                u16::try_from(self.chunk_symbols)
                    .ok()
                    .filter(|&c| c > 0)
                    .ok_or_else(|| too_big("chunk size"))?
            } else {
                0
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Ok,
    CorrectedErrors { errors: usize, erasures: usize },
    Fail(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceiveReport {
    pub status: Status,
    pub message: Option<RingElement>,
}

/// Encodes, interleaves and serializes one frame.
pub fn encode_and_send(m: &RingElement, session: &Session, frame_index: u64) -> Result<FrameEnvelope> {
    let c = session.codec.encode(m)?;
    let intlv = session.interleaver(frame_index)?;
    let field = match session.multiplier {
        MultiplierPolicy::Fixed(_) => u32::try_from(intlv.a()),
        MultiplierPolicy::PerFrame(_) => u32::try_from(frame_index),
    }
    .map_err(|_| Error::InvalidParams("multiplier or frame index exceeds 32 bits".into()))?;
    let header = session.header(field)?;
    let payload = sigma_apply(&c, &intlv)?.into_coeffs();
    let (chunk_crcs, crc) = if session.crc {
        let bytes = payload_bytes(&payload, header.symbol_bytes());
        let step = session.chunk_symbols * header.symbol_bytes();
        (bytes.chunks(step).map(crc16).collect(), Some(frame_crc32(&header, &bytes)))
    } else {
        (Vec::new(), None)
    };
    Ok(FrameEnvelope {
        header,
        payload,
        chunk_crcs,
        crc32: crc,
    })
}

fn check_session(h: &FrameHeader, s: &Session) -> Result<()> {
    let p = s.codec.params();
    if h.n as usize != p.n() || h.k != p.k() {
        return Err(Error::ParamMismatch {
            left_n: h.n as usize,
            left_k: h.k,
            right_n: p.n(),
            right_k: p.k(),
        });
    }
    let mut diffs = Vec::new();
    if h.mode != s.codec.mode() {
        diffs.push("mode");
    }
    if h.t as usize != s.codec.t() || h.b as usize != s.codec.b() {
        diffs.push("t/b");
    }
    if h.crc != s.crc || (h.crc && h.chunk_symbols as usize != s.chunk_symbols) {
        diffs.push("crc layout");
    }
    if h.per_frame != matches!(s.multiplier, MultiplierPolicy::PerFrame(_)) {
        diffs.push("multiplier policy");
    }
    if diffs.is_empty() {
        Ok(())
    } else {
        Err(Error::SessionMismatch(diffs.join(", ")))
    }
}

/// Deinterleaves, flags CRC-failed chunks as erasures, decodes and checks
/// the frame CRC against the corrected payload.
pub fn recv_and_decode(env: &FrameEnvelope, session: &Session) -> Result<ReceiveReport> {
    let h = &env.header;
    check_session(h, session)?;
    let params = session.codec.params();
    let intlv = if h.per_frame {
        session.interleaver(h.a_or_index as u64)?
    } else {
        InterleaveParams::new(h.a_or_index as u64, params.n())
            .map_err(|_| Error::HeaderCorrupt(format!("invalid multiplier {}", h.a_or_index)))?
    };
    if env.payload.len() != params.n() || env.payload.iter().any(|&v| v & !params.mask() != 0) {
        return Err(Error::HeaderCorrupt("payload does not match header".into()));
    }
    let inv = intlv.inverse();
    let mut erasures = ErasureSet::new(env.flagged_positions().into_iter().map(|i| inv.map_index(i).0));
    // flags beyond the erasure budget carry no usable information
    if erasures.len() > 2 * session.codec.t() {
        erasures = ErasureSet::empty();
    }
    let r = sigma_invert(&RingElement::new(params, env.payload.clone())?, &intlv)?;
    let fail = |why: String| ReceiveReport {
        status: Status::Fail(why),
        message: None,
    };
    let d = match session.codec.decode(&r, &erasures) {
        Ok(d) => d,
        Err(
            e @ (Error::DecodeFailure(_) | Error::AmbiguousPattern(_) | Error::NonzeroRemainder | Error::NotInCode),
        ) => return Ok(fail(e.to_string())),
        Err(e) => return Err(e),
    };
    if let Some(stored) = env.crc32 {
        let sent = sigma_apply(&d.codeword, &intlv)?;
        if frame_crc32(h, &payload_bytes(sent.coeffs(), h.symbol_bytes())) != stored {
            return Ok(fail("frame CRC mismatch after decoding".into()));
        }
    }
    let status = if d.pattern.is_empty() && erasures.is_empty() {
        Status::Ok
    } else {
        Status::CorrectedErrors {
            errors: d.errors,
            erasures: d.erasures,
        }
    };
    Ok(ReceiveReport {
        status,
        message: Some(d.message),
    })
}

/// Concatenates frames, each prefixed by its length as a u32.
pub fn write_stream(frames: &[FrameEnvelope]) -> Vec<u8> {
    let mut out = Vec::new();
    for f in frames {
        let b = f.to_bytes();
        out.extend_from_slice(&(b.len() as u32).to_le_bytes());
        out.extend(b);
    }
    out
}

/// Splits a length-prefixed stream into raw frames without parsing them.
pub fn split_stream(bytes: &[u8]) -> Result<Vec<&[u8]>> {
    let mut out = Vec::new();
    let mut rest = bytes;
    while !rest.is_empty() {
        if rest.len() < 4 {
            return Err(Error::HeaderCorrupt("truncated length prefix".into()));
        }
        let len = u32::from_le_bytes(rest[..4].try_into().unwrap()) as usize;
        if rest.len() < 4 + len {
            return Err(Error::HeaderCorrupt("truncated frame".into()));
        }
        out.push(&rest[4..4 + len]);
        rest = &rest[4 + len..];
    }
    Ok(out)
}

pub fn read_stream(bytes: &[u8]) -> Result<Vec<FrameEnvelope>> {
    split_stream(bytes)?.into_iter().map(FrameEnvelope::from_bytes).collect()
}
