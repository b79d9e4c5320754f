//! Seeded fault injection: i.i.d. symbol replacement and contiguous bursts.

use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::pattern::ErrorPattern;
use crate::ring::{mask, RingElement};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BurstStart {
    Fixed(usize),
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FaultModel {
    /// Each symbol is replaced with probability `p`.
    Iid { p: f64 },
    /// Symbols `start .. start + len` (mod N) are replaced.
    Burst { len: usize, start: BurstStart },
    Composite(Vec<FaultModel>),
}

impl FaultModel {
    pub fn iid(p: f64) -> Self {
        FaultModel::Iid { p }
    }

    pub fn burst(len: usize) -> Self {
        FaultModel::Burst {
            len,
            start: BurstStart::Uniform,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            FaultModel::Iid { p } if !(0.0..=1.0).contains(p) => {
                Err(Error::InvalidParams(format!("probability {p} outside [0, 1]")))
            }
            FaultModel::Burst { len, .. } if *len > n => {
                Err(Error::InvalidParams(format!("burst of {len} exceeds N = {n}")))
            }
            FaultModel::Composite(ms) => ms.iter().try_for_each(|m| m.validate(n)),
            _ => Ok(()),
        }
    }
}

/// Parses `iid:P` or `burst:B`.
impl FromStr for FaultModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("fault model {s:?}: expected iid:P or burst:B"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "iid" => {
                let p: f64 = arg.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(bad());
                }
                Ok(FaultModel::iid(p))
            }
            "burst" => Ok(FaultModel::burst(arg.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

fn replace<R: Rng + ?Sized>(sym: &mut u64, k: u32, rng: &mut R) {
    *sym = rng.random_range(1..=mask(k));
}

/// Corrupts symbols in place and returns the touched positions in order.
pub fn inject_symbols<R: Rng + ?Sized>(symbols: &mut [u64], k: u32, model: &FaultModel, rng: &mut R) -> Result<Vec<usize>> {
    let n = symbols.len();
    model.validate(n)?;
    let mut touched = Vec::new();
    match model {
        FaultModel::Iid { p } => {
            for (j, s) in symbols.iter_mut().enumerate() {
                if *p > 0.0 && rng.random_bool(*p) {
                    replace(s, k, rng);
                    touched.push(j);
                }
            }
        }
        FaultModel::Burst { len, start } => {
            let j0 = match start {
                BurstStart::Fixed(j) => *j % n,
                BurstStart::Uniform => rng.random_range(0..n),
            };
            for i in 0..*len {
                let j = (j0 + i) % n;
                replace(&mut symbols[j], k, rng);
                touched.push(j);
            }
        }
        FaultModel::Composite(ms) => {
            for m in ms {
                touched.extend(inject_symbols(symbols, k, m, rng)?);
            }
            touched.sort_unstable();
            touched.dedup();
        }
    }
    Ok(touched)
}

/// Returns the corrupted word and the additive truth `new - old`;
/// replacements that redraw the original value do not appear in the truth.
pub fn inject<R: Rng + ?Sized>(c: &RingElement, model: &FaultModel, rng: &mut R) -> Result<(RingElement, ErrorPattern)> {
    let p = c.params();
    let mut sym = c.coeffs().to_vec();
    inject_symbols(&mut sym, p.k(), model, rng)?;
    let out = RingElement::new(p, sym)?;
    let truth = ErrorPattern::from_element(&out.sub(c)?);
    Ok((out, truth))
}

/// Byte-level corruption of a serialized payload. `iid` acts per symbol
/// of `symbol_bytes` bytes; `burst:B` rewrites `B` contiguous bytes at a
/// uniform offset. Every rewritten byte or symbol differs from the original.
pub fn corrupt_bytes<R: Rng + ?Sized>(buf: &mut [u8], symbol_bytes: usize, model: &FaultModel, rng: &mut R) -> Result<usize> {
    let mut changed = 0;
    match model {
        FaultModel::Iid { p } => {
            for s in buf.chunks_mut(symbol_bytes) {
                if *p > 0.0 && rng.random_bool(*p) {
                    let old = s.to_vec();
                    while s == &old[..] {
                        rng.fill(&mut *s);
                    }
                    changed += 1;
                }
            }
        }
        FaultModel::Burst { len, start } => {
            if *len > buf.len() {
                return Err(Error::InvalidParams(format!("burst of {len} bytes exceeds {} bytes", buf.len())));
            }
            let j0 = match start {
                BurstStart::Fixed(j) => (*j).min(buf.len() - len),
                BurstStart::Uniform => rng.random_range(0..=buf.len() - len),
            };
            for b in &mut buf[j0..j0 + len] {
                *b ^= rng.random_range(1..=255u8);
                changed += 1;
            }
        }
        FaultModel::Composite(ms) => {
            for m in ms {
                changed += corrupt_bytes(buf, symbol_bytes, m, rng)?;
            }
        }
    }
    Ok(changed)
}
