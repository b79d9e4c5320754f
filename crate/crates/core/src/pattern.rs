//! Sparse error patterns and erasure sets shared by both codecs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{RingElement, RingParams};

/// `E(X) = sum e_l X^{j_l}` with strictly increasing positions and nonzero
/// magnitudes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ErrorPattern {
    positions: Vec<usize>,
    magnitudes: Vec<u64>,
}

impl ErrorPattern {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Zero magnitudes are dropped; positions must be distinct.
    pub fn new(pairs: impl IntoIterator<Item = (usize, u64)>) -> Result<Self> {
        let mut v: Vec<(usize, u64)> = pairs.into_iter().filter(|&(_, m)| m != 0).collect();
        v.sort_unstable_by_key(|&(j, _)| j);
        if v.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParams("duplicate error position".into()));
        }
        Ok(Self {
            positions: v.iter().map(|p| p.0).collect(),
            magnitudes: v.iter().map(|p| p.1).collect(),
        })
    }

    /// The nonzero coefficients of `e`.
    pub fn from_element(e: &RingElement) -> Self {
        let (positions, magnitudes) = e
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j, c))
            .unzip();
        Self {
            positions,
            magnitudes,
        }
    }

    pub fn to_element(&self, params: RingParams) -> Result<RingElement> {
        let mut c = vec![0u64; params.n()];
        for (&j, &m) in self.positions.iter().zip(&self.magnitudes) {
            if j >= params.n() {
                return Err(Error::InvalidParams(format!("error position {j} out of range")));
            }
            c[j] = m;
        }
        RingElement::new(params, c)
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn magnitudes(&self) -> &[u64] {
        &self.magnitudes
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.positions.iter().copied().zip(self.magnitudes.iter().copied())
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Positions flagged by a lower layer as unreliable.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ErasureSet {
    indices: BTreeSet<usize>,
}

impl ErasureSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        Self {
            indices: indices.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, j: usize) {
        self.indices.insert(j);
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.contains(&j)
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Sorted indices.
    pub fn to_vec(&self) -> Vec<usize> {
        self.indices.iter().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.indices.last() {
            Some(&j) if j >= n => Err(Error::InvalidParams(format!("erasure {j} out of range"))),
            _ => Ok(()),
        }
    }
}

/// Result of a successful decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    /// Recovered message (the codeword itself for projector-mode BCH).
    pub message: RingElement,
    pub codeword: RingElement,
    /// The correction that was subtracted from the received word.
    pub pattern: ErrorPattern,
    /// Nonzero corrections at positions outside the erasure set.
    pub errors: usize,
    /// Size of the erasure set used.
    pub erasures: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_roundtrip() {
        let p = RingParams::new(8, 8).unwrap();
        let e = ErrorPattern::new([(5, 3), (1, 200), (2, 0)]).unwrap();
        assert_eq!(e.positions(), &[1, 5]);
        let el = e.to_element(p).unwrap();
        assert_eq!(ErrorPattern::from_element(&el), e);
        assert!(ErrorPattern::new([(1, 1), (1, 2)]).is_err());
    }
}
