//! The automorphism interleaver `sigma_a: X -> X^a` of `Z_{2^k}[X]/(X^N+1)`.
//!
//! Coefficient `u_j` moves to index `a j mod N`, negated when
//! `a j mod 2N >= N`. For `gcd(a, 2N) = 1` this is a ring automorphism.

use rand::{Rng, SeedableRng};
use rand_chacha::{ChaCha20Rng, ChaCha8Rng};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ring::RingElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InterleaveParams {
    n: usize,
    a: u64,
    a_inv: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m as i128) as u64)
}

impl InterleaveParams {
    /// Requires `a` odd with `gcd(a, 2N) = 1`; `a` is reduced mod `2N`.
    pub fn new(a: u64, n: usize) -> Result<Self> {
        let two_n = 2 * n as u64;
        let bad = || Error::InvalidMultiplier { a, n };
        if n < 2 || a.is_multiple_of(2) || gcd(a % two_n, two_n) != 1 {
            return Err(bad());
        }
        let a = a % two_n;
        let a_inv = inv_mod(a, two_n).ok_or_else(bad)?;
        Ok(Self { n, a, a_inv })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(1, n)
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn a_inv(&self) -> u64 {
        self.a_inv
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn inverse(&self) -> Self {
        Self {
            n: self.n,
            a: self.a_inv,
            a_inv: self.a,
        }
    }

    /// Destination index of coefficient `j` and whether it is negated.
    pub fn map_index(&self, j: usize) -> (usize, bool) {
        let e = (self.a as u128 * j as u128 % (2 * self.n as u128)) as usize;
        if e >= self.n {
            (e - self.n, true)
        } else {
            (e, false)
        }
    }
}

fn apply(u: &RingElement, a: &InterleaveParams) -> Result<RingElement> {
    let p = u.params();
    if p.n() != a.n {
        return Err(Error::InvalidMultiplier { a: a.a, n: p.n() });
    }
    let mk = p.mask();
    let mut out = vec![0u64; p.n()];
    for (j, &c) in u.coeffs().iter().enumerate() {
        let (i, neg) = a.map_index(j);
        out[i] = if neg { c.wrapping_neg() & mk } else { c };
    }
    RingElement::new(p, out)
}

pub fn sigma_apply(u: &RingElement, p: &InterleaveParams) -> Result<RingElement> {
    apply(u, p)
}

pub fn sigma_invert(u: &RingElement, p: &InterleaveParams) -> Result<RingElement> {
    apply(u, &p.inverse())
}

/// Per-frame multiplier from a public seed: the key is SHA-256 of the seed,
/// the ChaCha20 stream number is the frame index, and draws are rejected
/// until an odd unit mod `2N` appears.
pub fn derive_multiplier(seed: &[u8], frame_index: u64, n: usize) -> Result<InterleaveParams> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("interleaver needs N >= 2, got {n}")));
    }
    let key: [u8; 32] = Sha256::digest(seed).into();
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(frame_index);
    let two_n = 2 * n as u64;
    loop {
        let a = 2 * rng.random_range(0..n as u64) + 1;
        if gcd(a, two_n) == 1 {
            return InterleaveParams::new(a, n);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionStats {
    pub trials: usize,
    pub mean_weight: f64,
    pub var_weight: f64,
    /// `run_hist[r]` counts trials whose longest cyclic run of adjacent
    /// hit positions is `r`.
    pub run_hist: Vec<u64>,
}

impl DispersionStats {
    /// Fraction of trials with longest run at most `r`.
    pub fn fraction_runs_at_most(&self, r: usize) -> f64 {
        let hit: u64 = self.run_hist.iter().take(r + 1).sum();
        hit as f64 / self.trials as f64
    }
}

fn longest_cyclic_run(hit: &[bool]) -> usize {
    let n = hit.len();
    if hit.iter().all(|&h| h) {
        return n;
    }
    let start = hit.iter().position(|&h| !h).unwrap();
    let (mut best, mut cur) = (0, 0);
    for i in 1..=n {
        if hit[(start + i) % n] {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best
}

/// Monte Carlo over random multipliers: interleaves a length-`b` burst at
/// a random start and records the image weight and its longest run.
pub fn burst_dispersion_stats(n: usize, b: usize, trials: usize, rng_seed: u64) -> Result<DispersionStats> {
    if b > n || trials == 0 {
        return Err(Error::InvalidParams(format!("need B <= N and trials > 0 (B={b}, N={n})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut run_hist = vec![0u64; n + 1];
    let (mut sum, mut sum_sq) = (0f64, 0f64);
    let mut hit = vec![false; n];
    for _ in 0..trials {
        let a = loop {
            let a = 2 * rng.random_range(0..n as u64) + 1;
            if gcd(a, 2 * n as u64) == 1 {
                break InterleaveParams::new(a, n)?;
            }
        };
        let start = rng.random_range(0..n);
        hit.iter_mut().for_each(|h| *h = false);
        for i in 0..b {
            hit[a.map_index((start + i) % n).0] = true;
        }
        let w = hit.iter().filter(|&&h| h).count() as f64;
        sum += w;
        sum_sq += w * w;
        run_hist[longest_cyclic_run(&hit)] += 1;
    }
    let t = trials as f64;
    let mean = sum / t;
    Ok(DispersionStats {
        trials,
        mean_weight: mean,
        var_weight: (sum_sq / t - mean * mean).max(0.0),
        run_hist,
    })
}
