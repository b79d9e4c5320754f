//! Repeated-root negacyclic codes `C_t = <(X+1)^{2t}>` for `N = 2^m`.
//!
//! Decoding works on the Hasse-derivative syndromes `S_i = r^{[i]}(-1)`,
//! which are the first `2t` Taylor coefficients of `r` at `-1`. An error at
//! position `j` with magnitude `e` contributes `e * (-1)^{j-i} C(j,i)` to
//! `S_i`; the vector of those binomials is called the column of `j` below.

use crate::error::{Error, Result};
use crate::pattern::{Decoded, ErasureSet, ErrorPattern};
use crate::ring::{inv_odd_unchecked, mask, RingElement, RingParams};
use crate::zlin::{self, Solution};

pub const DEFAULT_MAX_SEARCH_ERRORS: usize = 3;
pub const DEFAULT_LEAF_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone)]
pub struct RrConfig {
    params: RingParams,
    t: usize,
    parity_mask: RingElement,
    // columns[j][i] = (-1)^{j-i} C(j,i) mod 2^k for i < 2t
    columns: Vec<Vec<u64>>,
    max_search_errors: usize,
    leaf_budget: u64,
}

impl RrConfig {
    pub fn new(params: RingParams, t: usize) -> Result<Self> {
        let n = params.n();
        if !n.is_power_of_two() {
            return Err(Error::InvalidParams(format!("repeated-root codes need N = 2^m, got {n}")));
        }
        if t == 0 || 2 * t >= n {
            return Err(Error::InvalidParams(format!("need 1 <= t and 2t < N (t={t}, N={n})")));
        }
        let two_t = 2 * t;
        let mk = params.mask();
        let mut row = vec![0u64; two_t + 1];
        row[0] = 1;
        let mut columns = Vec::with_capacity(n);
        let mut parity = vec![0u64; n];
        for j in 0..n {
            if j == two_t {
                parity[..=two_t].copy_from_slice(&row);
            }
            columns.push(
                (0..two_t)
                    .map(|i| {
                        if i > j {
                            0
                        } else if (j - i) % 2 == 0 {
                            row[i] & mk
                        } else {
                            row[i].wrapping_neg() & mk
                        }
                    })
                    .collect(),
            );
            for i in (1..=two_t).rev() {
                row[i] = row[i].wrapping_add(row[i - 1]) & mk;
            }
        }
        Ok(Self {
            params,
            t,
            parity_mask: RingElement::new(params, parity)?,
            columns,
            max_search_errors: DEFAULT_MAX_SEARCH_ERRORS,
            leaf_budget: DEFAULT_LEAF_BUDGET,
        })
    }

    /// Bounds the unknown-error subset search: at most `max_errors` errors,
    /// and only sizes whose subset count fits in `leaf_budget`.
    pub fn with_search(mut self, max_errors: usize, leaf_budget: u64) -> Self {
        self.max_search_errors = max_errors;
        self.leaf_budget = leaf_budget;
        self
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn max_search_errors(&self) -> usize {
        self.max_search_errors
    }

    /// `(X+1)^{2t}` with coefficients `C(2t,i) mod 2^k`.
    pub fn parity_mask(&self) -> &RingElement {
        &self.parity_mask
    }

    /// Number of message symbols, `N - 2t`.
    pub fn message_len(&self) -> usize {
        self.params.n() - 2 * self.t
    }

    pub fn column(&self, j: usize) -> &[u64] {
        &self.columns[j]
    }
}

/// True iff `2 tau + rho <= 2t`.
pub fn rr_sizing_check(cfg: &RrConfig, tau: usize, rho: usize) -> bool {
    2 * tau + rho <= 2 * cfg.t
}

/// `c = m (X+1)^{2t}`; requires `deg m < N - 2t`.
pub fn rr_encode(m: &RingElement, cfg: &RrConfig) -> Result<RingElement> {
    if m.params() != cfg.params {
        return Err(mismatch(m.params(), cfg.params));
    }
    let max = cfg.message_len();
    if !m.degree_below(max) {
        let len = m.coeffs().iter().rposition(|&c| c != 0).map_or(0, |p| p + 1);
        return Err(Error::MessageTooLong { len, max });
    }
    m.mul(&cfg.parity_mask)
}

fn mismatch(a: RingParams, b: RingParams) -> Error {
    Error::ParamMismatch {
        left_n: a.n(),
        left_k: a.k(),
        right_n: b.n(),
        right_k: b.k(),
    }
}

/// Single-error positions and magnitudes consistent with every syndrome,
/// found through the closed form instead of a scan over positions.
///
/// With at least three syndromes, `D = S_1^2 - 2 S_0 S_2 = S_0^2 j`; with
/// only two, `j S_0 = -S_1`. Either congruence fixes `j` modulo a power of
/// two, and each remaining candidate is checked against all syndromes.
pub fn single_error_candidates(cfg: &RrConfig, syn: &[u64]) -> Vec<(usize, u64)> {
    let k = cfg.params.k();
    let mk = mask(k);
    let n = cfg.params.n();
    let s0 = syn[0] & mk;
    if s0 == 0 {
        return Vec::new();
    }
    let v = s0.trailing_zeros();
    let odd = s0 >> v;
    let (residue, modulus_bits) = if syn.len() >= 3 {
        let d = syn[1]
            .wrapping_mul(syn[1])
            .wrapping_sub(2u64.wrapping_mul(syn[0]).wrapping_mul(syn[2]))
            & mk;
        if 2 * v >= k {
            (0, 0)
        } else {
            if d != 0 && d.trailing_zeros() < 2 * v {
                return Vec::new();
            }
            let oi = inv_odd_unchecked(odd);
            ((d >> (2 * v)).wrapping_mul(oi).wrapping_mul(oi), k - 2 * v)
        }
    } else {
        let ns1 = syn[1].wrapping_neg() & mk;
        if ns1 != 0 && ns1.trailing_zeros() < v {
            return Vec::new();
        }
        ((ns1 >> v).wrapping_mul(inv_odd_unchecked(odd)), k - v)
    };
    let step = if modulus_bits >= usize::BITS { usize::MAX } else { 1usize << modulus_bits };
    let start = (residue & mask(modulus_bits.min(63))) as usize;
    let mut out = Vec::new();
    let mut j = if step == usize::MAX { residue as usize } else { start % step };
    while j < n {
        let e = if j % 2 == 0 { s0 } else { s0.wrapping_neg() & mk };
        let col = &cfg.columns[j];
        if col.iter().zip(syn).all(|(&c, &s)| c.wrapping_mul(e) & mk == s) {
            out.push((j, e));
        }
        match j.checked_add(step) {
            Some(x) => j = x,
            None => break,
        }
    }
    out
}

/// Annihilator of a set of columns together with the projected syndromes:
/// a word is consistent with the chosen support iff `u` is zero after all
/// columns are added.
#[derive(Clone)]
struct Projection {
    rows: Vec<Vec<u64>>,
    u: Vec<u64>,
    k: u32,
}

impl Projection {
    fn new(syn: &[u64], k: u32) -> Self {
        let r = syn.len();
        Self {
            rows: (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect(),
            u: syn.to_vec(),
            k,
        }
    }

    fn project(&self, col: &[u64]) -> Vec<u64> {
        let mk = mask(self.k);
        self.rows
            .iter()
            .map(|r| r.iter().zip(col).fold(0u64, |a, (&x, &y)| a.wrapping_add(x.wrapping_mul(y))) & mk)
            .collect()
    }

    fn pivot(w: &[u64]) -> Option<(usize, u32)> {
        w.iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (i, x.trailing_zeros()))
            .min_by_key(|&(_, d)| d)
    }

    /// Restricts to the annihilator of one more column; `None` when the
    /// column already lies in the span of the chosen ones.
    fn add(&self, col: &[u64]) -> Option<Self> {
        let w = self.project(col);
        let (p, d) = Self::pivot(&w)?;
        let mk = mask(self.k);
        let oinv = inv_odd_unchecked(w[p] >> d);
        let mut rows = Vec::with_capacity(self.rows.len());
        let mut u = Vec::with_capacity(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            if i == p {
                continue;
            }
            let f = (w[i] >> d).wrapping_mul(oinv);
            let nr: Vec<u64> = row
                .iter()
                .zip(&self.rows[p])
                .map(|(&a, &b)| a.wrapping_sub(f.wrapping_mul(b)) & mk)
                .collect();
            let nu = self.u[i].wrapping_sub(f.wrapping_mul(self.u[p])) & mk;
            if nr.iter().any(|&x| x != 0) {
                rows.push(nr);
                u.push(nu);
            }
        }
        if d > 0 {
            let s = 1u64 << (self.k - d);
            let nr: Vec<u64> = self.rows[p].iter().map(|&a| a.wrapping_mul(s) & mk).collect();
            if nr.iter().any(|&x| x != 0) {
                rows.push(nr);
                u.push(self.u[p].wrapping_mul(s) & mk);
            }
        }
        Some(Self { rows, u, k: self.k })
    }

    fn consistent(&self) -> bool {
        self.u.iter().all(|&x| x == 0)
    }

    /// Whether adding `col` would make the projected syndromes vanish.
    fn consistent_with(&self, col: &[u64]) -> bool {
        let w = self.project(col);
        let Some((p, d)) = Self::pivot(&w) else {
            return self.consistent();
        };
        let up = self.u[p];
        if up != 0 && up.trailing_zeros() < d {
            return false;
        }
        let mk = mask(self.k);
        let c = (up >> d).wrapping_mul(inv_odd_unchecked(w[p] >> d));
        w.iter()
            .zip(&self.u)
            .all(|(&wi, &ui)| c.wrapping_mul(wi) & mk == ui)
    }
}

fn binomial_at_most(n: usize, r: usize, cap: u64) -> bool {
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return false;
        }
    }
    true
}

struct Search<'a> {
    cfg: &'a RrConfig,
    erased: Vec<bool>,
    // residue classes mod 2^lbits that must contain an odd-magnitude error
    lbits: u32,
    need: Vec<bool>,
    cover: Vec<u32>,
    uncovered: usize,
    found: Vec<Vec<usize>>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn class(&self, j: usize) -> usize {
        j & ((1usize << self.lbits) - 1)
    }

    fn take(&mut self, j: usize) {
        let c = self.class(j);
        if self.need[c] && self.cover[c] == 0 {
            self.uncovered -= 1;
        }
        self.cover[c] += 1;
    }

    fn untake(&mut self, j: usize) {
        let c = self.class(j);
        self.cover[c] -= 1;
        if self.need[c] && self.cover[c] == 0 {
            self.uncovered += 1;
        }
    }

    /// Whether the uncovered classes can still be reached with `left`
    /// more picks from positions `>= next`.
    fn feasible(&self, left: usize, next: usize) -> bool {
        if self.uncovered > left {
            return false;
        }
        let n = self.cfg.params.n();
        let q = 1usize << self.lbits;
        (0..q).all(|c| !self.need[c] || self.cover[c] > 0 || n - q + c >= next)
    }

    fn run(&mut self, proj: &Projection, start: usize, left: usize) {
        let n = self.cfg.params.n();
        for j in start..n {
            if self.found.len() >= 2 {
                return;
            }
            if self.erased[j] {
                continue;
            }
            self.take(j);
            if self.feasible(left - 1, j + 1) {
                let col = &self.cfg.columns[j];
                if left == 1 {
                    if proj.consistent_with(col) {
                        let mut s = self.chosen.clone();
                        s.push(j);
                        self.found.push(s);
                    }
                } else if let Some(next) = proj.add(col) {
                    // a vanishing projection here would be a smaller
                    // consistent support, already ruled out
                    if !next.consistent() {
                        self.chosen.push(j);
                        self.run(&next, j + 1, left - 1);
                        self.chosen.pop();
                    }
                }
            }
            self.untake(j);
        }
    }
}

/// Decodes `r` with the given erasures: erasure solve, single-error closed
/// form, bounded subset search; every accepted correction is re-verified.
pub fn rr_decode(r: &RingElement, erasures: &ErasureSet, cfg: &RrConfig) -> Result<Decoded> {
    if r.params() != cfg.params {
        return Err(mismatch(r.params(), cfg.params));
    }
    let n = cfg.params.n();
    let k = cfg.params.k();
    let two_t = 2 * cfg.t;
    erasures.check_range(n)?;
    let rho = erasures.len();
    if rho > two_t {
        return Err(Error::DecodeFailure(format!("{rho} erasures exceed 2t = {two_t}")));
    }
    let syn = r.hasse_syndromes(two_t);
    if syn.iter().all(|&s| s == 0) {
        return finish(r, ErrorPattern::empty(), erasures, cfg);
    }
    let eras = erasures.to_vec();

    // projection onto the annihilator of the erasure columns
    let mut base = Projection::new(&syn, k);
    for &j in &eras {
        if let Some(p) = base.add(&cfg.columns[j]) {
            base = p;
        }
    }
    if base.consistent() {
        return solve_support(r, &syn, &eras, &[], erasures, cfg);
    }

    let max_nu = cfg.max_search_errors.min((two_t - rho) / 2);
    if max_nu >= 1 && rho == 0 {
        let cands = single_error_candidates(cfg, &syn);
        match cands.len() {
            0 => {}
            1 => {
                let (j, e) = cands[0];
                return finish(r, ErrorPattern::new([(j, e)])?, erasures, cfg);
            }
            c => return Err(Error::AmbiguousPattern(c)),
        }
    }

    let lbits = usize::BITS - 1 - two_t.leading_zeros();
    let q = 1usize << lbits;
    // parity of odd-magnitude errors per residue class, by Moebius inversion
    let mut need = vec![false; q];
    for (c, slot) in need.iter_mut().enumerate() {
        let mut acc = 0u64;
        for (i, &s) in syn.iter().enumerate().take(q) {
            if i & c == c {
                acc ^= s & 1;
            }
        }
        *slot = acc == 1;
    }
    let mut erased = vec![false; n];
    for &j in &eras {
        erased[j] = true;
    }
    let mut search = Search {
        cfg,
        erased,
        lbits,
        uncovered: need.iter().filter(|&&b| b).count(),
        need,
        cover: vec![0; q],
        found: Vec::new(),
        chosen: Vec::new(),
    };
    for &j in &eras {
        search.take(j);
    }
    let first = if rho == 0 { 2 } else { 1 };
    for nu in first..=max_nu {
        if !binomial_at_most(n - rho, nu, cfg.leaf_budget) {
            return Err(Error::DecodeFailure(format!(
                "no pattern with fewer than {nu} errors; larger searches exceed the budget"
            )));
        }
        search.run(&base, 0, nu);
        match search.found.len() {
            0 => continue,
            1 => {
                let support = search.found.pop().unwrap();
                return solve_support(r, &syn, &eras, &support, erasures, cfg);
            }
            c => return Err(Error::AmbiguousPattern(c)),
        }
    }
    Err(Error::DecodeFailure(format!(
        "no consistent pattern with at most {max_nu} errors and {rho} erasures"
    )))
}

fn solve_support(
    r: &RingElement,
    syn: &[u64],
    eras: &[usize],
    extra: &[usize],
    erasures: &ErasureSet,
    cfg: &RrConfig,
) -> Result<Decoded> {
    let cols: Vec<usize> = eras.iter().chain(extra).copied().collect();
    let a: Vec<Vec<u64>> = (0..syn.len())
        .map(|i| cols.iter().map(|&j| cfg.columns[j][i]).collect())
        .collect();
    match zlin::solve(&a, syn, cfg.params.k()) {
        Solution::Unique(x) => {
            let pattern = ErrorPattern::new(cols.iter().copied().zip(x))?;
            finish(r, pattern, erasures, cfg)
        }
        Solution::Multiple { log2_count, .. } => Err(Error::AmbiguousPattern(
            1usize.checked_shl(log2_count).unwrap_or(usize::MAX),
        )),
        Solution::Inconsistent => Err(Error::Internal(
            "support accepted by the search has no solution".into(),
        )),
    }
}

fn finish(
    r: &RingElement,
    pattern: ErrorPattern,
    erasures: &ErasureSet,
    cfg: &RrConfig,
) -> Result<Decoded> {
    let two_t = 2 * cfg.t;
    let codeword = r.sub(&pattern.to_element(cfg.params)?)?;
    if codeword.hasse_syndromes(two_t).iter().any(|&s| s != 0) {
        return Err(Error::DecodeFailure("corrected word is not a codeword".into()));
    }
    let errors = pattern.positions().iter().filter(|&&j| !erasures.contains(j)).count();
    if 2 * errors + erasures.len() > two_t {
        return Err(Error::DecodeFailure("correction exceeds the 2t budget".into()));
    }
    let message = codeword.exact_div_xplus1_pow(two_t)?;
    Ok(Decoded {
        message,
        codeword,
        pattern,
        errors,
        erasures: erasures.len(),
    })
}
