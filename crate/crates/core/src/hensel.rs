//! Hensel lifting of the binary factorization of `X^N + 1`, modular
//! inverses over `Z_{2^k}`, primitive idempotents and the lifted BCH state.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gf2::{bch_generator_from, gf2_eea, inv_mod2, BinaryFactorization, Poly2};
use crate::ring::{RingElement, RingParams};
use crate::zpoly::ZPoly;

/// Monic factors of `X^N + 1` over `Z_{2^k}` and their binary shadows.
#[derive(Debug, Clone)]
pub struct LiftedFactorSet {
    pub n: usize,
    pub k: u32,
    pub factors: Vec<ZPoly>,
    pub binary_shadows: Vec<Poly2>,
}

impl LiftedFactorSet {
    pub fn product(&self) -> ZPoly {
        self.factors
            .iter()
            .fold(ZPoly::one(self.k), |acc, f| acc.mul(f))
    }
}

/// Lifts one binary factor `fbar` of `target mod 2` to a monic factor of
/// `target` modulo `2^k`, one bit per step.
pub fn hensel_lift_one(target: &ZPoly, fbar: &Poly2, k: u32) -> Result<ZPoly> {
    let mut f = ZPoly::from_poly2(k, fbar);
    let (qbar0, rbar0) = target.mod2().divrem(fbar);
    if !rbar0.is_zero() {
        return Err(Error::InvalidParams("binary factor does not divide the target".into()));
    }
    let qinv = inv_mod2(&qbar0, fbar).ok_or(Error::NotCoprime)?;
    for i in 1..k {
        let (_, r) = target.divrem_monic(&f)?;
        let r_scaled = r
            .shr_exact(i)
            .ok_or_else(|| Error::Internal(format!("lift residual not divisible by 2^{i}")))?;
        let delta = r_scaled.mod2().mul(&qinv).rem(fbar);
        // the correction lives in degrees below deg f, so f stays monic
        f = f.add(&ZPoly::from_poly2(k, &delta).scale(1u64 << i));
    }
    if !target.divrem_monic(&f)?.1.is_zero() {
        return Err(Error::Internal("lifted factor does not divide the target".into()));
    }
    Ok(f)
}

/// Lifts every factor of `X^N + 1 (mod 2)` against its cofactor.
pub fn hensel_lift_factors(binary_factors: &[Poly2], k: u32) -> Result<LiftedFactorSet> {
    let n = binary_factors
        .iter()
        .map(|f| f.degree().unwrap_or(0))
        .sum::<usize>();
    let target = ZPoly::xn_plus_1(k, n);
    let factors = binary_factors
        .iter()
        .map(|f| hensel_lift_one(&target, f, k))
        .collect::<Result<Vec<_>>>()?;
    let set = LiftedFactorSet {
        n,
        k,
        factors,
        binary_shadows: binary_factors.to_vec(),
    };
    if set.product() != target {
        return Err(Error::Internal("lifted factors do not multiply to X^N+1".into()));
    }
    Ok(set)
}

/// Inverse of `a` modulo the monic `m` over `Z_{2^k}`: a binary inverse by
/// extended Euclid, then one correction bit per step.
pub fn inv_mod_hensel(a: &ZPoly, m: &ZPoly, k: u32) -> Result<ZPoly> {
    let a = a.rem_monic(m)?;
    let mbar = m.mod2();
    let (g, s, _) = gf2_eea(&a.mod2(), &mbar);
    if g != Poly2::one() {
        return Err(Error::NotCoprime);
    }
    let abar_inv = s.rem(&mbar);
    let mut u = ZPoly::from_poly2(k, &abar_inv);
    let one = ZPoly::one(k);
    for t in 1..k {
        let rho = one.sub(&a.mul(&u).rem_monic(m)?);
        let rho = rho
            .shr_exact(t)
            .ok_or_else(|| Error::Internal(format!("inverse residual not divisible by 2^{t}")))?;
        let w = abar_inv.mul(&rho.mod2()).rem(&mbar);
        u = u.add(&ZPoly::from_poly2(k, &w).scale(1u64 << t));
    }
    if a.mul(&u).rem_monic(m)? != one.rem_monic(m)? {
        return Err(Error::Internal("Hensel inverse failed final check".into()));
    }
    Ok(u)
}

/// Primitive idempotents `e_i = M_i u_i`, with the audit data kept.
#[derive(Debug, Clone)]
pub struct IdempotentSet {
    pub e: Vec<RingElement>,
    pub cofactors: Vec<ZPoly>,
    pub inverses: Vec<ZPoly>,
}

pub fn build_idempotents(lf: &LiftedFactorSet) -> Result<IdempotentSet> {
    let params = RingParams::new(lf.n, lf.k)?;
    let target = ZPoly::xn_plus_1(lf.k, lf.n);
    let mut out = IdempotentSet {
        e: Vec::new(),
        cofactors: Vec::new(),
        inverses: Vec::new(),
    };
    for f in &lf.factors {
        let mi = target.exact_div_monic(f)?;
        let ui = inv_mod_hensel(&mi, f, lf.k)?;
        out.e.push(RingElement::from_poly(params, &mi.mul(&ui)));
        out.cofactors.push(mi);
        out.inverses.push(ui);
    }
    Ok(out)
}

/// Parameters and precomputed polynomials of a lifted BCH code `<g~>`.
#[derive(Debug, Clone)]
pub struct LiftedBchState {
    pub n: usize,
    pub k: u32,
    pub delta: usize,
    pub b: usize,
    pub t: usize,
    /// Indices (into `factorization.cosets`) of the factors of `g~`.
    pub coset_index_set: BTreeSet<usize>,
    pub g2: Poly2,
    pub g_tilde: ZPoly,
    pub h_tilde: ZPoly,
    /// Lifted factors indexed like `coset_index_set`.
    pub code_factors: Vec<ZPoly>,
    /// Idempotent generator: `e = 0 mod g~`, `e = 1 mod h~`.
    pub e: RingElement,
    pub factorization: BinaryFactorization,
}

/// Builds the lifted code for odd `N`, designed distance `delta = 2t+1`
/// and window start `b`.
pub fn lift_bch_init(n: usize, k: u32, delta: usize, b: usize) -> Result<LiftedBchState> {
    if n.is_multiple_of(2) || n < 3 {
        return Err(Error::InvalidParams(format!("lifted BCH needs odd N >= 3, got {n}")));
    }
    if delta.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("designed distance {delta} must be odd")));
    }
    let params = RingParams::new(n, k)?;
    let factorization = BinaryFactorization::new(n)?;
    let (g2, set) = bch_generator_from(&factorization, delta, b)?;
    let target = ZPoly::xn_plus_1(k, n);
    let code_factors = set
        .iter()
        .map(|&i| hensel_lift_one(&target, &factorization.factors[i], k))
        .collect::<Result<Vec<_>>>()?;
    let g_tilde = code_factors
        .iter()
        .fold(ZPoly::one(k), |acc, f| acc.mul(f));
    let h_tilde = target.exact_div_monic(&g_tilde)?;
    // 1 - e = h~ * (h~^{-1} mod g~): zero mod h~, one mod g~
    let v = inv_mod_hensel(&h_tilde, &g_tilde, k)?;
    let one_minus_e = RingElement::from_poly(params, &h_tilde.mul(&v));
    let e = RingElement::one(params).sub(&one_minus_e)?;
    Ok(LiftedBchState {
        n,
        k,
        delta,
        b,
        t: (delta - 1) / 2,
        coset_index_set: set,
        g2,
        g_tilde,
        h_tilde,
        code_factors,
        e,
        factorization,
    })
}

impl LiftedBchState {
    pub fn params(&self) -> RingParams {
        self.e.params()
    }

    /// Deterministic little-endian blob: `N, k, delta, b` as u32, then the
    /// length-prefixed coefficients of `g~`, then the `N` coefficients of `e`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for v in [self.n as u32, self.k, self.delta as u32, self.b as u32] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        let g = self.g_tilde.coeffs();
        out.extend_from_slice(&(g.len() as u32).to_le_bytes());
        for &c in g {
            out.extend_from_slice(&c.to_le_bytes());
        }
        for &c in self.e.coeffs() {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out
    }

    /// Parses a blob and checks it against a fresh construction.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::InvalidParams(format!("state blob: {m}"));
        let word = |i: usize| -> Result<u32> {
            bytes
                .get(4 * i..4 * i + 4)
                .map(|s| u32::from_le_bytes(s.try_into().unwrap()))
                .ok_or_else(|| bad("truncated header"))
        };
        let (n, k, delta, b) = (word(0)? as usize, word(1)?, word(2)? as usize, word(3)? as usize);
        let glen = word(4)? as usize;
        let body = &bytes[20..];
        if body.len() != 8 * (glen + n) {
            return Err(bad("length does not match header"));
        }
        let vals: Vec<u64> = body
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let state = lift_bch_init(n, k, delta, b)?;
        if state.g_tilde.coeffs() != &vals[..glen] || state.e.coeffs() != &vals[glen..] {
            return Err(bad("coefficients inconsistent with parameters"));
        }
        Ok(state)
    }
}
