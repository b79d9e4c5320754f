//! Lifted BCH codes `<g~>` over `Z_{2^k}[X]/(X^N + 1)` for odd `N`.
//!
//! The roots of `g~` are `-alpha~^c` for `c` in the chosen cosets, so the
//! syndromes are `S_h = r(-alpha~^{b+h}) = sum_j r_j (-1)^j alpha~^{(b+h) j}`
//! in the Galois ring. Decoding reads the lowest nonzero 2-adic layer of
//! the syndromes as a binary BCH syndrome, locates that layer's positions,
//! solves for magnitudes on every position found so far and repeats on the
//! remainder.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois_ring::{GaloisRing, GrElem};
use crate::gf2::BinaryBchDecoder;
use crate::hensel::{hensel_lift_one, lift_bch_init, LiftedBchState};
use crate::pattern::{Decoded, ErasureSet, ErrorPattern};
use crate::ring::{RingElement, RingParams};
use crate::zpoly::ZPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MessageDomain {
    /// `c = m g~` with `deg m < N - deg g~`.
    #[default]
    GeneratorSystematic,
    /// `c = m e`; multiplicative, but not injective on all of `R`.
    IdempotentProjector,
}

#[derive(Debug, Clone)]
pub struct BchCodecConfig {
    state: LiftedBchState,
    domain: MessageDomain,
    ring: GaloisRing,
    // alpha~^i for i < N
    alpha_pow: Vec<GrElem>,
    binary: BinaryBchDecoder,
}

impl BchCodecConfig {
    pub fn new(n: usize, k: u32, t: usize, b: usize, domain: MessageDomain) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParams("t must be positive".into()));
        }
        Self::from_state(lift_bch_init(n, k, 2 * t + 1, b)?, domain)
    }

    pub fn from_state(state: LiftedBchState, domain: MessageDomain) -> Result<Self> {
        let fac = &state.factorization;
        let ring = GaloisRing::new(fac.field.clone(), state.k);
        let alpha = ring.lift_root_of_unity(fac.alpha, state.n as u64)?;
        let mut alpha_pow = Vec::with_capacity(state.n);
        let mut x = ring.one();
        for _ in 0..state.n {
            let next = ring.mul(&x, &alpha);
            alpha_pow.push(x);
            x = next;
        }
        let binary = BinaryBchDecoder::from_factorization(fac, state.t, state.b)?;
        Ok(Self {
            state,
            domain,
            ring,
            alpha_pow,
            binary,
        })
    }

    pub fn state(&self) -> &LiftedBchState {
        &self.state
    }

    pub fn params(&self) -> RingParams {
        self.state.params()
    }

    pub fn domain(&self) -> MessageDomain {
        self.domain
    }

    pub fn t(&self) -> usize {
        self.state.t
    }

    pub fn ring(&self) -> &GaloisRing {
        &self.ring
    }

    /// `N - deg g~`.
    pub fn message_len(&self) -> usize {
        self.state.n - self.state.g_tilde.degree().unwrap_or(0)
    }

    /// `S_h` for `h < 2t`.
    pub fn syndromes(&self, r: &RingElement) -> Vec<GrElem> {
        let pattern = ErrorPattern::from_element(r);
        self.pattern_syndromes(&pattern)
    }

    fn pattern_syndromes(&self, p: &ErrorPattern) -> Vec<GrElem> {
        let n = self.state.n;
        let k = self.state.k;
        let mut s = vec![self.ring.zero(); 2 * self.state.t];
        for (j, v) in p.iter() {
            let signed = if j % 2 == 1 { v.wrapping_neg() } else { v } & crate::ring::mask(k);
            for (h, sh) in s.iter_mut().enumerate() {
                let e = ((self.state.b + h) % n) * j % n;
                self.ring.add_scaled(sh, &self.alpha_pow[e], signed);
            }
        }
        s
    }

    /// Syndromes of signed Galois-ring magnitudes placed on `support`.
    fn support_syndromes(&self, support: &[usize], mags: &[GrElem]) -> Vec<GrElem> {
        let n = self.state.n;
        let mut s = vec![self.ring.zero(); 2 * self.state.t];
        for (&j, y) in support.iter().zip(mags) {
            for (h, sh) in s.iter_mut().enumerate() {
                let t = self.ring.mul(y, &self.alpha_pow[((self.state.b + h) % n) * j % n]);
                *sh = self.ring.add(sh, &t);
            }
        }
        s
    }

    /// Solves the Vandermonde block on `positions` for the signed
    /// magnitudes `(-1)^j e_j`.
    fn solve_magnitudes(&self, positions: &[usize], syn: &[GrElem]) -> Result<Vec<GrElem>> {
        let n = self.state.n;
        let a = (0..positions.len())
            .map(|h| {
                positions
                    .iter()
                    .map(|&j| self.alpha_pow[((self.state.b + h) % n) * j % n].clone())
                    .collect()
            })
            .collect();
        self.ring.solve_unit(a, syn[..positions.len()].to_vec())
    }
}

fn mismatch(a: RingParams, b: RingParams) -> Error {
    Error::ParamMismatch {
        left_n: a.n(),
        left_k: a.k(),
        right_n: b.n(),
        right_k: b.k(),
    }
}

/// `c = m g~` as a plain product; requires `deg m < N - deg g~`.
pub fn bch_encode_gen(m: &RingElement, cfg: &BchCodecConfig) -> Result<RingElement> {
    if m.params() != cfg.params() {
        return Err(mismatch(m.params(), cfg.params()));
    }
    let max = cfg.message_len();
    if !m.degree_below(max) {
        let len = m.coeffs().iter().rposition(|&c| c != 0).map_or(0, |p| p + 1);
        return Err(Error::MessageTooLong { len, max });
    }
    Ok(RingElement::from_poly(cfg.params(), &m.to_poly().mul(&cfg.state.g_tilde)))
}

/// `c = m e`.
pub fn bch_encode_idem(m: &RingElement, cfg: &BchCodecConfig) -> Result<RingElement> {
    m.mul(&cfg.state.e)
}

/// Recovers `m` from `c = m e` when `deg m < N - deg g~`: since
/// `e = 1 mod h~`, `c mod h~ = m`.
pub fn bch_idem_section(c: &RingElement, cfg: &BchCodecConfig) -> Result<RingElement> {
    if c.params() != cfg.params() {
        return Err(mismatch(c.params(), cfg.params()));
    }
    Ok(RingElement::from_poly(cfg.params(), &c.to_poly().rem_monic(&cfg.state.h_tilde)?))
}

/// Encodes according to the configured message domain.
pub fn bch_encode(m: &RingElement, cfg: &BchCodecConfig) -> Result<RingElement> {
    match cfg.domain {
        MessageDomain::GeneratorSystematic => bch_encode_gen(m, cfg),
        MessageDomain::IdempotentProjector => bch_encode_idem(m, cfg),
    }
}

/// Layered errors-and-erasures decoding. The returned message is the
/// quotient by `g~` in generator mode and the codeword in projector mode.
pub fn bch_decode(r: &RingElement, erasures: &ErasureSet, cfg: &BchCodecConfig) -> Result<Decoded> {
    if r.params() != cfg.params() {
        return Err(mismatch(r.params(), cfg.params()));
    }
    let ring = &cfg.ring;
    let t = cfg.state.t;
    erasures.check_range(cfg.state.n)?;
    let rho = erasures.len();
    if rho > 2 * t {
        return Err(Error::DecodeFailure(format!("{rho} erasures exceed 2t = {}", 2 * t)));
    }
    let syn = cfg.syndromes(r);

    let mut support: Vec<usize> = erasures.to_vec();
    let mut mags: Vec<GrElem> = if support.is_empty() {
        Vec::new()
    } else {
        cfg.solve_magnitudes(&support, &syn)?
    };
    // each round adds at least one position, so t + 1 rounds suffice
    for _ in 0..=t + 1 {
        let fitted = cfg.support_syndromes(&support, &mags);
        let rest: Vec<GrElem> = syn.iter().zip(&fitted).map(|(a, b)| ring.sub(a, b)).collect();
        let Some(v) = rest.iter().filter_map(|s| ring.valuation(s)).min() else {
            let pattern = signed_pattern(ring, &support, &mags).ok_or_else(|| {
                Error::DecodeFailure("magnitudes fall outside Z_2^k".into())
            })?;
            return finish(r, unsign(&pattern, cfg.state.k)?, erasures, cfg);
        };
        let layer: Vec<u64> = rest.iter().map(|s| ring.residue(&ring.shr(s, v))).collect();
        let (_, values) = cfg
            .binary
            .errata(&layer, &support)
            .map_err(|e| Error::DecodeFailure(format!("binary layer {v}: {e}")))?;
        // positions already in the support may carry any Galois-ring
        // remainder; new ones carry a base-ring error whose layer bit is 1
        let known: BTreeSet<usize> = support.iter().copied().collect();
        let mut fresh = Vec::new();
        for (j, y) in values {
            if known.contains(&j) {
                continue;
            }
            if y != 1 {
                return Err(Error::DecodeFailure(format!(
                    "binary layer {v}: non-binary value at position {j}"
                )));
            }
            fresh.push(j);
        }
        if fresh.is_empty() {
            return Err(Error::DecodeFailure(format!("layer {v} located no new positions")));
        }
        support.extend(fresh);
        support.sort_unstable();
        if 2 * (support.len() - rho) + rho > 2 * t {
            return Err(Error::DecodeFailure("located positions exceed the 2t budget".into()));
        }
        mags = cfg.solve_magnitudes(&support, &syn)?;
    }
    Err(Error::DecodeFailure("layer budget exhausted".into()))
}

// `None` when some magnitude is not a base-ring element
fn signed_pattern(ring: &GaloisRing, support: &[usize], mags: &[GrElem]) -> Option<ErrorPattern> {
    let pairs: Option<Vec<(usize, u64)>> = support
        .iter()
        .zip(mags)
        .map(|(&j, m)| ring.as_constant(m).map(|c| (j, c)))
        .collect();
    ErrorPattern::new(pairs?).ok()
}

fn unsign(p: &ErrorPattern, k: u32) -> Result<ErrorPattern> {
    let mk = crate::ring::mask(k);
    ErrorPattern::new(p.iter().map(|(j, v)| (j, if j % 2 == 1 { v.wrapping_neg() & mk } else { v })))
}

fn finish(r: &RingElement, pattern: ErrorPattern, erasures: &ErasureSet, cfg: &BchCodecConfig) -> Result<Decoded> {
    let codeword = r.sub(&pattern.to_element(cfg.params())?)?;
    if cfg.syndromes(&codeword).iter().any(|s| !cfg.ring.is_zero(s)) {
        return Err(Error::DecodeFailure("corrected word is not a codeword".into()));
    }
    let errors = pattern.positions().iter().filter(|&&j| !erasures.contains(j)).count();
    let message = match cfg.domain {
        MessageDomain::GeneratorSystematic => RingElement::from_poly(
            cfg.params(),
            &codeword.to_poly().exact_div_monic(&cfg.state.g_tilde)?,
        ),
        MessageDomain::IdempotentProjector => codeword.clone(),
    };
    Ok(Decoded {
        message,
        codeword,
        pattern,
        errors,
        erasures: erasures.len(),
    })
}

/// Components of `c` modulo the lifted factors outside the coset index
/// set, i.e. the factors of `h~`, in coset order. These are the nontrivial
/// CRT coordinates of `Re`; each is one for `c = e`.
pub fn bch_message_residues(c: &RingElement, cfg: &BchCodecConfig) -> Result<Vec<ZPoly>> {
    if c.params() != cfg.params() {
        return Err(mismatch(c.params(), cfg.params()));
    }
    if &c.mul(&cfg.state.e)? != c {
        return Err(Error::NotInCode);
    }
    let st = &cfg.state;
    let target = ZPoly::xn_plus_1(st.k, st.n);
    let poly = c.to_poly();
    (0..st.factorization.factors.len())
        .filter(|i| !st.coset_index_set.contains(i))
        .map(|i| {
            let f = hensel_lift_one(&target, &st.factorization.factors[i], st.k)?;
            poly.rem_monic(&f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg15(domain: MessageDomain) -> BchCodecConfig {
        BchCodecConfig::new(15, 8, 2, 1, domain).unwrap()
    }

    fn random_elem(p: RingParams, len: usize, rng: &mut ChaCha8Rng) -> RingElement {
        let c = (0..p.n()).map(|i| if i < len { rng.random() } else { 0 }).collect();
        RingElement::new(p, c).unwrap()
    }

    #[test]
    fn generator_encoding() {
        let c = cfg15(MessageDomain::GeneratorSystematic);
        let p = c.params();
        assert_eq!(c.message_len(), 7);
        assert!(bch_encode_gen(&RingElement::zero(p), &c).unwrap().is_zero());
        let g = bch_encode_gen(&RingElement::one(p), &c).unwrap();
        assert_eq!(g.to_poly(), c.state().g_tilde);
        assert_eq!(g.to_poly().mod2(), crate::gf2::Poly2::from_u64(0b111010001));
        let long = RingElement::monomial(p, 7, 1);
        assert!(matches!(bch_encode_gen(&long, &c), Err(Error::MessageTooLong { .. })));
    }

    #[test]
    fn codewords_have_zero_syndromes() {
        let c = cfg15(MessageDomain::GeneratorSystematic);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let m = random_elem(c.params(), 7, &mut rng);
            let cw = bch_encode_gen(&m, &c).unwrap();
            assert!(c.syndromes(&cw).iter().all(|s| c.ring().is_zero(s)));
            let out = bch_decode(&cw, &ErasureSet::empty(), &c).unwrap();
            assert_eq!(out.message, m);
            assert!(out.pattern.is_empty());
        }
    }

    #[test]
    fn two_layer_example() {
        let c = cfg15(MessageDomain::GeneratorSystematic);
        let p = c.params();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = random_elem(p, 7, &mut rng);
        let cw = bch_encode_gen(&m, &c).unwrap();
        let e = ErrorPattern::new([(4, 7), (11, 12)]).unwrap();
        let r = cw.add(&e.to_element(p).unwrap()).unwrap();
        let out = bch_decode(&r, &ErasureSet::empty(), &c).unwrap();
        assert_eq!(out.pattern, e);
        assert_eq!(out.codeword, cw);
        assert_eq!(out.message, m);
    }

    #[test]
    fn errors_and_erasures() {
        let c = BchCodecConfig::new(31, 16, 3, 1, MessageDomain::GeneratorSystematic).unwrap();
        let p = c.params();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let m = random_elem(p, c.message_len(), &mut rng);
            let cw = bch_encode_gen(&m, &c).unwrap();
            let mut r = cw.clone();
            // two erasures and two unknown errors: 2*2 + 2 = 6 = 2t
            for j in [3, 20] {
                r.coeffs_mut()[j] = rng.random::<u16>() as u64;
            }
            for j in [7, 29] {
                let v = r.coeffs()[j].wrapping_add(rng.random_range(1..65536)) & 0xffff;
                r.coeffs_mut()[j] = v;
            }
            let out = bch_decode(&r, &ErasureSet::new([3, 20]), &c).unwrap();
            assert_eq!(out.codeword, cw);
            assert_eq!(out.message, m);
        }
    }

    #[test]
    fn idempotent_encoding() {
        let c = cfg15(MessageDomain::IdempotentProjector);
        let p = c.params();
        let e = bch_encode_idem(&RingElement::one(p), &c).unwrap();
        assert_eq!(&e, &c.state().e);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let a = random_elem(p, 15, &mut rng);
            let b = random_elem(p, 15, &mut rng);
            let ea = bch_encode_idem(&a, &c).unwrap();
            let eb = bch_encode_idem(&b, &c).unwrap();
            assert_eq!(bch_encode_idem(&a.mul(&b).unwrap(), &c).unwrap(), ea.mul(&eb).unwrap());
            assert_eq!(bch_encode_idem(&ea, &c).unwrap(), ea);
            let out = bch_decode(&ea, &ErasureSet::empty(), &c).unwrap();
            assert_eq!(out.message, ea);
            let short = random_elem(p, c.message_len(), &mut rng);
            let enc = bch_encode_idem(&short, &c).unwrap();
            assert_eq!(bch_idem_section(&enc, &c).unwrap(), short);
        }
    }

    #[test]
    fn residues() {
        let c = cfg15(MessageDomain::IdempotentProjector);
        let p = c.params();
        let zero = bch_message_residues(&RingElement::zero(p), &c).unwrap();
        assert!(zero.iter().all(|z| z.is_zero()));
        let ones = bch_message_residues(&c.state().e, &c).unwrap();
        assert!(ones.iter().all(|z| *z == ZPoly::one(8)));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_elem(p, 15, &mut rng);
        let res = bch_message_residues(&bch_encode_idem(&m, &c).unwrap(), &c).unwrap();
        let direct = bch_message_residues(&m.mul(&c.state().e).unwrap(), &c).unwrap();
        assert_eq!(res, direct);
        let target = ZPoly::xn_plus_1(8, 15);
        let st = c.state();
        let outside: Vec<usize> = (0..st.factorization.factors.len())
            .filter(|i| !st.coset_index_set.contains(i))
            .collect();
        for (r, &i) in res.iter().zip(&outside) {
            let f = hensel_lift_one(&target, &st.factorization.factors[i], 8).unwrap();
            assert_eq!(*r, m.to_poly().rem_monic(&f).unwrap());
        }
        assert_eq!(bch_message_residues(&RingElement::one(p), &c), Err(Error::NotInCode));
    }
}
