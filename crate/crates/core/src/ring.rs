//! Exact arithmetic in `R = Z_{2^k}[X]/(X^N + 1)`.
//!
//! Symbols are stored as `u64` words and every operation is wrapping
//! arithmetic followed by a mask, which is exactly reduction modulo `2^k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zpoly::ZPoly;

/// Bit mask selecting the low `k` bits of a word.
#[inline]
pub fn mask(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Frame length and symbol width of the ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingParams {
    n: usize,
    k: u32,
}

impl RingParams {
    /// `k` is accepted in `1..=64`; the wire format narrows this to
    /// `{8, 16, 32, 64}`.
    pub fn new(n: usize, k: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("frame length N={n} must be >= 2")));
        }
        if !(1..=64).contains(&k) {
            return Err(Error::InvalidParams(format!("symbol width k={k} must be in 1..=64")));
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn mask(&self) -> u64 {
        mask(self.k)
    }

    fn check(&self, other: &RingParams) -> Result<()> {
        if self != other {
            return Err(Error::ParamMismatch {
                left_n: self.n,
                left_k: self.k,
                right_n: other.n,
                right_k: other.k,
            });
        }
        Ok(())
    }
}

/// 2-adic valuation of a symbol; zero has infinite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

/// Number of trailing zero bits of `x` viewed as a `k`-bit word.
pub fn val2(x: u64, k: u32) -> Valuation {
    let x = x & mask(k);
    if x == 0 {
        Valuation::Infinite
    } else {
        Valuation::Finite(x.trailing_zeros())
    }
}

/// Inverse of an odd symbol modulo `2^k` by Newton iteration.
pub fn inv_odd(x: u64, k: u32) -> Result<u64> {
    let x = x & mask(k);
    if x & 1 == 0 {
        return Err(Error::EvenOperand(x));
    }
    Ok(inv_odd_unchecked(x) & mask(k))
}

/// `x` must be odd. Each step doubles the number of correct low bits,
/// starting from 3 (every odd x satisfies x*x = 1 mod 8).
#[inline]
pub(crate) fn inv_odd_unchecked(x: u64) -> u64 {
    let mut y = x;
    for _ in 0..5 {
        y = y.wrapping_mul(2u64.wrapping_sub(x.wrapping_mul(y)));
    }
    y
}

/// An element `u(X) = sum u_j X^j` of the ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingElement {
    params: RingParams,
    coeffs: Vec<u64>,
}

impl RingElement {
    pub fn new(params: RingParams, mut coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != params.n {
            return Err(Error::InvalidParams(format!(
                "expected {} coefficients, got {}",
                params.n,
                coeffs.len()
            )));
        }
        let m = params.mask();
        coeffs.iter_mut().for_each(|c| *c &= m);
        Ok(Self { params, coeffs })
    }

    pub fn zero(params: RingParams) -> Self {
        Self {
            params,
            coeffs: vec![0; params.n],
        }
    }

    pub fn one(params: RingParams) -> Self {
        Self::monomial(params, 0, 1)
    }

    /// `value * X^exp`, with the exponent reduced using `X^N = -1`.
    pub fn monomial(params: RingParams, exp: usize, value: u64) -> Self {
        let mut out = Self::zero(params);
        let n = params.n;
        let e = exp % (2 * n);
        let v = value & params.mask();
        if e < n {
            out.coeffs[e] = v;
        } else {
            out.coeffs[e - n] = v.wrapping_neg() & params.mask();
        }
        out
    }

    /// Reduces an arbitrary-degree polynomial modulo `X^N + 1`.
    pub fn from_poly(params: RingParams, p: &ZPoly) -> Self {
        let mut out = Self::zero(params);
        let n = params.n;
        for (i, &c) in p.coeffs().iter().enumerate() {
            let slot = i % n;
            if (i / n).is_multiple_of(2) {
                out.coeffs[slot] = out.coeffs[slot].wrapping_add(c);
            } else {
                out.coeffs[slot] = out.coeffs[slot].wrapping_sub(c);
            }
        }
        let m = params.mask();
        out.coeffs.iter_mut().for_each(|c| *c &= m);
        out
    }

    pub fn to_poly(&self) -> ZPoly {
        ZPoly::from_coeffs(self.params.k, self.coeffs.clone())
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [u64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// True when every coefficient at index `>= d` is zero.
    pub fn degree_below(&self, d: usize) -> bool {
        self.coeffs.iter().skip(d).all(|&c| c == 0)
    }

    /// Hamming weight (number of nonzero symbols).
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.params.check(&other.params)?;
        let m = self.params.mask();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a.wrapping_add(b) & m)
            .collect();
        Ok(Self {
            params: self.params,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.params.check(&other.params)?;
        let m = self.params.mask();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a.wrapping_sub(b) & m)
            .collect();
        Ok(Self {
            params: self.params,
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        let m = self.params.mask();
        Self {
            params: self.params,
            coeffs: self.coeffs.iter().map(|&a| a.wrapping_neg() & m).collect(),
        }
    }

    pub fn scale(&self, s: u64) -> Self {
        let m = self.params.mask();
        Self {
            params: self.params,
            coeffs: self.coeffs.iter().map(|&a| a.wrapping_mul(s) & m).collect(),
        }
    }

    /// Negacyclic product. Uses Karatsuba above a small threshold; the
    /// result is bit-identical to [`RingElement::mul_schoolbook`].
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.params.check(&other.params)?;
        let full = if self.params.n >= KARATSUBA_THRESHOLD {
            karatsuba(&self.coeffs, &other.coeffs)
        } else {
            schoolbook(&self.coeffs, &other.coeffs)
        };
        Ok(self.fold(full))
    }

    /// Reference quadratic negacyclic product.
    pub fn mul_schoolbook(&self, other: &Self) -> Result<Self> {
        self.params.check(&other.params)?;
        let full = schoolbook(&self.coeffs, &other.coeffs);
        Ok(self.fold(full))
    }

    /// Folds a product of degree `<= 2N - 2` using `X^{N+i} = -X^i`.
    fn fold(&self, full: Vec<u64>) -> Self {
        let n = self.params.n;
        let m = self.params.mask();
        let mut coeffs = full[..n].to_vec();
        for (i, &hi) in full[n..].iter().enumerate() {
            coeffs[i] = coeffs[i].wrapping_sub(hi);
        }
        coeffs.iter_mut().for_each(|c| *c &= m);
        Self {
            params: self.params,
            coeffs,
        }
    }

    /// Hasse-derivative syndromes `S_i = r^{[i]}(-1)` for `i < count`.
    ///
    /// Binomials come from a rolling Pascal row, so no division is used.
    pub fn hasse_syndromes(&self, count: usize) -> Vec<u64> {
        assert!(count <= self.params.n, "syndrome count exceeds N");
        let m = self.params.mask();
        let mut row = vec![0u64; count];
        let mut out = vec![0u64; count];
        if count == 0 {
            return out;
        }
        row[0] = 1;
        for (j, &r) in self.coeffs.iter().enumerate() {
            if r != 0 {
                for (i, (&b, s)) in row.iter().zip(out.iter_mut()).enumerate().take(j + 1) {
                    let term = r.wrapping_mul(b);
                    if (j - i) % 2 == 0 {
                        *s = s.wrapping_add(term);
                    } else {
                        *s = s.wrapping_sub(term);
                    }
                }
            }
            for i in (1..count).rev() {
                row[i] = row[i].wrapping_add(row[i - 1]);
            }
        }
        out.iter_mut().for_each(|s| *s &= m);
        out
    }

    /// Exact quotient by `(X+1)^power`, treating `self` as a polynomial of
    /// degree `< N` (no negacyclic wrap).
    pub fn exact_div_xplus1_pow(&self, power: usize) -> Result<Self> {
        let m = self.params.mask();
        let mut c = self.coeffs.clone();
        for _ in 0..power {
            // synthetic division by (X + 1), i.e. evaluation at the root -1
            let n = c.len();
            let mut q = vec![0u64; n];
            let mut carry = 0u64;
            for i in (1..n).rev() {
                carry = c[i].wrapping_sub(carry) & m;
                q[i - 1] = carry;
            }
            if c[0].wrapping_sub(carry) & m != 0 {
                return Err(Error::NonzeroRemainder);
            }
            c = q;
        }
        Ok(Self {
            params: self.params,
            coeffs: c,
        })
    }
}

const KARATSUBA_THRESHOLD: usize = 64;

fn schoolbook(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o = o.wrapping_add(x.wrapping_mul(y));
        }
    }
    out
}

/// Plain (non-reduced) product of two equal-length vectors, wrapping mod 2^64.
fn karatsuba(a: &[u64], b: &[u64]) -> Vec<u64> {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    if n < 32 {
        return schoolbook(a, b);
    }
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = karatsuba(a0, b0);
    // pad the high halves to equal length
    let hl = n - h;
    let mut a1p = a1.to_vec();
    let mut b1p = b1.to_vec();
    a1p.resize(hl, 0);
    b1p.resize(hl, 0);
    let z2 = karatsuba(&a1p, &b1p);
    let mut sa = a1p.clone();
    let mut sb = b1p.clone();
    for i in 0..h {
        sa[i] = sa[i].wrapping_add(a0[i]);
        sb[i] = sb[i].wrapping_add(b0[i]);
    }
    let mut z1 = karatsuba(&sa, &sb);
    for (i, &v) in z0.iter().enumerate() {
        z1[i] = z1[i].wrapping_sub(v);
    }
    for (i, &v) in z2.iter().enumerate() {
        z1[i] = z1[i].wrapping_sub(v);
    }
    let mut out = vec![0u64; 2 * n - 1];
    for (i, &v) in z0.iter().enumerate() {
        out[i] = out[i].wrapping_add(v);
    }
    for (i, &v) in z1.iter().enumerate() {
        if let Some(o) = out.get_mut(i + h) {
            *o = o.wrapping_add(v);
        }
    }
    for (i, &v) in z2.iter().enumerate() {
        if let Some(o) = out.get_mut(i + 2 * h) {
            *o = o.wrapping_add(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: usize, k: u32) -> RingParams {
        RingParams::new(n, k).unwrap()
    }

    fn el(n: usize, k: u32, c: &[u64]) -> RingElement {
        let mut v = c.to_vec();
        v.resize(n, 0);
        RingElement::new(p(n, k), v).unwrap()
    }

    #[test]
    fn params_reject_degenerate() {
        assert!(RingParams::new(1, 8).is_err());
        assert!(RingParams::new(8, 0).is_err());
        assert!(RingParams::new(8, 65).is_err());
    }

    #[test]
    fn add_wraps() {
        let a = el(4, 8, &[255]);
        let b = el(4, 8, &[1]);
        assert_eq!(a.add(&b).unwrap().coeffs(), &[0, 0, 0, 0]);
        let z = RingElement::zero(p(4, 8));
        assert_eq!(a.add(&z).unwrap(), a);
    }

    #[test]
    fn mismatched_params_rejected() {
        let a = RingElement::zero(p(4, 8));
        let b = RingElement::zero(p(8, 8));
        assert!(matches!(a.add(&b), Err(Error::ParamMismatch { .. })));
        assert!(a.mul(&RingElement::zero(p(4, 16))).is_err());
    }

    #[test]
    fn x_times_x3_is_minus_one() {
        let x = el(4, 8, &[0, 1]);
        let x3 = el(4, 8, &[0, 0, 0, 1]);
        assert_eq!(x.mul(&x3).unwrap().coeffs(), &[255, 0, 0, 0]);
    }

    #[test]
    fn one_plus_x_squared() {
        let a = el(4, 8, &[1, 1]);
        assert_eq!(a.mul(&a).unwrap().coeffs(), &[1, 2, 1, 0]);
        let one = RingElement::one(p(4, 8));
        assert_eq!(a.mul(&one).unwrap(), a);
    }

    #[test]
    fn monomial_products_exhaustive() {
        for n in [2usize, 4, 8] {
            let pr = p(n, 8);
            for i in 0..n {
                for j in 0..n {
                    let got = RingElement::monomial(pr, i, 1)
                        .mul(&RingElement::monomial(pr, j, 1))
                        .unwrap();
                    let mut want = RingElement::zero(pr);
                    let sign_neg = ((i + j) / n) % 2 == 1;
                    want.coeffs_mut()[(i + j) % n] = if sign_neg { 255 } else { 1 };
                    assert_eq!(got, want, "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn hasse_of_x_cubed() {
        let r = el(8, 8, &[0, 0, 0, 1]);
        assert_eq!(r.hasse_syndromes(3), vec![255, 3, 253]);
        assert_eq!(RingElement::zero(p(8, 8)).hasse_syndromes(4), vec![0; 4]);
    }

    #[test]
    fn exact_division_examples() {
        let c = el(8, 8, &[1, 2, 1]);
        assert_eq!(c.exact_div_xplus1_pow(2).unwrap(), RingElement::one(p(8, 8)));
        assert_eq!(c.exact_div_xplus1_pow(0).unwrap(), c);
        // X is not a multiple of X+1
        assert_eq!(el(8, 8, &[0, 1]).exact_div_xplus1_pow(1), Err(Error::NonzeroRemainder));
    }

    #[test]
    fn valuation_and_inverse() {
        assert_eq!(val2(5, 8), Valuation::Finite(0));
        assert_eq!(val2(12, 8), Valuation::Finite(2));
        assert_eq!(val2(0, 8), Valuation::Infinite);
        assert_eq!(val2(256, 8), Valuation::Infinite);
        assert_eq!(inv_odd(1, 8).unwrap(), 1);
        assert_eq!(inv_odd(25, 8).unwrap(), 41);
        assert_eq!(inv_odd(255, 8).unwrap(), 255);
        assert_eq!(inv_odd(4, 8), Err(Error::EvenOperand(4)));
        for k in [1u32, 2, 8, 16, 32, 64] {
            for x in [1u64, 3, 0xdead_beef, u64::MAX] {
                let x = x & mask(k) | 1;
                let y = inv_odd(x, k).unwrap();
                assert_eq!(x.wrapping_mul(y) & mask(k), 1);
            }
        }
    }

    fn arb_elem(n: usize, k: u32) -> impl Strategy<Value = RingElement> {
        prop::collection::vec(any::<u64>(), n).prop_map(move |c| RingElement::new(p(n, k), c).unwrap())
    }

    proptest! {
        #[test]
        fn ring_axioms(
            (a, b, c) in prop::sample::select(vec![2usize, 4, 8, 16, 32, 64])
                .prop_flat_map(|n| (arb_elem(n, 8), arb_elem(n, 8), arb_elem(n, 8)))
        ) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.add(&b).unwrap().sub(&b).unwrap(), a);
        }

        #[test]
        fn karatsuba_matches_schoolbook(a in arb_elem(256, 32), b in arb_elem(256, 32)) {
            prop_assert_eq!(a.mul(&b).unwrap(), a.mul_schoolbook(&b).unwrap());
        }

        #[test]
        fn karatsuba_matches_schoolbook_odd_len(a in arb_elem(129, 64), b in arb_elem(129, 64)) {
            prop_assert_eq!(a.mul(&b).unwrap(), a.mul_schoolbook(&b).unwrap());
        }

        #[test]
        fn hasse_is_linear(a in arb_elem(32, 16), b in arb_elem(32, 16)) {
            let sa = a.hasse_syndromes(8);
            let sb = b.hasse_syndromes(8);
            let sab = a.add(&b).unwrap().hasse_syndromes(8);
            for i in 0..8 {
                prop_assert_eq!(sab[i], sa[i].wrapping_add(sb[i]) & 0xffff);
            }
        }

        #[test]
        fn division_inverts_multiplication(
            m in prop::collection::vec(any::<u64>(), 24),
            pw in 0usize..=8,
        ) {
            let pr = p(32, 8);
            let mut mc = m.clone();
            mc.resize(32, 0);
            let msg = RingElement::new(pr, mc).unwrap();
            let mut f = RingElement::one(pr);
            let xp1 = el(32, 8, &[1, 1]);
            for _ in 0..pw {
                f = f.mul(&xp1).unwrap();
            }
            let c = msg.mul(&f).unwrap();
            prop_assert_eq!(c.exact_div_xplus1_pow(pw).unwrap(), msg);
        }
    }
}
