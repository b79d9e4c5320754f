//! Binary polynomials, `GF(2^m)` arithmetic, the cyclotomic factorization of
//! `X^N - 1` and a binary BCH errors-and-erasures decoder.

mod bch;
mod cyclo;
mod field;

pub use bch::{BinaryBchDecoder, BinaryErrorLocator};
pub use cyclo::{
    bch_generator_f2, cyclotomic_cosets, factor_xn_minus1, ord2_mod, BinaryFactorization,
    CyclotomicCoset,
};
pub(crate) use cyclo::bch_generator_from;
pub use field::{primitive_poly, GF2mField};

use std::fmt;

/// Polynomial over `F_2` stored as a little-endian bitset.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    words: Vec<u64>,
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for i in (0..=d).rev().filter(|&i| self.coeff(i)) {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "1")?,
                1 => write!(f, "X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(e: usize) -> Self {
        let mut p = Self {
            words: vec![0; e / 64 + 1],
        };
        p.words[e / 64] = 1 << (e % 64);
        p
    }

    /// Builds from coefficient bits, lowest degree first.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        for (i, b) in bits.into_iter().enumerate() {
            if i % 64 == 0 {
                words.push(0);
            }
            if b {
                *words.last_mut().unwrap() |= 1 << (i % 64);
            }
        }
        let mut p = Self { words };
        p.trim();
        p
    }

    /// Low 64 coefficients packed in a word (bit i = coefficient of X^i).
    pub fn from_u64(w: u64) -> Self {
        let mut p = Self { words: vec![w] };
        p.trim();
        p
    }

    /// Inverse of [`Poly2::from_u64`]; `None` if the degree exceeds 63.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn set_coeff(&mut self, i: usize, v: bool) {
        if self.words.len() <= i / 64 {
            self.words.resize(i / 64 + 1, 0);
        }
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
        self.trim();
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of nonzero coefficients in increasing order.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(wi * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        let mut p = Self { words };
        p.trim();
        p
    }

    fn shl(&self, s: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (ws, bs) = (s / 64, s % 64);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] |= w << bs;
            if bs != 0 {
                words[i + ws + 1] |= w >> (64 - bs);
            }
        }
        let mut p = Self { words };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self::zero();
        if self.is_zero() || other.is_zero() {
            return acc;
        }
        acc.words = vec![0; self.words.len() + other.words.len() + 1];
        for i in self.support() {
            let (ws, bs) = (i / 64, i % 64);
            for (j, &w) in other.words.iter().enumerate() {
                acc.words[j + ws] ^= w << bs;
                if bs != 0 {
                    acc.words[j + ws + 1] ^= w >> (64 - bs);
                }
            }
        }
        acc.trim();
        acc
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        let mut q = Self::zero();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            q.set_coeff(rd - dd, true);
            r = r.add(&d.shl(rd - dd));
        }
        (q, r)
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn gcd(&self, other: &Self) -> Self {
        gf2_eea(self, other).0
    }
}

/// Extended Euclid over `F_2[X]`: returns `(g, s, t)` with `s·a + t·b = g`.
pub fn gf2_eea(a: &Poly2, b: &Poly2) -> (Poly2, Poly2, Poly2) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly2::one(), Poly2::zero());
    let (mut t0, mut t1) = (Poly2::zero(), Poly2::one());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = s0.add(&q.mul(&s1));
        s0 = std::mem::replace(&mut s1, s);
        let t = t0.add(&q.mul(&t1));
        t0 = std::mem::replace(&mut t1, t);
    }
    (r0, s0, t0)
}

/// Inverse of `a` modulo `m` over `F_2`, if they are coprime.
pub fn inv_mod2(a: &Poly2, m: &Poly2) -> Option<Poly2> {
    let (g, s, _) = gf2_eea(&a.rem(m), m);
    if g == Poly2::one() {
        Some(s.rem(m))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(bits: u64) -> Poly2 {
        Poly2::from_u64(bits)
    }

    #[test]
    fn eea_examples() {
        let (g, _, _) = gf2_eea(&p(0b11), &p(0b11));
        assert_eq!(g, p(0b11));
        let (g, s, t) = gf2_eea(&p(0b111), &p(0b11));
        assert_eq!(g, Poly2::one());
        assert_eq!(s.mul(&p(0b111)).add(&t.mul(&p(0b11))), g);
    }

    #[test]
    fn wide_multiplication() {
        let a = Poly2::monomial(100).add(&Poly2::one());
        let sq = a.mul(&a);
        assert_eq!(sq, Poly2::monomial(200).add(&Poly2::one()));
        assert_eq!(sq.divrem(&a), (a.clone(), Poly2::zero()));
        assert_eq!(a.support(), vec![0, 100]);
    }

    proptest! {
        #[test]
        fn eea_identity(a in any::<u128>(), b in any::<u64>()) {
            let a = Poly2::from_bits((0..128).map(|i| (a >> i) & 1 == 1));
            let b = p(b);
            prop_assume!(!a.is_zero() || !b.is_zero());
            let (g, s, t) = gf2_eea(&a, &b);
            prop_assert_eq!(s.mul(&a).add(&t.mul(&b)), g.clone());
            if !g.is_zero() {
                prop_assert!(a.rem(&g).is_zero());
                prop_assert!(b.rem(&g).is_zero());
            }
        }

        #[test]
        fn divrem_identity(a in any::<u128>(), d in 1u64..) {
            let a = Poly2::from_bits((0..128).map(|i| (a >> i) & 1 == 1));
            let d = p(d);
            let (q, r) = a.divrem(&d);
            prop_assert_eq!(q.mul(&d).add(&r), a);
            prop_assert!(r.degree().is_none_or(|x| Some(x) < d.degree()));
        }
    }
}
