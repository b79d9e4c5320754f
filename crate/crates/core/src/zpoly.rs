//! Dense polynomials over `Z_{2^k}` with explicit degree, used for the
//! lifted factors and generators that live outside the quotient ring.

use crate::error::{Error, Result};
use crate::gf2::Poly2;
use crate::ring::mask;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZPoly {
    k: u32,
    // trimmed: no trailing zero coefficients
    coeffs: Vec<u64>,
}

impl ZPoly {
    pub fn from_coeffs(k: u32, mut coeffs: Vec<u64>) -> Self {
        let m = mask(k);
        coeffs.iter_mut().for_each(|c| *c &= m);
        let mut p = Self { k, coeffs };
        p.trim();
        p
    }

    pub fn zero(k: u32) -> Self {
        Self { k, coeffs: Vec::new() }
    }

    pub fn one(k: u32) -> Self {
        Self::from_coeffs(k, vec![1])
    }

    pub fn monomial(k: u32, exp: usize, value: u64) -> Self {
        let mut c = vec![0; exp + 1];
        c[exp] = value;
        Self::from_coeffs(k, c)
    }

    /// `X^n + 1`.
    pub fn xn_plus_1(k: u32, n: usize) -> Self {
        let mut c = vec![0; n + 1];
        c[0] = 1;
        c[n] = 1;
        Self::from_coeffs(k, c)
    }

    /// Lifts a binary polynomial coefficient-wise (0/1 entries).
    pub fn from_poly2(k: u32, p: &Poly2) -> Self {
        let d = match p.degree() {
            Some(d) => d,
            None => return Self::zero(k),
        };
        Self::from_coeffs(k, (0..=d).map(|i| p.coeff(i) as u64).collect())
    }

    pub fn mod2(&self) -> Poly2 {
        Poly2::from_bits(self.coeffs.iter().map(|&c| c & 1 == 1))
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Coefficients padded (or truncated) to exactly `len` entries.
    pub fn to_padded(&self, len: usize) -> Vec<u64> {
        let mut v = self.coeffs.clone();
        v.resize(len, 0);
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs(
            self.k,
            (0..n).map(|i| self.coeff(i).wrapping_add(other.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs(
            self.k,
            (0..n).map(|i| self.coeff(i).wrapping_sub(other.coeff(i))).collect(),
        )
    }

    pub fn scale(&self, s: u64) -> Self {
        Self::from_coeffs(self.k, self.coeffs.iter().map(|&c| c.wrapping_mul(s)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.k);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out[i..].iter_mut().zip(&other.coeffs) {
                *o = o.wrapping_add(a.wrapping_mul(b));
            }
        }
        Self::from_coeffs(self.k, out)
    }

    /// Division with remainder by a monic divisor.
    pub fn divrem_monic(&self, d: &Self) -> Result<(Self, Self)> {
        if !d.is_monic() {
            return Err(Error::InvalidParams("divisor must be monic".into()));
        }
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(self.k), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd];
            if c == 0 {
                continue;
            }
            q[i] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[i + j] = r[i + j].wrapping_sub(c.wrapping_mul(dc));
            }
        }
        r.truncate(dd);
        Ok((Self::from_coeffs(self.k, q), Self::from_coeffs(self.k, r)))
    }

    pub fn rem_monic(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem_monic(d)?.1)
    }

    /// Quotient by a monic divisor that must divide exactly.
    pub fn exact_div_monic(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem_monic(d)?;
        if !r.is_zero() {
            return Err(Error::NonzeroRemainder);
        }
        Ok(q)
    }

    /// Divides every coefficient by `2^s`; all must be multiples of it.
    pub fn shr_exact(&self, s: u32) -> Option<Self> {
        if s == 0 {
            return Some(self.clone());
        }
        if s >= 64 || self.coeffs.iter().any(|&c| c.trailing_zeros() < s) {
            return None;
        }
        Some(Self::from_coeffs(self.k, self.coeffs.iter().map(|&c| c >> s).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let a = ZPoly::from_coeffs(8, vec![7, 200, 3, 9, 1, 44]);
        let d = ZPoly::from_coeffs(8, vec![3, 5, 1]);
        let (q, r) = a.divrem_monic(&d).unwrap();
        assert!(r.degree().is_none_or(|x| x < 2));
        assert_eq!(q.mul(&d).add(&r), a);
    }

    #[test]
    fn exact_division_detects_remainder() {
        let d = ZPoly::from_coeffs(8, vec![1, 1]);
        let p = d.mul(&ZPoly::from_coeffs(8, vec![4, 0, 9]));
        assert_eq!(p.exact_div_monic(&d).unwrap(), ZPoly::from_coeffs(8, vec![4, 0, 9]));
        assert_eq!(ZPoly::monomial(8, 1, 1).exact_div_monic(&d), Err(Error::NonzeroRemainder));
    }

    #[test]
    fn trimming_and_mod2() {
        let p = ZPoly::from_coeffs(2, vec![1, 3, 4, 8]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.mod2(), Poly2::from_bits([true, true]));
        assert_eq!(ZPoly::from_poly2(2, &p.mod2()), ZPoly::from_coeffs(2, vec![1, 1]));
    }
}
