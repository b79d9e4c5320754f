//! The Galois ring `GR(2^k, m) = Z_{2^k}[y]/(P(y))`, with `P` the binary
//! primitive polynomial of the matching `GF(2^m)` read as a monic
//! polynomial over `Z_{2^k}`.

use crate::error::{Error, Result};
use crate::gf2::GF2mField;
use crate::ring::mask;

/// Elements are coefficient vectors of length `m` over `Z_{2^k}`.
pub type GrElem = Vec<u64>;

#[derive(Debug, Clone)]
pub struct GaloisRing {
    k: u32,
    m: usize,
    // low m coefficients of P (the leading 1 is implicit)
    modulus_low: Vec<u64>,
    field: GF2mField,
}

impl GaloisRing {
    pub fn new(field: GF2mField, k: u32) -> Self {
        let m = field.m() as usize;
        let modulus_low = (0..m).map(|i| (field.modulus() >> i) & 1).collect();
        Self {
            k,
            m,
            modulus_low,
            field,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> &GF2mField {
        &self.field
    }

    pub fn zero(&self) -> GrElem {
        vec![0; self.m]
    }

    pub fn one(&self) -> GrElem {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> GrElem {
        let mut v = self.zero();
        v[0] = c & mask(self.k);
        v
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// `Some(c)` when `a` lies in the base ring `Z_{2^k}`.
    pub fn as_constant(&self, a: &[u64]) -> Option<u64> {
        a[1..].iter().all(|&c| c == 0).then_some(a[0])
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> GrElem {
        let mk = mask(self.k);
        a.iter().zip(b).map(|(&x, &y)| x.wrapping_add(y) & mk).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> GrElem {
        let mk = mask(self.k);
        a.iter().zip(b).map(|(&x, &y)| x.wrapping_sub(y) & mk).collect()
    }

    pub fn neg(&self, a: &[u64]) -> GrElem {
        let mk = mask(self.k);
        a.iter().map(|&x| x.wrapping_neg() & mk).collect()
    }

    /// `acc += s * a` for a base-ring scalar `s`.
    pub fn add_scaled(&self, acc: &mut [u64], a: &[u64], s: u64) {
        let mk = mask(self.k);
        for (o, &x) in acc.iter_mut().zip(a) {
            *o = o.wrapping_add(x.wrapping_mul(s)) & mk;
        }
    }

    pub fn scale(&self, a: &[u64], s: u64) -> GrElem {
        let mk = mask(self.k);
        a.iter().map(|&x| x.wrapping_mul(s) & mk).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> GrElem {
        let m = self.m;
        let mut full = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (o, &y) in full[i..].iter_mut().zip(b) {
                *o = o.wrapping_add(x.wrapping_mul(y));
            }
        }
        // y^m = -sum P_i y^i
        for i in (m..2 * m - 1).rev() {
            let c = full[i];
            if c == 0 {
                continue;
            }
            for (j, &p) in self.modulus_low.iter().enumerate() {
                if p != 0 {
                    full[i - m + j] = full[i - m + j].wrapping_sub(c);
                }
            }
        }
        full.truncate(m);
        let mk = mask(self.k);
        full.iter_mut().for_each(|c| *c &= mk);
        full
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> GrElem {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Residue in `GF(2^m)` (bit i = coefficient i mod 2).
    pub fn residue(&self, a: &[u64]) -> u64 {
        a.iter().enumerate().fold(0, |acc, (i, &c)| acc | ((c & 1) << i))
    }

    /// The 0/1 lift of a field element.
    pub fn lift_residue(&self, x: u64) -> GrElem {
        (0..self.m).map(|i| (x >> i) & 1).collect()
    }

    /// Minimum 2-adic valuation across coefficients; `None` for zero.
    pub fn valuation(&self, a: &[u64]) -> Option<u32> {
        a.iter().filter(|&&c| c != 0).map(|c| c.trailing_zeros()).min()
    }

    /// Divides by `2^v`; every coefficient must be a multiple.
    pub fn shr(&self, a: &[u64], v: u32) -> GrElem {
        if v == 0 {
            return a.to_vec();
        }
        debug_assert!(a.iter().all(|&c| c == 0 || c.trailing_zeros() >= v));
        a.iter().map(|&c| if v >= 64 { 0 } else { c >> v }).collect()
    }

    pub fn is_unit(&self, a: &[u64]) -> bool {
        self.residue(a) != 0
    }

    /// Inverse of a unit: field inverse of the residue, then Newton steps.
    pub fn inv(&self, a: &[u64]) -> Result<GrElem> {
        let r = self.residue(a);
        let ri = self
            .field
            .inv(r)
            .ok_or_else(|| Error::InvalidParams("element is not a unit".into()))?;
        let mut y = self.lift_residue(ri);
        let two = self.constant(2);
        let mut bits = 1u32;
        while bits < self.k {
            let ay = self.mul(a, &y);
            y = self.mul(&y, &self.sub(&two, &ay));
            bits *= 2;
        }
        Ok(y)
    }

    /// Lifts a root of `X^n - 1` (n odd, `root^n = 1` in the field) to the
    /// unique root of `X^n - 1` in the ring with the same residue.
    pub fn lift_root_of_unity(&self, root: u64, n: u64) -> Result<GrElem> {
        if self.field.pow(root, n) != 1 || n.is_multiple_of(2) {
            return Err(Error::InvalidParams("not an odd-order root of unity".into()));
        }
        let mut z = self.lift_residue(root);
        let mut bits = 1u32;
        while bits < self.k {
            // z <- z - (z^n - 1) / (n z^{n-1}) = z - (z^n - 1) * z / (n z^n)
            let zn = self.pow(&z, n);
            let f = self.sub(&zn, &self.one());
            let denom = self.inv(&self.scale(&zn, n))?;
            let step = self.mul(&self.mul(&f, &z), &denom);
            z = self.sub(&z, &step);
            bits *= 2;
        }
        if self.pow(&z, n) != self.one() {
            return Err(Error::Internal("Newton lift of root of unity did not converge".into()));
        }
        Ok(z)
    }

    /// Solves `A x = y` over the ring where `A` is square with a unit
    /// determinant. A pivot column without a unit entry means the
    /// determinant is even, which is reported as an internal error.
    pub fn solve_unit(&self, mut a: Vec<Vec<GrElem>>, mut y: Vec<GrElem>) -> Result<Vec<GrElem>> {
        let n = y.len();
        for col in 0..n {
            let p = (col..n)
                .find(|&r| self.is_unit(&a[r][col]))
                .ok_or_else(|| Error::Internal("Vandermonde determinant is not a unit".into()))?;
            a.swap(col, p);
            y.swap(col, p);
            let pinv = self.inv(&a[col][col])?;
            for c in col..n {
                a[col][c] = self.mul(&a[col][c], &pinv);
            }
            y[col] = self.mul(&y[col], &pinv);
            for r in 0..n {
                if r == col || self.is_zero(&a[r][col]) {
                    continue;
                }
                let f = a[r][col].clone();
                for c in col..n {
                    let t = self.mul(&f, &a[col][c]);
                    a[r][c] = self.sub(&a[r][c], &t);
                }
                let t = self.mul(&f, &y[col]);
                y[r] = self.sub(&y[r], &t);
            }
        }
        Ok(y)
    }
}
