use std::collections::BTreeSet;

use super::{GF2mField, Poly2};
use crate::error::{Error, Result};

/// An orbit of doubling modulo N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicCoset {
    pub representative: usize,
    /// Sorted members.
    pub members: Vec<usize>,
}

fn require_odd(n: usize) -> Result<()> {
    if n.is_multiple_of(2) || n == 0 {
        return Err(Error::InvalidParams(format!("N={n} must be odd")));
    }
    Ok(())
}

/// Partition of `0..N` into doubling orbits, ordered by smallest member.
pub fn cyclotomic_cosets(n: usize) -> Result<Vec<CyclotomicCoset>> {
    require_odd(n)?;
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut members = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            members.push(x);
            x = (2 * x) % n;
        }
        members.sort_unstable();
        out.push(CyclotomicCoset {
            representative: s,
            members,
        });
    }
    Ok(out)
}

/// Multiplicative order of 2 modulo odd `n >= 3`.
pub fn ord2_mod(n: usize) -> Result<u32> {
    require_odd(n)?;
    if n < 3 {
        return Err(Error::InvalidParams("ord_N(2) needs N >= 3".into()));
    }
    let mut x = 2 % n;
    let mut m = 1;
    while x != 1 {
        x = (2 * x) % n;
        m += 1;
    }
    Ok(m)
}

/// `X^N - 1 = prod f_i` over `F_2` together with the field data used to
/// build it. Factor `i` is the minimal polynomial of `alpha^{rep_i}`.
#[derive(Debug, Clone)]
pub struct BinaryFactorization {
    pub n: usize,
    pub field: GF2mField,
    /// Primitive N-th root of unity in `field`.
    pub alpha: u64,
    pub cosets: Vec<CyclotomicCoset>,
    pub factors: Vec<Poly2>,
}

impl BinaryFactorization {
    pub fn new(n: usize) -> Result<Self> {
        require_odd(n)?;
        let m = if n == 1 { 1 } else { ord2_mod(n)? };
        let field = GF2mField::new(m)?;
        let alpha = field.element_of_order(n as u64)?;
        let cosets = cyclotomic_cosets(n)?;
        let mut factors = Vec::with_capacity(cosets.len());
        for c in &cosets {
            factors.push(min_poly(&field, alpha, &c.members)?);
        }
        let prod = factors.iter().fold(Poly2::one(), |acc, f| acc.mul(f));
        if prod != Poly2::monomial(n).add(&Poly2::one()) {
            return Err(Error::Internal(format!(
                "factors of X^{n}+1 do not multiply back"
            )));
        }
        Ok(Self {
            n,
            field,
            alpha,
            cosets,
            factors,
        })
    }

    /// Index of the coset containing exponent `e`.
    pub fn coset_of(&self, e: usize) -> usize {
        let e = e % self.n;
        self.cosets
            .iter()
            .position(|c| c.members.binary_search(&e).is_ok())
            .expect("cosets partition 0..N")
    }
}

/// `prod_{c in members} (X - alpha^c)`, checked to have binary coefficients.
fn min_poly(field: &GF2mField, alpha: u64, members: &[usize]) -> Result<Poly2> {
    // coefficients over GF(2^m), lowest first
    let mut poly = vec![1u64];
    for &c in members {
        let root = field.pow(alpha, c as u64);
        let mut next = vec![0u64; poly.len() + 1];
        for (i, &a) in poly.iter().enumerate() {
            next[i + 1] ^= a;
            next[i] ^= field.mul(a, root);
        }
        poly = next;
    }
    if poly.iter().any(|&c| c > 1) {
        return Err(Error::Internal(
            "minimal polynomial has coefficients outside F_2".into(),
        ));
    }
    Ok(Poly2::from_bits(poly.iter().map(|&c| c == 1)))
}

/// Binary factors of `X^N + 1`, one per cyclotomic coset.
pub fn factor_xn_minus1(n: usize) -> Result<Vec<Poly2>> {
    Ok(BinaryFactorization::new(n)?.factors)
}

/// Binary BCH generator for the root window `b..b+delta-2` (mod N) and the
/// indices of the cosets that meet the window.
pub fn bch_generator_f2(n: usize, delta: usize, b: usize) -> Result<(Poly2, BTreeSet<usize>)> {
    let fac = BinaryFactorization::new(n)?;
    bch_generator_from(&fac, delta, b)
}

pub(crate) fn bch_generator_from(
    fac: &BinaryFactorization,
    delta: usize,
    b: usize,
) -> Result<(Poly2, BTreeSet<usize>)> {
    if delta < 3 {
        return Err(Error::InvalidParams(format!("designed distance {delta} < 3")));
    }
    if delta > fac.n {
        return Err(Error::InvalidParams(format!(
            "designed distance {delta} too large for N={}",
            fac.n
        )));
    }
    let set: BTreeSet<usize> = (0..delta - 1).map(|h| fac.coset_of(b + h)).collect();
    let g = set
        .iter()
        .fold(Poly2::one(), |acc, &i| acc.mul(&fac.factors[i]));
    Ok((g, set))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn members(n: usize) -> Vec<Vec<usize>> {
        cyclotomic_cosets(n).unwrap().into_iter().map(|c| c.members).collect()
    }

    #[test]
    fn coset_examples() {
        assert_eq!(members(3), vec![vec![0], vec![1, 2]]);
        assert_eq!(
            members(15),
            vec![vec![0], vec![1, 2, 4, 8], vec![3, 6, 9, 12], vec![5, 10], vec![7, 11, 13, 14]]
        );
        assert!(cyclotomic_cosets(16).is_err());
        for n in [7usize, 21, 63, 65, 1025] {
            let m = ord2_mod(n).unwrap() as usize;
            for c in members(n) {
                assert_eq!(m % c.len(), 0);
            }
        }
    }

    #[test]
    fn orders() {
        assert_eq!(ord2_mod(3).unwrap(), 2);
        assert_eq!(ord2_mod(1025).unwrap(), 20);
        assert_eq!(ord2_mod(2049).unwrap(), 22);
        assert_eq!(ord2_mod(4097).unwrap(), 24);
        assert_eq!(ord2_mod(8193).unwrap(), 26);
    }

    #[test]
    fn factorizations() {
        assert_eq!(
            factor_xn_minus1(3).unwrap(),
            vec![Poly2::from_u64(0b11), Poly2::from_u64(0b111)]
        );
        let f15 = factor_xn_minus1(15).unwrap();
        let degs: Vec<_> = f15.iter().map(|f| f.degree().unwrap()).collect();
        assert_eq!(degs, vec![1, 4, 4, 2, 4]);
        for n in [7usize, 9, 15, 17, 21, 63, 127] {
            let fs = factor_xn_minus1(n).unwrap();
            for (i, a) in fs.iter().enumerate() {
                for b in &fs[i + 1..] {
                    assert_eq!(a.gcd(b), Poly2::one());
                }
            }
        }
    }

    #[test]
    fn classical_generators() {
        let (g, set) = bch_generator_f2(15, 5, 1).unwrap();
        assert_eq!(g, Poly2::from_u64(0b1_1101_0001));
        assert_eq!(set.len(), 2);
        let (g, _) = bch_generator_f2(15, 3, 1).unwrap();
        assert_eq!(g, Poly2::from_u64(0b1_0011));
        assert!(bch_generator_f2(15, 16, 1).is_err());
        for (n, t) in [(17usize, 2usize), (63, 3), (1025, 8)] {
            let m = ord2_mod(n).unwrap() as usize;
            let (g, _) = bch_generator_f2(n, 2 * t + 1, 1).unwrap();
            assert!(g.degree().unwrap() <= 2 * t * m);
        }
    }

    #[test]
    fn generator_minimum_distance_n15() {
        // brute force over all 2^7 messages of the (15,7) code
        let (g, _) = bch_generator_f2(15, 5, 1).unwrap();
        let min_w = (1u64..128)
            .map(|m| Poly2::from_u64(m).mul(&g).weight())
            .min()
            .unwrap();
        assert!(min_w >= 5);
    }
}
