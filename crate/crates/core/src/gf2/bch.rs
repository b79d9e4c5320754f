use super::{BinaryFactorization, GF2mField, Poly2};
use crate::error::{Error, Result};

/// Output of binary errata decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryErrorLocator {
    /// Errata locator `prod (1 - alpha^j x)`, coefficients lowest first.
    pub lambda: Vec<u64>,
    /// Positions whose binary error value is 1, sorted.
    pub positions: Vec<usize>,
    /// Number of located positions outside the erasure set.
    pub errors: usize,
}

/// Binary BCH decoder for designed distance `2t + 1` and window start `b`.
/// Position `j` corresponds to `alpha^j`; locator roots sit at `alpha^{-j}`.
#[derive(Debug, Clone)]
pub struct BinaryBchDecoder {
    n: usize,
    t: usize,
    b: usize,
    field: GF2mField,
    alpha_pow: Vec<u64>,
}

impl BinaryBchDecoder {
    pub fn new(n: usize, t: usize, b: usize) -> Result<Self> {
        Self::from_factorization(&BinaryFactorization::new(n)?, t, b)
    }

    pub fn from_factorization(fac: &BinaryFactorization, t: usize, b: usize) -> Result<Self> {
        if t == 0 || 2 * t >= fac.n {
            return Err(Error::InvalidParams(format!("t={t} invalid for N={}", fac.n)));
        }
        let mut alpha_pow = Vec::with_capacity(fac.n);
        let mut x = 1u64;
        for _ in 0..fac.n {
            alpha_pow.push(x);
            x = fac.field.mul(x, fac.alpha);
        }
        Ok(Self {
            n: fac.n,
            t,
            b: b % fac.n,
            field: fac.field.clone(),
            alpha_pow,
        })
    }

    pub fn field(&self) -> &GF2mField {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    fn apow(&self, e: usize) -> u64 {
        self.alpha_pow[e % self.n]
    }

    /// `S_h = word(alpha^{b+h})` for `h < 2t`.
    pub fn syndromes(&self, word: &Poly2) -> Vec<u64> {
        let mut s = vec![0u64; 2 * self.t];
        for j in word.support() {
            if j >= self.n {
                continue;
            }
            for (h, sh) in s.iter_mut().enumerate() {
                *sh ^= self.apow(((self.b + h) * j) % self.n);
            }
        }
        s
    }

    pub fn decode(&self, word: &Poly2, erasures: &[usize]) -> Result<BinaryErrorLocator> {
        self.decode_syndromes(&self.syndromes(word), erasures)
    }

    /// Errata locator and `GF(2^m)` values from precomputed syndromes:
    /// erasure locator, Berlekamp-Massey, Chien search, Forney values.
    /// Erased positions may carry any value; located errors are nonzero.
    pub fn errata(&self, syn: &[u64], erasures: &[usize]) -> Result<(Vec<u64>, Vec<(usize, u64)>)> {
        let f = &self.field;
        let two_t = 2 * self.t;
        if syn.len() != two_t {
            return Err(Error::InvalidParams(format!(
                "expected {two_t} syndromes, got {}",
                syn.len()
            )));
        }
        let mut eras: Vec<usize> = erasures.to_vec();
        eras.sort_unstable();
        eras.dedup();
        let rho = eras.len();
        if rho > two_t {
            return Err(Error::DecodeFailure(format!("{rho} erasures exceed budget {two_t}")));
        }
        if eras.iter().any(|&j| j >= self.n) {
            return Err(Error::InvalidParams("erasure index out of range".into()));
        }
        if syn.iter().all(|&s| s == 0) {
            return Ok((vec![1], Vec::new()));
        }

        // erasure locator Gamma(x) = prod (1 - X_i x)
        let mut gamma = vec![1u64];
        for &j in &eras {
            let xj = self.apow(j);
            let mut next = vec![0u64; gamma.len() + 1];
            for (i, &g) in gamma.iter().enumerate() {
                next[i] ^= g;
                next[i + 1] ^= f.mul(g, xj);
            }
            gamma = next;
        }

        let mut lambda = gamma.clone();
        let mut bpoly = gamma;
        let mut l = rho;
        for r in (rho + 1)..=two_t {
            let mut delta = 0u64;
            for (i, &li) in lambda.iter().enumerate() {
                if i < r {
                    delta ^= f.mul(li, syn[r - 1 - i]);
                }
            }
            if delta == 0 {
                bpoly.insert(0, 0);
                continue;
            }
            let mut t = lambda.clone();
            if t.len() < bpoly.len() + 1 {
                t.resize(bpoly.len() + 1, 0);
            }
            for (i, &bi) in bpoly.iter().enumerate() {
                t[i + 1] ^= f.mul(delta, bi);
            }
            if 2 * l < r + rho {
                let dinv = f.inv(delta).expect("nonzero discrepancy");
                bpoly = lambda.iter().map(|&c| f.mul(c, dinv)).collect();
                l = r + rho - l;
            } else {
                bpoly.insert(0, 0);
            }
            lambda = t;
        }
        while lambda.len() > 1 && *lambda.last().unwrap() == 0 {
            lambda.pop();
        }
        let deg = lambda.len() - 1;
        if deg != l {
            return Err(Error::DecodeFailure(format!(
                "locator degree {deg} disagrees with register length {l}"
            )));
        }
        let errors = deg - rho;
        if 2 * errors + rho > two_t {
            return Err(Error::DecodeFailure(format!(
                "{errors} errors with {rho} erasures exceed budget"
            )));
        }

        let eval = |p: &[u64], x: u64| p.iter().rev().fold(0u64, |acc, &c| f.mul(acc, x) ^ c);
        let roots: Vec<usize> = (0..self.n)
            .filter(|&j| eval(&lambda, self.apow(self.n - j)) == 0)
            .collect();
        if roots.len() != deg {
            return Err(Error::DecodeFailure(format!(
                "Chien search found {} roots for a degree-{deg} locator",
                roots.len()
            )));
        }

        // Omega = S * Lambda mod x^{2t}; formal derivative keeps odd terms
        let mut omega = vec![0u64; two_t];
        for (i, &li) in lambda.iter().enumerate() {
            for (o, &s) in omega[i..].iter_mut().zip(syn) {
                *o ^= f.mul(li, s);
            }
        }
        let dlambda: Vec<u64> = (1..lambda.len())
            .map(|i| if i % 2 == 1 { lambda[i] } else { 0 })
            .collect();

        let mut values = Vec::with_capacity(roots.len());
        for &j in &roots {
            let xinv = self.apow(self.n - j);
            let num = f.mul(self.apow((self.n + 1 - self.b) * j % self.n), eval(&omega, xinv));
            let den = eval(&dlambda, xinv);
            if den == 0 {
                return Err(Error::DecodeFailure("repeated locator root".into()));
            }
            let y = f.mul(num, f.inv(den).unwrap());
            if y == 0 && eras.binary_search(&j).is_err() {
                return Err(Error::DecodeFailure(format!("zero error value at position {j}")));
            }
            values.push((j, y));
        }

        // the located errata must reproduce every syndrome
        let mut check = vec![0u64; two_t];
        for &(j, y) in &values {
            for (h, c) in check.iter_mut().enumerate() {
                *c ^= f.mul(y, self.apow((self.b + h) * j % self.n));
            }
        }
        if check != syn {
            return Err(Error::DecodeFailure("located pattern fails syndrome check".into()));
        }
        Ok((lambda, values))
    }

    /// Errata decoding from precomputed syndromes for binary words: every
    /// error value must be 1, erased positions may also hold 0.
    pub fn decode_syndromes(&self, syn: &[u64], erasures: &[usize]) -> Result<BinaryErrorLocator> {
        let (lambda, values) = self.errata(syn, erasures)?;
        let mut positions = Vec::new();
        for (j, y) in values {
            match y {
                1 => positions.push(j),
                0 => {}
                _ => {
                    return Err(Error::DecodeFailure(format!(
                        "non-binary error value at position {j}"
                    )))
                }
            }
        }
        let mut eras = erasures.to_vec();
        eras.sort_unstable();
        let errors = positions.iter().filter(|j| eras.binary_search(j).is_err()).count();
        Ok(BinaryErrorLocator {
            lambda,
            positions,
            errors,
        })
    }
}
