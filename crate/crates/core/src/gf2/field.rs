use super::Poly2;
use crate::error::{Error, Result};

/// Primitive polynomials (bit i = coefficient of X^i), indexed by degree.
const PRIMITIVE: [u64; 33] = [
    0,
    0b11,
    0b111,
    0b1011,
    0b1_0011,
    0b10_0101,
    0b100_0011,
    0b1000_0011,
    0b1_0001_1101,
    0b10_0001_0001,
    0b100_0000_1001,
    0b1000_0000_0101,
    0b1_0000_0101_0011,
    0b10_0000_0001_1011,
    0b100_0100_0100_0011,
    0b1000_0000_0000_0011,
    0b1_0001_0000_0000_1011,
    0x2_0009,
    0x4_0081,
    0x8_0027,
    0x10_0009,
    0x20_0005,
    0x40_0003,
    0x80_0021,
    0x100_0087,
    0x200_0009,
    0x400_0047,
    0x800_0027,
    0x1000_0009,
    0x2000_0005,
    0x4080_0007,
    0x8000_0009,
    0x1_0040_0007,
];

const TABLE_LIMIT: u32 = 16;

/// The built-in primitive polynomial of degree `m`, verified on each call;
/// a search is used if the table entry somehow fails verification.
pub fn primitive_poly(m: u32) -> Result<u64> {
    if !(1..=32).contains(&m) {
        return Err(Error::InvalidParams(format!("extension degree m={m} outside 1..=32")));
    }
    let p = PRIMITIVE[m as usize];
    if is_primitive(m, p) {
        return Ok(p);
    }
    let top = 1u64 << m;
    (1..top)
        .step_by(2)
        .map(|low| top | low)
        .find(|&cand| is_primitive(m, cand))
        .ok_or_else(|| Error::Internal(format!("no primitive polynomial of degree {m}")))
}

fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0;
    let mut b = b;
    let mut sh = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << sh;
        }
        b >>= 1;
        sh += 1;
    }
    acc
}

fn reduce(mut x: u64, m: u32, modulus: u64) -> u64 {
    let mut i = 63 - x.leading_zeros().min(63);
    while x >> m != 0 {
        if (x >> i) & 1 == 1 {
            x ^= modulus << (i - m);
        }
        i -= 1;
    }
    x
}

fn mulmod(a: u64, b: u64, m: u32, modulus: u64) -> u64 {
    reduce(clmul(a, b), m, modulus)
}

fn powmod(mut a: u64, mut e: u64, m: u32, modulus: u64) -> u64 {
    let mut acc = 1;
    while e != 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m, modulus);
        }
        a = mulmod(a, a, m, modulus);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test.
fn is_irreducible(m: u32, modulus: u64) -> bool {
    if modulus >> m != 1 {
        return false;
    }
    let x = if m == 1 { 0 } else { 2 };
    // X^(2^i) mod P by repeated squaring
    let frob = |i: u32| (0..i).fold(x, |acc, _| mulmod(acc, acc, m, modulus));
    if m == 1 {
        return true;
    }
    if frob(m) != x {
        return false;
    }
    let p = Poly2::from_u64(modulus);
    prime_factors(m as u64).into_iter().all(|q| {
        let h = Poly2::from_u64(frob(m / q as u32) ^ x);
        p.gcd(&h) == Poly2::one()
    })
}

fn is_primitive(m: u32, modulus: u64) -> bool {
    if !is_irreducible(m, modulus) {
        return false;
    }
    if m == 1 {
        return true;
    }
    let order = (1u64 << m) - 1;
    prime_factors(order)
        .into_iter()
        .all(|r| powmod(2, order / r, m, modulus) != 1)
}

/// `GF(2^m)` with elements as `m`-bit words in the polynomial basis.
#[derive(Debug, Clone)]
pub struct GF2mField {
    m: u32,
    modulus: u64,
    // log/antilog tables when m is small enough
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl GF2mField {
    pub fn new(m: u32) -> Result<Self> {
        Self::with_modulus(m, primitive_poly(m)?)
    }

    /// Uses the given modulus, which must be a primitive polynomial.
    pub fn with_modulus(m: u32, modulus: u64) -> Result<Self> {
        if !(1..=32).contains(&m) {
            return Err(Error::InvalidParams(format!("extension degree m={m} outside 1..=32")));
        }
        if !is_primitive(m, modulus) {
            return Err(Error::InvalidParams(format!(
                "{:?} is not a primitive polynomial of degree {m}",
                Poly2::from_u64(modulus)
            )));
        }
        let mut f = Self {
            m,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        if m <= TABLE_LIMIT {
            let size = 1usize << m;
            let order = size - 1;
            let mut exp = vec![0u32; 2 * size];
            let mut log = vec![0u32; size];
            let g = if m == 1 { 1 } else { 2 };
            let mut x = 1u64;
            for (i, slot) in exp.iter_mut().enumerate().take(order) {
                *slot = x as u32;
                log[x as usize] = i as u32;
                x = mulmod(x, g, m, modulus);
            }
            for i in order..2 * size {
                exp[i] = exp[i - order];
            }
            f.exp = exp;
            f.log = log;
        }
        Ok(f)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Size of the multiplicative group, `2^m - 1`.
    pub fn order(&self) -> u64 {
        (1u64 << self.m) - 1
    }

    /// The primitive element (the residue of X).
    pub fn generator(&self) -> u64 {
        if self.m == 1 {
            1
        } else {
            2
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.exp.is_empty() {
            mulmod(a, b, self.m, self.modulus)
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize] as u64
        }
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if a == 0 {
            return u64::from(e == 0);
        }
        let e = e % self.order();
        if self.exp.is_empty() {
            powmod(a, e, self.m, self.modulus)
        } else {
            let l = (self.log[a as usize] as u64 * e) % self.order();
            self.exp[l as usize] as u64
        }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.order() - 1))
        }
    }

    /// An element of multiplicative order exactly `n` (`n` must divide `2^m - 1`).
    pub fn element_of_order(&self, n: u64) -> Result<u64> {
        if n == 0 || !self.order().is_multiple_of(n) {
            return Err(Error::InvalidParams(format!(
                "{n} does not divide 2^{} - 1",
                self.m
            )));
        }
        Ok(self.pow(self.generator(), self.order() / n))
    }
}
