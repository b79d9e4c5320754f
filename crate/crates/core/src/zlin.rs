//! Linear systems over `Z_{2^k}` by diagonalization with minimum-valuation
//! pivots. Only odd values are ever inverted.

use crate::ring::{inv_odd_unchecked, mask};

/// Outcome of solving `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Inconsistent,
    Unique(Vec<u64>),
    /// Consistent but not unique; carries one particular solution and the
    /// base-2 logarithm of the number of solutions.
    Multiple { particular: Vec<u64>, log2_count: u32 },
}

/// Solves `A x = b` with `A` given row-major (`rows x cols`).
pub fn solve(a: &[Vec<u64>], b: &[u64], k: u32) -> Solution {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mk = mask(k);
    let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| x & mk).collect()).collect();
    let mut rhs: Vec<u64> = b.iter().map(|&x| x & mk).collect();
    // column transform W (cols x cols), x = W y
    let mut w: Vec<Vec<u64>> = (0..cols)
        .map(|i| (0..cols).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut diag = Vec::new();

    for s in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(s) {
            for (j, &x) in row.iter().enumerate().skip(s) {
                if x != 0 {
                    let v = x.trailing_zeros();
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((d, pi, pj)) = best else { break };
        m.swap(s, pi);
        rhs.swap(s, pi);
        for row in m.iter_mut() {
            row.swap(s, pj);
        }
        for row in w.iter_mut() {
            row.swap(s, pj);
        }
        let oinv = inv_odd_unchecked(m[s][s] >> d);
        for i in s + 1..rows {
            let x = m[i][s];
            if x == 0 {
                continue;
            }
            let f = (x >> d).wrapping_mul(oinv);
            for j in s..cols {
                m[i][j] = m[i][j].wrapping_sub(f.wrapping_mul(m[s][j])) & mk;
            }
            rhs[i] = rhs[i].wrapping_sub(f.wrapping_mul(rhs[s])) & mk;
        }
        for j in s + 1..cols {
            let x = m[s][j];
            if x == 0 {
                continue;
            }
            let f = (x >> d).wrapping_mul(oinv);
            for row in m.iter_mut().skip(s) {
                row[j] = row[j].wrapping_sub(f.wrapping_mul(row[s])) & mk;
            }
            for row in w.iter_mut() {
                row[j] = row[j].wrapping_sub(f.wrapping_mul(row[s])) & mk;
            }
        }
        diag.push((d, m[s][s] >> d));
    }

    let rank = diag.len();
    if rhs[rank..].iter().any(|&x| x != 0) {
        return Solution::Inconsistent;
    }
    let mut y = vec![0u64; cols];
    let mut log2_count = (k as usize * (cols - rank)) as u32;
    for (s, &(d, o)) in diag.iter().enumerate() {
        let c = rhs[s];
        if c != 0 && c.trailing_zeros() < d {
            return Solution::Inconsistent;
        }
        y[s] = if d >= 64 { 0 } else { (c >> d).wrapping_mul(inv_odd_unchecked(o)) & mask(k - d) };
        log2_count += d;
    }
    let x: Vec<u64> = (0..cols)
        .map(|i| {
            w[i].iter()
                .zip(&y)
                .fold(0u64, |acc, (&wij, &yj)| acc.wrapping_add(wij.wrapping_mul(yj)))
                & mk
        })
        .collect();
    if log2_count == 0 {
        Solution::Unique(x)
    } else {
        Solution::Multiple {
            particular: x,
            log2_count,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn apply(a: &[Vec<u64>], x: &[u64], k: u32) -> Vec<u64> {
        a.iter()
            .map(|r| r.iter().zip(x).fold(0u64, |s, (&p, &q)| s.wrapping_add(p.wrapping_mul(q))) & mask(k))
            .collect()
    }

    #[test]
    fn small_cases() {
        let a = vec![vec![1, 0], vec![0, 3]];
        assert_eq!(solve(&a, &[5, 6], 8), Solution::Unique(vec![5, 2]));
        let a = vec![vec![2]];
        assert_eq!(solve(&a, &[3], 8), Solution::Inconsistent);
        match solve(&a, &[6], 8) {
            Solution::Multiple { particular, log2_count } => {
                assert_eq!(log2_count, 1);
                assert_eq!(particular[0] * 2 % 256, 6);
            }
            s => panic!("{s:?}"),
        }
        // overdetermined, inconsistent in the extra row
        let a = vec![vec![1], vec![1]];
        assert_eq!(solve(&a, &[1, 2], 8), Solution::Inconsistent);
    }

    fn brute_count(a: &[Vec<u64>], b: &[u64], k: u32) -> usize {
        let cols = a[0].len();
        let q = 1u64 << k;
        let mut count = 0;
        for idx in 0..q.pow(cols as u32) {
            let x: Vec<u64> = (0..cols).map(|c| (idx / q.pow(c as u32)) % q).collect();
            if apply(a, &x, k) == b {
                count += 1;
            }
        }
        count
    }

    proptest! {
        #[test]
        fn agrees_with_enumeration(
            entries in prop::collection::vec(0u64..16, 6),
            b in prop::collection::vec(0u64..16, 3),
        ) {
            let k = 4;
            let a: Vec<Vec<u64>> = entries.chunks(2).map(|c| c.to_vec()).collect();
            let count = brute_count(&a, &b, k);
            match solve(&a, &b, k) {
                Solution::Inconsistent => prop_assert_eq!(count, 0),
                Solution::Unique(x) => {
                    prop_assert_eq!(count, 1);
                    prop_assert_eq!(apply(&a, &x, k), b);
                }
                Solution::Multiple { particular, log2_count } => {
                    prop_assert_eq!(count, 1usize << log2_count);
                    prop_assert_eq!(apply(&a, &particular, k), b);
                }
            }
        }
    }
}
