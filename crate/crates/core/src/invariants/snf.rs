//! Smith normal form over arbitrary-precision integers, and GF(2) rank.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Nonzero invariant factors `d₁ | d₂ | …` of an integer matrix.
pub fn invariant_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs(&a, t, t..rows, t..cols) else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    row_sub(&mut a, i, t, &q, t);
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for r in t..rows {
                        if !a[r][t].is_zero() {
                            let d = &q * &a[r][t];
                            a[r][j] -= d;
                        }
                    }
                }
            }
            let col_rest = min_abs(&a, t, t + 1..rows, t..t + 1);
            let row_rest = min_abs(&a, t, t..t + 1, t + 1..cols);
            let smaller = [col_rest, row_rest]
                .into_iter()
                .flatten()
                .min_by_key(|&(i, j)| a[i][j].abs());
            match smaller {
                None => break,
                Some((i, j)) => {
                    a.swap(t, i);
                    swap_cols(&mut a, t, j);
                }
            }
        }
        diag.push(a[t][t].abs());
    }
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

fn min_abs(
    a: &[Vec<BigInt>],
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn swap_cols(a: &mut [Vec<BigInt>], x: usize, y: usize) {
    if x != y {
        for r in a.iter_mut() {
            r.swap(x, y);
        }
    }
}

/// `row_i -= q · row_t`, touching columns `from..`.
fn row_sub(a: &mut [Vec<BigInt>], i: usize, t: usize, q: &BigInt, from: usize) {
    let (ri, rt) = if i < t {
        let (lo, hi) = a.split_at_mut(t);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(i);
        (&mut hi[0], &lo[t])
    };
    for j in from..rt.len() {
        if !rt[j].is_zero() {
            ri[j] -= q * &rt[j];
        }
    }
}

/// Rank over the integers (number of invariant factors).
pub fn rank(m: &[Vec<i64>]) -> usize {
    invariant_factors(m).len()
}

/// Rank over GF(2) by Gaussian elimination on packed rows.
pub fn rank_gf2(m: &[Vec<i64>]) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let words = cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = m
        .iter()
        .map(|r| {
            let mut w = vec![0u64; words];
            for (j, &x) in r.iter().enumerate() {
                if x.rem_euclid(2) == 1 {
                    w[j / 64] |= 1 << (j % 64);
                }
            }
            w
        })
        .collect();
    let mut rank = 0;
    for j in 0..cols {
        let (word, bit) = (j / 64, 1u64 << (j % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][word] & bit != 0) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r[word] & bit != 0 {
                for (x, y) in r.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}
