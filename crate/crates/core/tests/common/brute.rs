//! Brute-force solve for the order-2 moment witness of `han05_a1`.
//!
//! Builds `A0(t) Y(2t) - Y(t)` and `Api(t) Y(2t)` up to `t^2` from raw mask
//! sums, treats them as affine maps of the unknown `nu_2`, probes that map at
//! the origin and the unit vectors, and eliminates by hand. Shares nothing
//! with the library solver beyond rational arithmetic and mask access.

#![allow(clippy::needless_range_loop)]

use hermite_core::exact::int;
use hermite_core::{Mask, Rational};
use num_traits::{One, Signed, Zero};

pub type Col = [Rational; 2];

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * int(k as i64))
}

/// Coefficient of `t^s` in `1/2 sum_k (sign)^k k^s A_k t^s / s!`.
fn symbol_coeff(mask: &Mask, s: usize, alternating: bool) -> [[Rational; 2]; 2] {
    let mut out: [[Rational; 2]; 2] = Default::default();
    for (k, a) in mask.iter() {
        let mut w = int(k).pow(s as i32);
        if alternating && k.rem_euclid(2) == 1 {
            w = -w;
        }
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] += &w * a.get(r, c) / (int(2) * factorial(s));
            }
        }
    }
    out
}

/// All six residual coefficients (t^0..t^2, both components) for both
/// conditions, given `nu_0..nu_2`.
pub fn residual(mask: &Mask, nu: &[Col; 3]) -> Vec<Rational> {
    let mut out = Vec::new();
    for alternating in [false, true] {
        for j in 0..=2 {
            for r in 0..2 {
                let mut acc = Rational::zero();
                for s in 0..=j {
                    let a = symbol_coeff(mask, j - s, alternating);
                    let scale = int(2).pow(s as i32);
                    for c in 0..2 {
                        acc += &a[r][c] * &nu[s][c] * &scale;
                    }
                }
                if !alternating {
                    acc -= &nu[j][r];
                }
                out.push(acc);
            }
        }
    }
    out
}

/// Solves `sum_i cols[i] x_i = rhs`; returns `(solution, rank)`.
pub fn eliminate(cols: &[Vec<Rational>], rhs: &[Rational]) -> (Option<Vec<Rational>>, usize) {
    let m = rhs.len();
    let n = cols.len();
    let mut rows: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m)
            .max_by_key(|&i| rows[i][c].abs())
            .filter(|&i| !rows[i][c].is_zero())
        else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v /= &lead;
        }
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..=n {
                    let t = &rows[r][k] * &f;
                    rows[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return (None, r);
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][n].clone();
    }
    (Some(x), r)
}

/// `nu_2` for the strict normalization with sign `-1` at `d = 1`, and the
/// rank of its coefficient system.
pub fn nu2(mask: &Mask) -> (Option<Vec<Rational>>, usize) {
    let nu0: Col = [int(1), int(0)];
    let nu1: Col = [int(0), int(-1)];
    let at = |x: &Col| residual(mask, &[nu0.clone(), nu1.clone(), x.clone()]);
    let base = at(&[int(0), int(0)]);
    let cols: Vec<Vec<Rational>> = [[int(1), int(0)], [int(0), int(1)]]
        .iter()
        .map(|e| at(e).iter().zip(&base).map(|(a, b)| a - b).collect())
        .collect();
    let rhs: Vec<Rational> = base.iter().map(|b| -b).collect();
    eliminate(&cols, &rhs)
}
