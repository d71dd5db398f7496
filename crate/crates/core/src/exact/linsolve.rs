//! Exact Gauss-Jordan elimination.

use num_traits::{One, Zero};

use super::matrix::RatMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Solutions of `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    /// Particular solution with every free variable set to zero, or `None`
    /// if the system is inconsistent.
    pub particular: Option<Vec<Rational>>,
    /// Basis of the null space of `A`, one vector per free variable.
    pub nullspace: Vec<Vec<Rational>>,
    pub rank: usize,
}

impl SolutionSet {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }

    pub fn is_unique(&self) -> bool {
        self.particular.is_some() && self.nullspace.is_empty()
    }
}

/// Solves `A x = b` exactly. The first nonzero entry in each column is the pivot.
pub fn solve_linear(a: &RatMatrix, b: &[Rational]) -> Result<SolutionSet> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with right-hand side of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].recip();
        for e in m[rank].iter_mut().skip(c) {
            *e *= &inv;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (e, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *e -= &f * p;
                }
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows {
            break;
        }
    }

    let consistent = m[rank..].iter().all(|row| row[cols].is_zero());
    let particular = consistent.then(|| {
        let mut x = vec![Rational::zero(); cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = m[r][cols].clone();
        }
        x
    });

    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m[r][f].clone();
            }
            v
        })
        .collect();

    Ok(SolutionSet {
        particular,
        nullspace,
        rank,
    })
}
