//! Dense linear algebra over the coefficient field.

use crate::field::{Coeff, Field};
use num_traits::Zero;

/// Outcome of solving `sum_j x_j cols[j] = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum Solve {
    Solution(Vec<Coeff>),
    /// A functional `y` with `y · cols[j] = 0` for all `j` and `y · b ≠ 0`.
    Inconsistent(Vec<Coeff>),
}

pub fn dot(field: Field, a: &[Coeff], b: &[Coeff]) -> Coeff {
    a.iter().zip(b).fold(field.zero(), |acc, (x, y)| field.add(&acc, &field.mul(x, y)))
}

pub fn solve(field: Field, rows: usize, cols: &[Vec<Coeff>], b: &[Coeff]) -> Solve {
    let n = cols.len();
    // Row-major augmented matrix [A | b | I].
    let width = n + 1 + rows;
    let mut m: Vec<Vec<Coeff>> = (0..rows)
        .map(|i| {
            let mut r: Vec<Coeff> = cols.iter().map(|c| c[i].clone()).collect();
            r.push(b[i].clone());
            r.extend((0..rows).map(|k| if k == i { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = field.inv(&m[row][col]);
        for x in m[row].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in 0..width {
                    let v = field.sub(&m[r][k], &field.mul(&f, &m[row][k]));
                    m[r][k] = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    for r in row..rows {
        if !m[r][n].is_zero() {
            return Solve::Inconsistent(m[r][n + 1..].to_vec());
        }
    }
    let mut x = vec![field.zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][n].clone();
    }
    Solve::Solution(x)
}

/// A basis of `{ x : sum_j x_j cols[j] = 0 }`, one vector per free column.
pub fn nullspace(field: Field, rows: usize, cols: &[Vec<Coeff>]) -> Vec<Vec<Coeff>> {
    let n = cols.len();
    let mut m: Vec<Vec<Coeff>> = (0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = field.inv(&m[row][col]);
        for x in m[row].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in 0..n {
                    let v = field.sub(&m[r][k], &field.mul(&f, &m[row][k]));
                    m[r][k] = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![field.zero(); n];
            x[free] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = field.neg(&m[r][free]);
            }
            x
        })
        .collect()
}

/// Rank of a list of vectors of length `rows`.
pub fn rank(field: Field, rows: usize, vecs: &[Vec<Coeff>]) -> usize {
    vecs.len() - nullspace(field, rows, vecs).len()
}
