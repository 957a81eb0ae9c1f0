//! Dense linear algebra over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rat>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rat::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..cols {
                let v = &f * &rows[r][j];
                rows[i][j] -= v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Canonical basis of the row space (reduced echelon rows).
pub fn row_space(vectors: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut rows = vectors.to_vec();
    rref(&mut rows, cols);
    rows
}

pub fn rank(vectors: &[Vec<Rat>], cols: usize) -> usize {
    row_space(vectors, cols).len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows, one vector per free column.
pub fn nullspace(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut r = rows.to_vec();
    let pivots = rref(&mut r, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[i][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `sum_k coeffs[k] * vectors[k] = target`; `None` if inconsistent.
/// The vectors must be linearly independent for the answer to be unique.
pub fn solve_combination(vectors: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let dim = target.len();
    let k = vectors.len();
    // augmented system with one row per coordinate
    let mut rows: Vec<Vec<Rat>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Rat> = vectors.iter().map(|v| v[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Rat::zero(); k];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = rows[i][k].clone();
    }
    Some(x)
}

/// Reduces `v` against a reduced echelon basis (zeroing its pivot columns).
pub fn reduce(v: &[Rat], echelon: &[Vec<Rat>]) -> Vec<Rat> {
    let mut out = v.to_vec();
    for row in echelon {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else { continue };
        if out[p].is_zero() {
            continue;
        }
        let f = out[p].clone() / &row[p];
        for (o, r) in out.iter_mut().zip(row) {
            *o -= &f * r;
        }
    }
    out
}
