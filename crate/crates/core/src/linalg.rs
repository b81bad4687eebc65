//! Dense Gaussian elimination over a [`Field`]. Matrices are row-major
//! `Vec<Vec<Elem>>`; they stay small (at most a few dozen rows) everywhere
//! this crate uses them.

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

pub type Matrix = Vec<Vec<Elem>>;

/// Reduces `m` in place to reduced row echelon form and returns the pivot columns.
pub fn row_reduce(field: &Field, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(found) = (row..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, found);
        let inv = field.inv(m[row][col]).expect("pivot is nonzero");
        for x in m[row].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = m[row].clone();
        for (r, target) in m.iter_mut().enumerate() {
            let factor = target[col];
            if r == row || factor == 0 {
                continue;
            }
            for (x, &p) in target[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = field.sub(*x, field.mul(factor, p));
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(field: &Field, m: &Matrix) -> usize {
    let mut work = m.clone();
    row_reduce(field, &mut work).len()
}

pub fn is_nonsingular(field: &Field, m: &Matrix) -> bool {
    m.iter().all(|row| row.len() == m.len()) && rank(field, m) == m.len()
}

pub fn inverse(field: &Field, m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Elem::from(i == j)));
            r
        })
        .collect();
    let pivots = row_reduce(field, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mul(field: &Field, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let inner = b.len();
    if a.iter().any(|row| row.len() != inner) {
        return Err(Error::Dimension("matrix product shapes disagree".into()));
    }
    let cols = b.first().map_or(0, Vec::len);
    Ok(a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| {
                    row.iter()
                        .zip(b)
                        .fold(0, |acc, (&x, brow)| field.mul_add(acc, x, brow[c]))
                })
                .collect()
        })
        .collect())
}
