//! Dense Gaussian elimination over `F`. When every entry lies in the subfield
//! `B` all intermediate values stay in `B`, so the same routines serve both
//! `B`-linear algebra on coordinate vectors and `F`-linear systems.

use crate::gf::{FieldCtx, FieldElem};

pub type Matrix = Vec<Vec<FieldElem>>;

/// Reduces `rows` to reduced row echelon form in place, drops zero rows and
/// returns the pivot column of each remaining row.
pub fn rref(ctx: &FieldCtx, rows: &mut Matrix) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = ctx.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c];
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                *x = ctx.sub(*x, ctx.mul(factor, p));
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(ctx: &FieldCtx, rows: &[Vec<FieldElem>]) -> usize {
    let mut m = rows.to_vec();
    rref(ctx, &mut m).len()
}

/// Solution set of `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solutions {
    Inconsistent,
    /// `particular + span(kernel)`.
    Affine {
        particular: Vec<FieldElem>,
        kernel: Matrix,
    },
}

impl Solutions {
    /// Number of solutions, `|F|^dim` for a consistent system.
    pub fn count(&self, ctx: &FieldCtx) -> u64 {
        match self {
            Solutions::Inconsistent => 0,
            Solutions::Affine { kernel, .. } => ctx.order().pow(kernel.len() as u32),
        }
    }
}

pub fn solve(ctx: &FieldCtx, a: &[Vec<FieldElem>], ncols: usize, b: &[FieldElem]) -> Solutions {
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(ctx, &mut aug);
    if pivots.last() == Some(&ncols) {
        return Solutions::Inconsistent;
    }
    let mut particular = vec![FieldElem::ZERO; ncols];
    for (row, &pc) in aug.iter().zip(&pivots) {
        particular[pc] = row[ncols];
    }
    let kernel = (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![FieldElem::ZERO; ncols];
            v[free] = FieldElem::ONE;
            for (row, &pc) in aug.iter().zip(&pivots) {
                v[pc] = ctx.neg(row[free]);
            }
            v
        })
        .collect();
    Solutions::Affine { particular, kernel }
}

/// Inverse of a square matrix, or `None` when singular.
pub fn invert(ctx: &FieldCtx, m: &[Vec<FieldElem>]) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    FieldElem::ONE
                } else {
                    FieldElem::ZERO
                }
            }));
            r
        })
        .collect();
    let pivots = rref(ctx, &mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(ctx: &FieldCtx, m: &[Vec<FieldElem>], v: &[FieldElem]) -> Vec<FieldElem> {
    m.iter()
        .map(|row| ctx.sum(row.iter().zip(v).map(|(&a, &b)| ctx.mul(a, b))))
        .collect()
}
