//! Gaussian elimination over any [`Field`].
//!
//! Over the rationals every decision is exact; for `f64` pivots below a
//! relative threshold count as zero.

use crate::scalar::Field;

/// Result of solving `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution<R> {
    /// Exactly one solution.
    Unique(Vec<R>),
    /// Solvable with a kernel of the given dimension; carries the solution
    /// with free variables set to zero.
    Underdetermined { particular: Vec<R>, kernel_dim: usize },
    /// No solution.
    Inconsistent,
}

fn scale_of<R: Field>(rows: &[Vec<R>]) -> f64 {
    if R::EXACT {
        return 1.0;
    }
    rows.iter().flatten().map(|x| x.magnitude()).fold(0.0, f64::max)
}

/// Reduces `rows` to row echelon form in place; returns pivot columns.
fn echelon<R: Field>(rows: &mut [Vec<R>], ncols: usize, scale: f64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        // Partial pivoting for floats; exact fields take the first nonzero.
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in rows.iter().enumerate().skip(r) {
            if !row[c].is_negligible(scale) {
                if R::EXACT {
                    best = Some((i, 0.0));
                    break;
                }
                let m = row[c].magnitude();
                if best.is_none_or(|(_, bm)| m > bm) {
                    best = Some((i, m));
                }
            }
        }
        let Some((p, _)) = best else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        let pivot_row: Vec<R> = rows[r].iter().map(|x| x.clone() / pivot.clone()).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_negligible(scale) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = x.clone() - factor.clone() * y.clone();
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<R: Field>(rows: &[Vec<R>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let scale = scale_of(rows);
    let mut m = rows.to_vec();
    echelon(&mut m, ncols, scale).len()
}

/// Rank of the matrix whose columns are `cols`.
pub fn column_rank<R: Field>(cols: &[Vec<R>]) -> usize {
    // row rank of the transpose equals column rank
    rank(cols)
}

pub fn solve<R: Field>(a: &[Vec<R>], b: &[R]) -> Solution<R> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<R>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let scale = scale_of(&aug);
    let pivots = echelon(&mut aug, ncols + 1, scale);
    if pivots.last() == Some(&ncols) {
        return Solution::Inconsistent;
    }
    let mut x = vec![R::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][ncols].clone();
    }
    if pivots.len() == ncols {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined { particular: x, kernel_dim: ncols - pivots.len() }
    }
}

pub fn determinant<R: Field>(rows: &[Vec<R>]) -> R {
    let n = rows.len();
    let scale = scale_of(rows);
    let mut m = rows.to_vec();
    let mut det = R::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_negligible(scale)) else {
            return R::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det = det * pivot.clone();
        for i in c + 1..n {
            if m[i][c].is_negligible(scale) {
                continue;
            }
            let f = m[i][c].clone() / pivot.clone();
            for j in c..n {
                let v = m[c][j].clone();
                m[i][j] = m[i][j].clone() - f.clone() * v;
            }
        }
    }
    det
}

pub fn inverse<R: Field>(rows: &[Vec<R>]) -> Option<Vec<Vec<R>>> {
    let n = rows.len();
    let mut aug: Vec<Vec<R>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..n).map(|j| if i == j { R::one() } else { R::zero() }));
            v
        })
        .collect();
    let scale = scale_of(rows);
    let pivots = echelon(&mut aug, n, scale);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
