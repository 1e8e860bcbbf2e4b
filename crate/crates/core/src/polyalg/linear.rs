use std::fmt;

use num_traits::Zero;

use crate::error::PolyError;
use crate::linalg;
use crate::scalar::{Coeff, Field, Rational};

/// Square matrix acting on the fiber (or base) variables.
#[derive(Clone, PartialEq)]
pub struct LinearMap<R = Rational> {
    dim: usize,
    rows: Vec<Vec<R>>,
}

impl<R: Coeff> LinearMap<R> {
    pub fn identity(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { R::one() } else { R::zero() }).collect())
            .collect();
        LinearMap { dim, rows }
    }

    pub fn zero(dim: usize) -> Self {
        LinearMap { dim, rows: vec![vec![R::zero(); dim]; dim] }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self, PolyError> {
        let dim = rows.len();
        for r in &rows {
            if r.len() != dim {
                return Err(PolyError::DimensionMismatch { left: dim, right: r.len() });
            }
        }
        Ok(LinearMap { dim, rows })
    }

    /// Canonical symplectic matrix `[[0, I], [−I, 0]]` for variables
    /// ordered `(x_1..x_n, y_1..y_n)`.
    pub fn canonical_symplectic(n: usize) -> Self {
        let mut m = Self::zero(2 * n);
        for i in 0..n {
            m.rows[i][n + i] = R::one();
            m.rows[n + i][i] = -R::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> R {
        self.rows[i][j].clone()
    }

    pub fn entry(&self, i: usize, j: usize) -> &R {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.rows[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<R>] {
        &self.rows
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(j, i)).collect()).collect();
        LinearMap { dim: self.dim, rows }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "linear map dimension mismatch");
        let d = self.dim;
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..d).fold(R::zero(), |acc, k| acc + self.rows[i][k].clone() * other.rows[k][j].clone())
                    })
                    .collect()
            })
            .collect();
        LinearMap { dim: d, rows }
    }

    pub fn add(&self, other: &Self) -> Self {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect())
            .collect();
        LinearMap { dim: self.dim, rows }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-R::one()))
    }

    pub fn scale(&self, c: &R) -> Self {
        let rows = self.rows.iter().map(|r| r.iter().map(|x| x.clone() * c.clone()).collect()).collect();
        LinearMap { dim: self.dim, rows }
    }

    pub fn apply(&self, v: &[R]) -> Vec<R> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).fold(R::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }

    pub fn map<S: Coeff>(&self, f: impl Fn(&R) -> S) -> LinearMap<S> {
        LinearMap { dim: self.dim, rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }

    pub fn trace(&self) -> R {
        (0..self.dim).fold(R::zero(), |acc, i| acc + self.rows[i][i].clone())
    }

    /// `gᵀ J g − J` for the canonical symplectic `J`; panics on odd dimension.
    pub fn symplectic_defect_matrix(&self) -> Self {
        assert!(self.dim.is_multiple_of(2), "symplectic check needs even dimension");
        let j = Self::canonical_symplectic(self.dim / 2);
        self.transpose().mul(&j).mul(self).sub(&j)
    }
}

impl<R: Field> LinearMap<R> {
    pub fn inverse(&self) -> Result<Self, PolyError> {
        linalg::inverse(&self.rows).map(|rows| LinearMap { dim: self.dim, rows }).ok_or(PolyError::SingularMap)
    }

    pub fn determinant(&self) -> R {
        linalg::determinant(&self.rows)
    }

    /// Largest absolute entry of `gᵀ J g − J`.
    pub fn symplectic_defect(&self) -> f64 {
        self.symplectic_defect_matrix()
            .rows
            .iter()
            .flatten()
            .map(|x| x.magnitude())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.rows.iter().flatten().map(|x| x.magnitude()).fold(0.0, f64::max)
    }
}

impl LinearMap<Rational> {
    pub fn is_symplectic(&self) -> bool {
        self.dim.is_multiple_of(2) && self.symplectic_defect_matrix().rows.iter().flatten().all(|x| x.is_zero())
    }

    pub fn to_f64(&self) -> LinearMap<f64> {
        self.map(|x| x.to_f64())
    }
}

impl LinearMap<f64> {
    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.dim, self.dim, |i, j| self.rows[i][j])
    }

    pub fn from_nalgebra(m: &nalgebra::DMatrix<f64>) -> Self {
        let dim = m.nrows();
        LinearMap { dim, rows: (0..dim).map(|i| (0..dim).map(|j| m[(i, j)]).collect()).collect() }
    }
}

impl<R: Coeff + fmt::Debug> fmt::Debug for LinearMap<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter()).finish()
    }
}

impl<R: Coeff> std::ops::Mul for LinearMap<R> {
    type Output = LinearMap<R>;
    fn mul(self, rhs: Self) -> Self {
        LinearMap::mul(&self, &rhs)
    }
}
