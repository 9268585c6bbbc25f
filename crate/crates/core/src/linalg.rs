//! Small dense symmetric solves for the design problem (n <= 33).

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> SquareMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    /// Symmetric Toeplitz matrix with first row `r[..n]`.
    pub fn toeplitz(r: &[T], n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = r[i.abs_diff(j)];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    /// `self += alpha * u u^T`.
    pub fn rank_one_update(&mut self, alpha: T, u: &[T]) {
        let n = self.n;
        for (row, &ui) in self.data.chunks_mut(n).zip(u) {
            let ai = alpha * ui;
            for (d, &uj) in row.iter_mut().zip(u) {
                *d += ai * uj;
            }
        }
    }

    pub fn add_diagonal(&mut self, v: T) {
        for i in 0..self.n {
            self.data[i * self.n + i] += v;
        }
    }

    /// Lower Cholesky factor, if the matrix is positive definite.
    pub fn cholesky(&self) -> Result<SquareMatrix<T>> {
        let n = self.n;
        let mut l = Self::zeros(n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > T::zero()) || !d.is_finite() {
                return Err(Error::LinearAlgebra("matrix not positive definite"));
            }
            let d = d.sqrt();
            l[(j, j)] = d;
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / d;
            }
        }
        Ok(l)
    }

    /// Solves `self x = b` given that `self` is the lower Cholesky factor.
    pub fn cholesky_solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] = y[i] - self[(i, k)] * y[k];
            }
            y[i] /= self[(i, i)];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] = y[i] - self[(k, i)] * y[k];
            }
            y[i] /= self[(i, i)];
        }
        y
    }

    /// Solves a symmetric positive (semi)definite system, adding a growing
    /// diagonal shift until the factorization succeeds.
    pub fn solve_spd(&self, b: &[T]) -> Result<Vec<T>> {
        let scale = (0..self.n)
            .map(|i| self[(i, i)].abs())
            .fold(T::zero(), T::max)
            .max(T::min_positive_value());
        let mut shift = T::zero();
        for _ in 0..12 {
            let mut m = self.clone();
            m.add_diagonal(shift);
            if let Ok(l) = m.cholesky() {
                return Ok(l.cholesky_solve(b));
            }
            shift = if shift.is_zero() {
                scale * T::epsilon() * T::lit(16.0)
            } else {
                shift * T::lit(100.0)
            };
        }
        Err(Error::LinearAlgebra("could not factor system matrix"))
    }
}

impl<T> std::ops::Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}
