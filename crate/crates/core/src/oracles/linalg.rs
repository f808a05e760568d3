//! Dense LU with partial pivoting, generic over `f64` and [`Dd`].

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::dd::Dd;
use crate::error::{Error, Result};

/// The arithmetic the oracles need from a real scalar type.
pub trait Scalar:
    Copy
    + Send
    + Sync
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const ZERO: Self;
    const ONE: Self;
    const PI: Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn magnitude(self) -> f64;
    fn ln_abs(self) -> f64;
    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    const PI: Self = std::f64::consts::PI;
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn ln_abs(self) -> f64 {
        self.abs().ln()
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
}

impl Scalar for Dd {
    const ZERO: Self = Dd::ZERO;
    const ONE: Self = Dd::ONE;
    const PI: Self = super::dd::PI;
    fn from_f64(x: f64) -> Self {
        Dd::new(x)
    }
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    fn magnitude(self) -> f64 {
        self.hi.abs()
    }
    fn ln_abs(self) -> f64 {
        Dd::ln_abs(self)
    }
    fn sqrt(self) -> Self {
        Dd::sqrt(self)
    }
    fn sin(self) -> Self {
        Dd::sin(self)
    }
    fn cos(self) -> Self {
        Dd::cos(self)
    }
}

/// Row-major square matrix.
#[derive(Debug, Clone)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![T::ZERO; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.data[i * self.n + j] = x;
    }
}

/// In-place LU factors `PA = LU` (unit lower `L`).
#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
    swaps: usize,
}

/// `log |det|` and the sign of the determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub log_abs: f64,
    pub sign: f64,
}

impl<T: Scalar> Lu<T> {
    pub fn factor(mut a: Matrix<T>) -> Result<Self> {
        let n = a.n;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let mut p = k;
            let mut best = a.get(k, k).magnitude();
            for i in k + 1..n {
                let m = a.get(i, k).magnitude();
                if m > best {
                    best = m;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::Singular("lu"));
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = a.get(k, k);
            let (top, rest) = a.data.split_at_mut((k + 1) * n);
            let row_k = &top[k * n..];
            for row in rest.chunks_exact_mut(n) {
                let l = row[k] / pivot;
                row[k] = l;
                for j in k + 1..n {
                    row[j] = row[j] - l * row_k[j];
                }
            }
        }
        Ok(Lu { lu: a, perm, swaps })
    }

    /// Sum of `ln |u_kk|` and the product of signs, never forming the
    /// determinant itself.
    pub fn log_det(&self) -> LogDet {
        let mut log_abs = 0.0;
        let mut negative = self.swaps % 2 == 1;
        for k in 0..self.lu.n {
            let u = self.lu.get(k, k);
            log_abs += u.ln_abs();
            if u < T::ZERO {
                negative = !negative;
            }
        }
        LogDet {
            log_abs,
            sign: if negative { -1.0 } else { 1.0 },
        }
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.lu.n;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc = acc - self.lu.get(i, j) * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc = acc - self.lu.get(i, j) * x[j];
            }
            x[i] = acc / self.lu.get(i, i);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let m = Matrix::from_fn(2, |i, j| [[1.0, 2.0], [3.0, 4.0]][i][j]);
        let lu = Lu::factor(m).unwrap();
        let d = lu.log_det();
        assert_eq!(d.sign, -1.0);
        assert!((d.log_abs - 2f64.ln()).abs() < 1e-15);
        let x = lu.solve(&[5.0, 6.0]);
        assert!((x[0] + 4.0).abs() < 1e-14 && (x[1] - 4.5).abs() < 1e-14);
    }

    #[test]
    fn singular_is_reported() {
        let m = Matrix::from_fn(2, |i, _| (i + 1) as f64);
        assert!(matches!(Lu::factor(m), Err(Error::Singular(_))));
    }

    #[test]
    fn hilbert_determinant_in_double_double() {
        // det H_n = c_n^4 / c_{2n}, c_n = Π_{k<n} k!
        let n = 8;
        let h = Matrix::from_fn(n, |i, j| Dd::ONE / Dd::new((i + j + 1) as f64));
        let got = Lu::factor(h).unwrap().log_det();
        let ln_c = |m: usize| -> f64 { (1..m).map(|k| (1..=k).map(|j| (j as f64).ln()).sum::<f64>()).sum() };
        let want = 4.0 * ln_c(n) - ln_c(2 * n);
        assert_eq!(got.sign, 1.0);
        assert!((got.log_abs - want).abs() < 1e-12, "{} vs {want}", got.log_abs);
    }

    #[test]
    fn solve_residual_small() {
        let n = 12;
        let a = Matrix::from_fn(n, |i, j| if i == j { 4.0 } else { 1.0 / (1.0 + (i as f64 - j as f64).abs()) });
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = Lu::factor(a.clone()).unwrap().solve(&b);
        for i in 0..n {
            let r: f64 = (0..n).map(|j| a.get(i, j) * x[j]).sum::<f64>() - b[i];
            assert!(r.abs() < 1e-14);
        }
    }
}
