//! Small dense square complex matrices.
//!
//! Row-major storage. Used for 2/4/8-dimensional gates, for the chain-level
//! conditional operators, and for the data-register unitaries produced by
//! program verification (up to 2^12 on a side in practice far less).

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Amp, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T: Scalar> {
    dim: usize,
    data: Vec<Amp<T>>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a square.
    pub fn from_rows(entries: Vec<Amp<T>>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim * dim != entries.len() {
            return Err(Error::UnsupportedDimension(entries.len()));
        }
        Ok(Self { dim, data: entries })
    }

    /// Row-major real entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count must be dim²");
        Self {
            dim,
            data: entries
                .iter()
                .map(|&x| Complex::new(T::lit(x), T::zero()))
                .collect(),
        }
    }

    pub fn diagonal(diag: &[Amp<T>]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Amp<T>] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Amp<T>] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                dim: self.dim,
                targets: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; `self` occupies the most-significant index bits.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (a, b) = (self.dim, rhs.dim);
        let n = a * b;
        let mut out = Self::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let x = self[(i, j)];
                if x.is_zero() {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * n + j * b + l] = x * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Amp<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a - b)
    }

    fn zip(&self, rhs: &Self, f: impl Fn(Amp<T>, Amp<T>) -> Amp<T>) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                dim: self.dim,
                targets: rhs.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// `‖self − rhs‖_F`; panics on dimension mismatch.
    pub fn distance(&self, rhs: &Self) -> T {
        self.sub(rhs)
            .expect("distance between matrices of equal dimension")
            .frobenius_norm()
    }

    /// Largest elementwise modulus of `self − rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        self.data
            .iter()
            .zip(&rhs.data)
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm()))
    }

    /// `min_λ ‖self − λ·rhs‖_F` over unit phases λ, with the minimizing λ.
    pub fn phase_distance(&self, rhs: &Self) -> Result<(T, Amp<T>)> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                dim: self.dim,
                targets: rhs.dim,
            });
        }
        // ⟨rhs, self⟩ = tr(rhs† self); the best λ aligns rhs with self.
        let overlap = rhs
            .data
            .iter()
            .zip(&self.data)
            .fold(Complex::zero(), |acc: Amp<T>, (b, a)| acc + b.conj() * a);
        let mag = overlap.norm();
        let lambda = if mag > T::zero() {
            overlap / mag
        } else {
            Complex::one()
        };
        let residual = self
            .data
            .iter()
            .zip(&rhs.data)
            .fold(T::zero(), |acc, (a, b)| acc + (*a - lambda * b).norm_sqr())
            .sqrt();
        Ok((residual, lambda))
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        match self.dagger().mul(self) {
            Ok(p) => p.max_abs_diff(&Self::identity(self.dim)) <= tol,
            Err(_) => false,
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Amp<T>]) -> Vec<Amp<T>> {
        assert_eq!(v.len(), self.dim, "vector length must equal matrix dimension");
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Converts to another scalar precision.
    pub fn cast<U: Scalar>(&self) -> Matrix<U> {
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| {
                    Complex::new(
                        U::lit(z.re.to_f64().unwrap_or(f64::NAN)),
                        U::lit(z.im.to_f64().unwrap_or(f64::NAN)),
                    )
                })
                .collect(),
        }
    }
}

impl<T: Scalar> Index<(usize, usize)> for Matrix<T> {
    type Output = Amp<T>;

    fn index(&self, (r, c): (usize, usize)) -> &Amp<T> {
        &self.data[r * self.dim + c]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Amp<T> {
        &mut self.data[r * self.dim + c]
    }
}
