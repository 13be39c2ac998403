//! Dense square matrices over a [`Field`], used for constant coefficients.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Row-major `m x m` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat<F> {
    m: usize,
    data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(m: usize) -> Self {
        Mat {
            m,
            data: vec![F::zero(); m * m],
        }
    }

    pub fn identity(m: usize) -> Self {
        Self::scalar(m, F::one())
    }

    pub fn scalar(m: usize, c: F) -> Self {
        let mut out = Self::zeros(m);
        for i in 0..m {
            out[(i, i)] = c.clone();
        }
        out
    }

    /// Matrix unit `E_{ij}` (0-based).
    pub fn unit(m: usize, i: usize, j: usize) -> Self {
        let mut out = Self::zeros(m);
        out[(i, j)] = F::one();
        out
    }

    pub fn diag(entries: &[F]) -> Self {
        let mut out = Self::zeros(entries.len());
        for (i, e) in entries.iter().enumerate() {
            out[(i, i)] = e.clone();
        }
        out
    }

    pub fn from_fn(m: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                data.push(f(i, j));
            }
        }
        Mat { m, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let m = rows.len();
        let mut data = Vec::with_capacity(m * m);
        for row in rows {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Mat { m, data })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> Vec<Vec<F>> {
        self.data.chunks(self.m.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.m, |i, j| self[(j, i)].clone())
    }

    pub fn trace(&self) -> F {
        (0..self.m).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat {
            m: self.m,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// `tr(self^t other)`, the Frobenius pairing.
    pub fn frobenius_dot(&self, other: &Self) -> F {
        self.data
            .iter()
            .zip(&other.data)
            .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Max-modulus entry, a cheap norm for residual reporting.
    pub fn max_modulus(&self) -> f64 {
        self.data.iter().map(F::modulus).fold(0.0, f64::max)
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: other.m,
            });
        }
        Ok(())
    }
}

impl<F> Index<(usize, usize)> for Mat<F> {
    type Output = F;

    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.m + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Mat<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.m + j]
    }
}

impl<F: Field> Add for &Mat<F> {
    type Output = Mat<F>;

    fn add(self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!(self.m, rhs.m, "matrix dimension mismatch");
        Mat {
            m: self.m,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<F: Field> Sub for &Mat<F> {
    type Output = Mat<F>;

    fn sub(self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!(self.m, rhs.m, "matrix dimension mismatch");
        Mat {
            m: self.m,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<F: Field> Mul for &Mat<F> {
    type Output = Mat<F>;

    fn mul(self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!(self.m, rhs.m, "matrix dimension mismatch");
        let m = self.m;
        let mut out: Mat<F> = Mat::zeros(m);
        for i in 0..m {
            for k in 0..m {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..m {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                }
            }
        }
        out
    }
}

impl<F: Field> Neg for &Mat<F> {
    type Output = Mat<F>;

    fn neg(self) -> Mat<F> {
        self.map(|a| -a.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for Mat<F> {
            type Output = Mat<F>;

            fn $m(self, rhs: Mat<F>) -> Mat<F> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
