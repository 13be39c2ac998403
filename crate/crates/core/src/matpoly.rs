//! Matrix polynomials.
//!
//! [`MatPoly`] stores an `m x m` matrix entry-wise, each entry a [`Poly`].
//! [`MonicMatPoly`] stores the coefficient list `P_1..P_n` of a monic matrix
//! polynomial. The same list describes both `z^n + P_1 z^{n-1} + ... + P_n`
//! and `1 + P_1 z^{-1} + ... + P_n z^{-n}`; the two are related by
//! multiplication with `z^n`, so conversion between conventions is free.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::poly::{Degree, Poly};
use crate::scalar::Field;

/// Cofactor expansion is used up to this size, fraction-free elimination above.
pub const COFACTOR_MAX_DIM: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatPoly<F> {
    m: usize,
    entries: Vec<Poly<F>>,
}

impl<F: Field> MatPoly<F> {
    pub fn zeros(m: usize) -> Self {
        MatPoly {
            m,
            entries: vec![Poly::zero(); m * m],
        }
    }

    pub fn identity(m: usize) -> Self {
        Self::scalar(m, Poly::one())
    }

    pub fn scalar(m: usize, p: Poly<F>) -> Self {
        let mut out = Self::zeros(m);
        for i in 0..m {
            out.entries[i * m + i] = p.clone();
        }
        out
    }

    pub fn diag(entries: &[Poly<F>]) -> Self {
        let m = entries.len();
        let mut out = Self::zeros(m);
        for (i, e) in entries.iter().enumerate() {
            out.entries[i * m + i] = e.clone();
        }
        out
    }

    pub fn from_fn(m: usize, f: impl Fn(usize, usize) -> Poly<F>) -> Self {
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                entries.push(f(i, j));
            }
        }
        MatPoly { m, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Poly<F>>>) -> Result<Self> {
        let m = rows.len();
        let mut entries = Vec::with_capacity(m * m);
        for row in rows {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(MatPoly { m, entries })
    }

    /// Constant matrix viewed as a degree-0 matrix polynomial.
    pub fn from_constant(a: &Mat<F>) -> Self {
        Self::from_fn(a.dim(), |i, j| Poly::constant(a[(i, j)].clone()))
    }

    /// `sum_k coeffs[k] z^k`.
    pub fn from_coeff_matrices(m: usize, coeffs: &[Mat<F>]) -> Result<Self> {
        for c in coeffs {
            if c.dim() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: c.dim(),
                });
            }
        }
        Ok(Self::from_fn(m, |i, j| {
            Poly::new(coeffs.iter().map(|c| c[(i, j)].clone()).collect())
        }))
    }

    /// Coefficient matrices in ascending powers of `z`, up to the degree.
    pub fn coeff_matrices(&self) -> Vec<Mat<F>> {
        let len = self.degree().finite().map_or(0, |d| d + 1);
        (0..len)
            .map(|k| Mat::from_fn(self.m, |i, j| self.get(i, j).coeff(k)))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<F> {
        &self.entries[i * self.m + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly<F>) {
        self.entries[i * self.m + j] = p;
    }

    pub fn entries(&self) -> &[Poly<F>] {
        &self.entries
    }

    /// Maximum entry degree.
    pub fn degree(&self) -> Degree {
        self.entries
            .iter()
            .map(Poly::degree)
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.m).all(|i| (0..self.m).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> MatPoly<G> {
        MatPoly {
            m: self.m,
            entries: self.entries.iter().map(|p| p.map(&f)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.m, |i, j| self.get(j, i).clone())
    }

    pub fn eval(&self, z: &F) -> Mat<F> {
        Mat::from_fn(self.m, |i, j| self.get(i, j).eval(z))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        let m = self.m;
        Ok(Self::from_fn(m, |i, j| {
            (0..m).fold(Poly::zero(), |acc, k| {
                &acc + &(self.get(i, k) * rhs.get(k, j))
            })
        }))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        Ok(Self::from_fn(self.m, |i, j| self.get(i, j) + rhs.get(i, j)))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        Ok(Self::from_fn(self.m, |i, j| self.get(i, j) - rhs.get(i, j)))
    }

    fn check_same_dim(&self, rhs: &Self) -> Result<()> {
        if self.m != rhs.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: rhs.m,
            });
        }
        Ok(())
    }

    /// Minor on the given (0-based) rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Poly<F>> {
        if rows.len() != cols.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                found: cols.len(),
            });
        }
        if let Some(&bad) = rows.iter().chain(cols).find(|&&k| k >= self.m) {
            return Err(Error::IndexOutOfRange(format!(
                "minor index {bad} for a {}x{} matrix",
                self.m, self.m
            )));
        }
        let sub = Self::from_fn(rows.len(), |i, j| self.get(rows[i], cols[j]).clone());
        Ok(sub.det())
    }

    pub fn det(&self) -> Poly<F> {
        if self.m <= COFACTOR_MAX_DIM {
            self.det_cofactor()
        } else {
            self.det_bareiss()
        }
    }

    /// Laplace expansion along the first row.
    pub fn det_cofactor(&self) -> Poly<F> {
        let idx: Vec<usize> = (0..self.m).collect();
        cofactor(self, &idx, &idx)
    }

    /// Fraction-free Bareiss elimination over the polynomial ring.
    pub fn det_bareiss(&self) -> Poly<F> {
        let m = self.m;
        if m == 0 {
            return Poly::one();
        }
        let mut a: Vec<Vec<Poly<F>>> = (0..m)
            .map(|i| (0..m).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut negate = false;
        let mut prev = Poly::one();
        for k in 0..m.saturating_sub(1) {
            if a[k][k].is_zero() {
                match (k + 1..m).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        negate = !negate;
                    }
                    None => return Poly::zero(),
                }
            }
            for i in k + 1..m {
                for j in k + 1..m {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    // exact in the ring; the quotient is all we need
                    a[i][j] = num
                        .div_rem(&prev)
                        .expect("Bareiss pivot is nonzero")
                        .0;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[m - 1][m - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }
}

fn cofactor<F: Field>(mp: &MatPoly<F>, rows: &[usize], cols: &[usize]) -> Poly<F> {
    match rows.len() {
        0 => Poly::one(),
        1 => mp.get(rows[0], cols[0]).clone(),
        _ => {
            let r0 = rows[0];
            let rest = &rows[1..];
            let mut acc = Poly::zero();
            for (pos, &c) in cols.iter().enumerate() {
                let e = mp.get(r0, c);
                if e.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = e * &cofactor(mp, rest, &sub_cols);
                acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

impl<F: Field> Mul for &MatPoly<F> {
    type Output = MatPoly<F>;

    fn mul(self, rhs: &MatPoly<F>) -> MatPoly<F> {
        self.try_mul(rhs).expect("matrix polynomial dimension mismatch")
    }
}

impl<F: Field> Add for &MatPoly<F> {
    type Output = MatPoly<F>;

    fn add(self, rhs: &MatPoly<F>) -> MatPoly<F> {
        self.try_add(rhs).expect("matrix polynomial dimension mismatch")
    }
}

impl<F: Field> Sub for &MatPoly<F> {
    type Output = MatPoly<F>;

    fn sub(self, rhs: &MatPoly<F>) -> MatPoly<F> {
        self.try_sub(rhs).expect("matrix polynomial dimension mismatch")
    }
}

impl<F: Field> Neg for &MatPoly<F> {
    type Output = MatPoly<F>;

    fn neg(self) -> MatPoly<F> {
        MatPoly::from_fn(self.m, |i, j| -self.get(i, j))
    }
}

/// Monic matrix polynomial of degree `n`, stored as `P_1..P_n` (`P_0 = 1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonicMatPoly<F> {
    m: usize,
    coeffs: Vec<Mat<F>>,
}

impl<F: Field> MonicMatPoly<F> {
    pub fn new(m: usize, coeffs: Vec<Mat<F>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("matrix size must be positive".into()));
        }
        for c in &coeffs {
            if c.dim() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: c.dim(),
                });
            }
        }
        Ok(MonicMatPoly { m, coeffs })
    }

    /// `z^n` times the identity.
    pub fn identity(m: usize, n: usize) -> Self {
        MonicMatPoly {
            m,
            coeffs: vec![Mat::zeros(m); n],
        }
    }

    /// `z - a`.
    pub fn linear(a: &Mat<F>) -> Self {
        MonicMatPoly {
            m: a.dim(),
            coeffs: vec![-a],
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `P_1..P_n`.
    pub fn coeffs(&self) -> &[Mat<F>] {
        &self.coeffs
    }

    /// `P_k`, with `P_0 = 1` and `P_k = 0` for `k > n`.
    pub fn coeff(&self, k: usize) -> Mat<F> {
        match k {
            0 => Mat::identity(self.m),
            k if k <= self.coeffs.len() => self.coeffs[k - 1].clone(),
            _ => Mat::zeros(self.m),
        }
    }

    /// Same point viewed in a larger truncation (degree `n' >= n`).
    pub fn pad_to(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() < n {
            coeffs.push(Mat::zeros(self.m));
        }
        MonicMatPoly { m: self.m, coeffs }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> MonicMatPoly<G> {
        MonicMatPoly {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c.map(&f)).collect(),
        }
    }

    /// `z^n + P_1 z^{n-1} + ... + P_n` as an entry-wise matrix polynomial in `z`.
    pub fn to_z(&self) -> MatPoly<F> {
        let n = self.degree();
        let coeffs: Vec<Mat<F>> = (0..=n).map(|k| self.coeff(n - k)).collect();
        MatPoly::from_coeff_matrices(self.m, &coeffs).expect("shapes are consistent")
    }

    /// `1 + P_1 w + ... + P_n w^n` with `w = z^{-1}`.
    pub fn to_zinv(&self) -> MatPoly<F> {
        let n = self.degree();
        let coeffs: Vec<Mat<F>> = (0..=n).map(|k| self.coeff(k)).collect();
        MatPoly::from_coeff_matrices(self.m, &coeffs).expect("shapes are consistent")
    }

    /// Recover the coefficient list from a matrix polynomial in `z` whose
    /// leading coefficient is the identity.
    pub fn from_z(p: &MatPoly<F>) -> Result<Self> {
        let m = p.dim();
        let Some(n) = p.degree().finite() else {
            return Err(Error::NotMonic("zero matrix".into()));
        };
        let cm = p.coeff_matrices();
        if cm[n] != Mat::identity(m) {
            return Err(Error::NotMonic(format!(
                "leading coefficient of z^{n} is not the identity"
            )));
        }
        let coeffs = (1..=n).map(|k| cm[n - k].clone()).collect();
        Self::new(m, coeffs)
    }

    /// `P(z)` as a constant matrix, in the `z` convention.
    pub fn eval(&self, z: &F) -> Mat<F> {
        // Horner over the coefficient matrices
        let mut acc = Mat::identity(self.m);
        for c in &self.coeffs {
            acc = &acc.scale(z) + c;
        }
        acc
    }

    /// `det(z^n + ...)`, a monic polynomial of degree `mn`.
    pub fn det(&self) -> Poly<F> {
        self.to_z().det()
    }
}

impl<F: Field> Mul for &MonicMatPoly<F> {
    type Output = MonicMatPoly<F>;

    fn mul(self, rhs: &MonicMatPoly<F>) -> MonicMatPoly<F> {
        assert_eq!(self.m, rhs.m, "matrix polynomial dimension mismatch");
        let (a, b) = (self.degree(), rhs.degree());
        let coeffs = (1..=a + b)
            .map(|k| {
                let lo = k.saturating_sub(b);
                (lo..=k.min(a)).fold(Mat::zeros(self.m), |acc, i| {
                    &acc + &(&self.coeff(i) * &rhs.coeff(k - i))
                })
            })
            .collect();
        MonicMatPoly { m: self.m, coeffs }
    }
}
