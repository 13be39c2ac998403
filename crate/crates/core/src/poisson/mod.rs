//! The rational r-matrix Poisson structure on monic matrix polynomials
//! `P(z) = 1 + P_1 z^{-1} + ... + P_n z^{-n}`, in the coefficient
//! coordinates `t_ij^(r) = (P_r)_ij`.
//!
//! Indices in [`CoordIndex`] and [`kks_bracket`] are 1-based; everything else
//! uses 0-based matrix positions.

pub mod flow;
pub mod symbolic;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::matpoly::MonicMatPoly;
use crate::scalar::Field;

pub use flow::{convergence_order, flow_integrate, FlowOptions, FlowResult};

/// Coordinate function `t_ij^(r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordIndex {
    pub i: usize,
    pub j: usize,
    pub r: usize,
}

impl CoordIndex {
    pub fn new(i: usize, j: usize, r: usize) -> Self {
        CoordIndex { i, j, r }
    }

    pub fn check(&self, m: usize, n: usize) -> Result<()> {
        if self.i == 0 || self.i > m || self.j == 0 || self.j > m || self.r == 0 || self.r > n {
            return Err(Error::IndexOutOfRange(format!(
                "t_{},{}^({}) with m = {m}, n = {n}",
                self.i, self.j, self.r
            )));
        }
        Ok(())
    }

    /// All `m^2 n` coordinates, ordered by `r`, then row, then column.
    pub fn all(m: usize, n: usize) -> Vec<CoordIndex> {
        let mut out = Vec::with_capacity(m * m * n);
        for r in 1..=n {
            for i in 1..=m {
                for j in 1..=m {
                    out.push(CoordIndex { i, j, r });
                }
            }
        }
        out
    }

    /// Position in [`CoordIndex::all`].
    pub fn position(&self, m: usize) -> usize {
        (self.r - 1) * m * m + (self.i - 1) * m + (self.j - 1)
    }
}

fn entry<F: Field>(p: &MonicMatPoly<F>, q: usize, i: usize, j: usize) -> F {
    if q == 0 {
        return if i == j { F::one() } else { F::zero() };
    }
    if q > p.degree() {
        return F::zero();
    }
    p.coeffs()[q - 1][(i, j)].clone()
}

/// `{t_ij^(r), t_kl^(s)}(P) = sum_{q=max(r,s)}^{r+s-1} t_kj^(r+s-q-1) t_il^(q) - t_kj^(q) t_il^(r+s-q-1)`
/// with `t^(0) = 1` and `t^(q) = 0` beyond the degree.
pub fn bracket_tt<F: Field>(p: &MonicMatPoly<F>, a: CoordIndex, b: CoordIndex) -> Result<F> {
    let (m, n) = (p.dim(), p.degree());
    a.check(m, n)?;
    b.check(m, n)?;
    let (i, j, r) = (a.i - 1, a.j - 1, a.r);
    let (k, l, s) = (b.i - 1, b.j - 1, b.r);
    let mut acc = F::zero();
    for q in r.max(s)..r + s {
        let c = r + s - q - 1;
        acc = acc + entry(p, c, k, j) * entry(p, q, i, l) - entry(p, q, k, j) * entry(p, c, i, l);
    }
    Ok(acc)
}

/// The full `m^2 n x m^2 n` bracket table in [`CoordIndex::all`] order.
pub fn bracket_table<F: Field>(p: &MonicMatPoly<F>) -> Vec<Vec<F>> {
    let coords = CoordIndex::all(p.dim(), p.degree());
    coords
        .iter()
        .map(|&a| {
            coords
                .iter()
                .map(|&b| bracket_tt(p, a, b).expect("coordinates in range"))
                .collect()
        })
        .collect()
}

/// Element of `T^-_n`: coefficients of `z^{-1}..z^{-n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector<F> {
    pub coeffs: Vec<Mat<F>>,
}

impl<F: Field> TangentVector<F> {
    pub fn zeros(m: usize, n: usize) -> Self {
        TangentVector {
            coeffs: vec![Mat::zeros(m); n],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Mat::is_zero)
    }

    /// Value of `dt_kl^(s)` on this vector (1-based).
    pub fn component(&self, c: CoordIndex) -> F {
        self.coeffs[c.r - 1][(c.i - 1, c.j - 1)].clone()
    }

    pub fn max_modulus(&self) -> f64 {
        self.coeffs.iter().map(Mat::max_modulus).fold(0.0, f64::max)
    }

    fn add_scaled(&mut self, other: &Self, c: &F) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = &*a + &b.scale(c);
        }
    }
}

/// `A = A_0 + A_{-1} z + ... + A_{-d} z^d`; `coeffs[r]` multiplies `z^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlusPolyMat<F> {
    pub coeffs: Vec<Mat<F>>,
}

impl<F: Field> PlusPolyMat<F> {
    pub fn new(coeffs: Vec<Mat<F>>) -> Self {
        PlusPolyMat { coeffs }
    }

    /// `c z^k`.
    pub fn monomial(c: Mat<F>, k: usize) -> Self {
        let m = c.dim();
        let mut coeffs = vec![Mat::zeros(m); k];
        coeffs.push(c);
        PlusPolyMat { coeffs }
    }

    pub fn coeff(&self, r: usize, m: usize) -> Mat<F> {
        self.coeffs.get(r).cloned().unwrap_or_else(|| Mat::zeros(m))
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len()
    }
}

/// Hamiltonian field of `t_ij^(r)`: the `z^{-s}` coefficient is
/// `sum_{q=max(s,r)}^{min(n,r+s-1)} P_{r+s-1-q} E_ji P_q - P_q E_ji P_{r+s-1-q}`.
pub fn hamiltonian_field<F: Field>(p: &MonicMatPoly<F>, a: CoordIndex) -> Result<TangentVector<F>> {
    let (m, n) = (p.dim(), p.degree());
    a.check(m, n)?;
    let e = Mat::unit(m, a.j - 1, a.i - 1);
    Ok(triple_sum(p, &|r| if r + 1 == a.r { Some(e.clone()) } else { None }))
}

/// `sum_s sum_r sum_{q=max(s,r+1)}^{min(n,r+s)} [P_{s+r-q}, X_r, P_q] z^{-s}`
/// with `[L, X, R] = L X R - R X L`.
fn triple_sum<F: Field>(p: &MonicMatPoly<F>, x: &dyn Fn(usize) -> Option<Mat<F>>) -> TangentVector<F> {
    let (m, n) = (p.dim(), p.degree());
    let mut out = TangentVector::zeros(m, n);
    for r in 0..n {
        let Some(xr) = x(r) else { continue };
        if xr.is_zero() {
            continue;
        }
        for s in 1..=n {
            for q in s.max(r + 1)..=n.min(r + s) {
                let left = p.coeff(s + r - q);
                let right = p.coeff(q);
                let term = &(&(&left * &xr) * &right) - &(&(&right * &xr) * &left);
                out.coeffs[s - 1] = &out.coeffs[s - 1] + &term;
            }
        }
    }
    out
}

/// Hamiltonian field `xi_A` of the linear function paired with `A`, in closed form.
pub fn xi_a<F: Field>(p: &MonicMatPoly<F>, a: &PlusPolyMat<F>) -> TangentVector<F> {
    let m = p.dim();
    triple_sum(p, &|r| Some(a.coeff(r, m)))
}

/// `xi_A` assembled from the coordinate fields: `sum_r sum_ij (A_{-r})_ji xi_ij^(r+1)`.
pub fn xi_a_from_fields<F: Field>(p: &MonicMatPoly<F>, a: &PlusPolyMat<F>) -> TangentVector<F> {
    let (m, n) = (p.dim(), p.degree());
    let mut out = TangentVector::zeros(m, n);
    for r in 0..n {
        let ar = a.coeff(r, m);
        for i in 1..=m {
            for j in 1..=m {
                let c = ar[(j - 1, i - 1)].clone();
                if c.is_zero() {
                    continue;
                }
                let field = hamiltonian_field(p, CoordIndex::new(i, j, r + 1)).expect("in range");
                out.add_scaled(&field, &c);
            }
        }
    }
    out
}

/// Matrix Laurent polynomial, `coeffs[k]` multiplies `z^{k - low}`.
#[derive(Clone, Debug)]
struct Laurent<F> {
    low: usize,
    coeffs: Vec<Mat<F>>,
}

impl<F: Field> Laurent<F> {
    fn of_p(p: &MonicMatPoly<F>) -> Self {
        let n = p.degree();
        Laurent {
            low: n,
            coeffs: (0..=n).rev().map(|k| p.coeff(k)).collect(),
        }
    }

    fn of_plus(a: &PlusPolyMat<F>, m: usize) -> Self {
        let coeffs = if a.coeffs.is_empty() {
            vec![Mat::zeros(m)]
        } else {
            a.coeffs.clone()
        };
        Laurent { low: 0, coeffs }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let m = self.coeffs[0].dim();
        let mut coeffs = vec![Mat::zeros(m); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            for (b, y) in rhs.coeffs.iter().enumerate() {
                coeffs[a + b] = &coeffs[a + b] + &(x * y);
            }
        }
        Laurent {
            low: self.low + rhs.low,
            coeffs,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        let m = self.coeffs[0].dim();
        let low = self.low.max(rhs.low);
        let high = (self.coeffs.len() as isize - self.low as isize).max(rhs.coeffs.len() as isize - rhs.low as isize);
        let len = (high + low as isize) as usize;
        let coeffs = (0..len)
            .map(|k| {
                let e = k as isize - low as isize;
                &self.at(e, m) - &rhs.at(e, m)
            })
            .collect();
        Laurent { low, coeffs }
    }

    /// Coefficient of `z^e`.
    fn at(&self, e: isize, m: usize) -> Mat<F> {
        let idx = e + self.low as isize;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Mat::zeros(m)
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Projection onto `z^0, z^1, ...`.
    fn plus(&self) -> Self {
        Laurent {
            low: 0,
            coeffs: self.coeffs[self.low.min(self.coeffs.len())..].to_vec(),
        }
        .nonempty(self.coeffs[0].dim())
    }

    fn nonempty(mut self, m: usize) -> Self {
        if self.coeffs.is_empty() {
            self.coeffs.push(Mat::zeros(m));
        }
        self
    }

    /// Largest modulus among coefficients of `z^e`, `e >= 0`.
    fn plus_modulus(&self) -> f64 {
        self.coeffs[self.low.min(self.coeffs.len())..]
            .iter()
            .map(Mat::max_modulus)
            .fold(0.0, f64::max)
    }

    /// Coefficients of `z^{-1}..z^{-n}`.
    fn minus(&self, n: usize, m: usize) -> TangentVector<F> {
        TangentVector {
            coeffs: (1..=n).map(|s| self.at(-(s as isize), m)).collect(),
        }
    }
}

/// Dressing field `X_A(P) = (PA)_+ P - P (AP)_+`. Its nonnegative part
/// vanishes identically, so only `z^{-1}..z^{-n}` is returned.
pub fn dressing_field<F: Field>(p: &MonicMatPoly<F>, a: &PlusPolyMat<F>) -> TangentVector<F> {
    let (m, n) = (p.dim(), p.degree());
    let lp = Laurent::of_p(p);
    let la = Laurent::of_plus(a, m);
    let pa = lp.mul(&la).plus();
    let ap = la.mul(&lp).plus();
    pa.mul(&lp).sub(&lp.mul(&ap)).minus(n, m)
}

/// Solution of `(PA)_+ = B` together with `C = (AP)_+`.
#[derive(Clone, Debug, PartialEq)]
pub struct CosetSolution<F> {
    pub a: PlusPolyMat<F>,
    pub c: PlusPolyMat<F>,
}

/// Solve `(PA)_+ = B` for `A` of degree `< n`, top coefficient first, and
/// set `C = (AP)_+`; then `BP - PC = X_A(P)`.
pub fn coset_solve<F: Field>(p: &MonicMatPoly<F>, b: &PlusPolyMat<F>) -> Result<CosetSolution<F>> {
    let (m, n) = (p.dim(), p.degree());
    if b.coeffs.len() > n {
        return Err(Error::DegreeExceeds {
            degree: b.coeffs.len() - 1,
            bound: n.saturating_sub(1),
        });
    }
    // (PA)_+ at z^k is sum_{i=0}^{n-1-k} P_i A_{k+i}
    let mut a = vec![Mat::zeros(m); n];
    for k in (0..n).rev() {
        let mut acc = b.coeff(k, m);
        for i in 1..n - k {
            acc = &acc - &(&p.coeff(i) * &a[k + i]);
        }
        a[k] = acc;
    }
    let c = (0..n)
        .map(|k| (0..n - k).fold(Mat::zeros(m), |acc, i| &acc + &(&a[k + i] * &p.coeff(i))))
        .collect();
    Ok(CosetSolution {
        a: PlusPolyMat::new(a),
        c: PlusPolyMat::new(c),
    })
}

/// `B P - P C`, failing unless the nonnegative powers cancel (up to `tol`, 0 on exact fields).
pub fn coset_vector<F: Field>(
    p: &MonicMatPoly<F>,
    b: &PlusPolyMat<F>,
    c: &PlusPolyMat<F>,
    tol: f64,
) -> Result<TangentVector<F>> {
    let (m, n) = (p.dim(), p.degree());
    let lp = Laurent::of_p(p);
    let diff = Laurent::of_plus(b, m).mul(&lp).sub(&lp.mul(&Laurent::of_plus(c, m)));
    let leftover = diff.plus_modulus();
    if leftover > tol {
        return Err(Error::InvalidArgument(format!(
            "B P - P C has a nonnegative part of size {leftover:e}"
        )));
    }
    Ok(diff.minus(n, m))
}

/// Kirillov-Kostant-Souriau bracket on `gl_m^*`:
/// `{x_ij, x_kl}(X) = delta_il x_kj - delta_kj x_il` (1-based indices).
pub fn kks_bracket<F: Field>(x: &Mat<F>, (i, j): (usize, usize), (k, l): (usize, usize)) -> Result<F> {
    let m = x.dim();
    if [i, j, k, l].iter().any(|&v| v == 0 || v > m) {
        return Err(Error::IndexOutOfRange(format!("({i},{j}), ({k},{l}) with m = {m}")));
    }
    let mut acc = F::zero();
    if i == l {
        acc = acc + x[(k - 1, j - 1)].clone();
    }
    if k == j {
        acc = acc - x[(i - 1, l - 1)].clone();
    }
    Ok(acc)
}
