//! Sparse multivariate polynomials in coordinate functions, for exact
//! checks that need differentials of composite functions: Jacobi,
//! Casimir brackets of determinant coefficients and pullbacks through the
//! product map `(A_1..A_n) -> (z - A_1)...(z - A_n)`.
//!
//! Variables are plain indices. For `t` coordinates the index is
//! [`CoordIndex::position`]; for factor entries `x^(k)_ij` it is
//! `k m^2 + i m + j` (0-based).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use itertools::Itertools;

use super::{bracket_table, kks_bracket, CoordIndex};
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::matpoly::MonicMatPoly;
use crate::scalar::Field;
use crate::spectral::product;

/// Sorted `(variable, exponent)` pairs with positive exponents.
type Monomial = Vec<(usize, u32)>;

#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<F> {
    terms: BTreeMap<Monomial, F>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl<F: Field> MPoly<F> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: F) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn var(v: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![(v, 1)], F::one());
        p
    }

    fn add_term(&mut self, mono: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|mono| mono.iter().map(|(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero();
        for (mono, v) in &self.terms {
            out.add_term(mono.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (mono, v) in &rhs.terms {
            out.add_term(mono.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (mono, v) in &rhs.terms {
            out.add_term(mono.clone(), -v.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), a.clone() * b.clone());
            }
        }
        out
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = Self::zero();
        for (mono, c) in &self.terms {
            let Some(pos) = mono.iter().position(|&(x, _)| x == v) else {
                continue;
            };
            let e = mono[pos].1;
            let mut reduced = mono.clone();
            if e == 1 {
                reduced.remove(pos);
            } else {
                reduced[pos].1 = e - 1;
            }
            out.add_term(reduced, c.clone() * F::from_i64(e as i64));
        }
        out
    }

    /// Value at `point`; variables beyond its length evaluate to zero.
    pub fn eval(&self, point: &[F]) -> F {
        self.terms.iter().fold(F::zero(), |acc, (mono, c)| {
            let term = mono.iter().fold(c.clone(), |t, &(v, e)| {
                let x = point.get(v).cloned().unwrap_or_else(F::zero);
                (0..e).fold(t, |t, _| t * x.clone())
            });
            acc + term
        })
    }

    /// Variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        self.terms
            .keys()
            .flat_map(|mono| mono.iter().map(|&(v, _)| v))
            .sorted()
            .dedup()
            .collect()
    }

    /// Gradient at `point`, as sparse `(variable, value)` pairs.
    pub fn gradient_at(&self, point: &[F]) -> Vec<(usize, F)> {
        self.variables()
            .into_iter()
            .map(|v| (v, self.derivative(v).eval(point)))
            .filter(|(_, g)| !g.is_zero())
            .collect()
    }
}

/// Coordinates of a point as the flat vector indexed by [`CoordIndex::position`].
pub fn point_coordinates<F: Field>(p: &MonicMatPoly<F>) -> Vec<F> {
    let m = p.dim();
    p.coeffs()
        .iter()
        .flat_map(|c| (0..m * m).map(move |k| c[(k / m, k % m)].clone()))
        .collect()
}

/// `t_ij^(q)` as a polynomial, with `t^(0) = 1` and `t^(q) = 0` for `q > n` (0-based `i`, `j`).
fn t_symbol<F: Field>(m: usize, n: usize, q: usize, i: usize, j: usize) -> MPoly<F> {
    if q == 0 {
        return if i == j { MPoly::one() } else { MPoly::zero() };
    }
    if q > n {
        return MPoly::zero();
    }
    MPoly::var(CoordIndex::new(i + 1, j + 1, q).position(m))
}

/// `{t_a, t_b}` as a polynomial in the coordinates of `M_n`.
pub fn bracket_symbolic<F: Field>(m: usize, n: usize, a: CoordIndex, b: CoordIndex) -> MPoly<F> {
    let (i, j, r) = (a.i - 1, a.j - 1, a.r);
    let (k, l, s) = (b.i - 1, b.j - 1, b.r);
    let mut acc = MPoly::zero();
    for q in r.max(s)..r + s {
        let c = r + s - q - 1;
        let plus = t_symbol(m, n, c, k, j).mul(&t_symbol(m, n, q, i, l));
        let minus = t_symbol(m, n, q, k, j).mul(&t_symbol(m, n, c, i, l));
        acc = acc.add(&plus).sub(&minus);
    }
    acc
}

/// Coefficients `c_1..c_{mn}` of `det(z^n P) = z^{mn} + c_1 z^{mn-1} + ...`
/// as polynomials in the coordinates; `c_0 = 1` is included at index 0.
pub fn det_coefficients_symbolic<F: Field>(m: usize, n: usize) -> Vec<MPoly<F>> {
    // entries as polynomials in w = z^{-1} with polynomial coefficients
    let entry = |i: usize, j: usize| -> Vec<MPoly<F>> { (0..=n).map(|q| t_symbol(m, n, q, i, j)).collect() };
    let mut det: Vec<MPoly<F>> = vec![MPoly::zero(); m * n + 1];
    for perm in (0..m).permutations(m) {
        let inversions = perm.iter().tuple_combinations().filter(|(a, b)| a > b).count();
        let mut prod: Vec<MPoly<F>> = vec![MPoly::one()];
        for (i, &j) in perm.iter().enumerate() {
            let e = entry(i, j);
            let mut next = vec![MPoly::zero(); prod.len() + n];
            for (a, x) in prod.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (b, y) in e.iter().enumerate() {
                    next[a + b] = next[a + b].add(&x.mul(y));
                }
            }
            prod = next;
        }
        for (k, c) in prod.into_iter().enumerate() {
            det[k] = if inversions % 2 == 0 { det[k].add(&c) } else { det[k].sub(&c) };
        }
    }
    det
}

/// Bracket `{f, g}(P)` of polynomial functions by the chain rule.
pub fn poisson_bracket_at<F: Field>(f: &MPoly<F>, g: &MPoly<F>, p: &MonicMatPoly<F>) -> F {
    let point = point_coordinates(p);
    let table = bracket_table(p);
    pair_gradients(&f.gradient_at(&point), &g.gradient_at(&point), &table)
}

fn pair_gradients<F: Field>(df: &[(usize, F)], dg: &[(usize, F)], table: &[Vec<F>]) -> F {
    let mut acc = F::zero();
    for (a, fa) in df {
        for (b, gb) in dg {
            acc = acc + fa.clone() * gb.clone() * table[*a][*b].clone();
        }
    }
    acc
}

/// `{c_s, t_b}(P)` for the `s`-th determinant coefficient, `1 <= s <= mn`.
pub fn casimir_check<F: Field>(p: &MonicMatPoly<F>, s: usize, b: CoordIndex) -> Result<F> {
    let (m, n) = (p.dim(), p.degree());
    if s == 0 || s > m * n {
        return Err(Error::IndexOutOfRange(format!("determinant coefficient {s} of {}", m * n)));
    }
    b.check(m, n)?;
    let c = &det_coefficients_symbolic(m, n)[s];
    Ok(poisson_bracket_at(c, &MPoly::var(b.position(m)), p))
}

/// `{c_s, t_b}(P)` for every determinant coefficient `s = 1..mn` (rows) and
/// coordinate `b` in [`CoordIndex::all`] order (columns).
pub fn casimir_table<F: Field>(p: &MonicMatPoly<F>) -> Vec<Vec<F>> {
    let (m, n) = (p.dim(), p.degree());
    let point = point_coordinates(p);
    let table = bracket_table(p);
    det_coefficients_symbolic::<F>(m, n)
        .iter()
        .skip(1)
        .map(|c| {
            let grad = c.gradient_at(&point);
            (0..m * m * n)
                .map(|b| pair_gradients(&grad, &[(b, F::one())], &table))
                .collect()
        })
        .collect()
}

/// `{t_a, {t_b, t_c}} + {t_b, {t_c, t_a}} + {t_c, {t_a, t_b}}` at `P`, with
/// the inner brackets expanded as polynomials.
pub fn jacobi_residual<F: Field>(p: &MonicMatPoly<F>, a: CoordIndex, b: CoordIndex, c: CoordIndex) -> Result<F> {
    let (m, n) = (p.dim(), p.degree());
    for x in [a, b, c] {
        x.check(m, n)?;
    }
    let point = point_coordinates(p);
    let table = bracket_table(p);
    let term = |x: CoordIndex, y: CoordIndex, z: CoordIndex| {
        let inner = bracket_symbolic::<F>(m, n, y, z);
        pair_gradients(&[(x.position(m), F::one())], &inner.gradient_at(&point), &table)
    };
    Ok(term(a, b, c) + term(b, c, a) + term(c, a, b))
}

/// `(z - X_1) ... (z - X_n)` with symbolic factor entries: the `r`-th entry
/// of the result is `P_{r+1}` as an `m x m` array of polynomials in the `x`.
pub fn product_symbolic<F: Field>(m: usize, n: usize) -> Vec<Vec<MPoly<F>>> {
    // coefficient list P_0..P_k of the partial product, each an m x m array
    let identity = || -> Vec<MPoly<F>> {
        (0..m * m)
            .map(|k| if k / m == k % m { MPoly::one() } else { MPoly::zero() })
            .collect()
    };
    let mut acc: Vec<Vec<MPoly<F>>> = vec![identity()];
    for f in 0..n {
        let minus_x: Vec<MPoly<F>> = (0..m * m)
            .map(|k| MPoly::var(f * m * m + k).scale(&-F::one()))
            .collect();
        let mut next: Vec<Vec<MPoly<F>>> = acc.clone();
        next.push(vec![MPoly::zero(); m * m]);
        for (q, c) in acc.iter().enumerate() {
            // c * (-X) lands one degree lower in z
            for i in 0..m {
                for j in 0..m {
                    let mut s = MPoly::zero();
                    for k in 0..m {
                        s = s.add(&c[i * m + k].mul(&minus_x[k * m + j]));
                    }
                    next[q + 1][i * m + j] = next[q + 1][i * m + j].add(&s);
                }
            }
        }
        acc = next;
    }
    acc.remove(0);
    acc
}

/// Flat coordinates of factor matrices in `x^(k)_ij` order.
pub fn factor_coordinates<F: Field>(factors: &[Mat<F>]) -> Vec<F> {
    factors
        .iter()
        .flat_map(|a| {
            let m = a.dim();
            (0..m * m).map(move |k| a[(k / m, k % m)].clone())
        })
        .collect()
}

/// `{phi o F, psi o F}` under the product of KKS brackets minus
/// `{phi, psi}(F(A))`, where `F` is the product map and `phi`, `psi` are
/// polynomials in the `t` coordinates. Zero when `F` is Poisson.
pub fn product_map_poisson_check<F: Field>(factors: &[Mat<F>], phi: &MPoly<F>, psi: &MPoly<F>) -> Result<F> {
    let n = factors.len();
    let m = factors.first().map(Mat::dim).ok_or_else(|| Error::InvalidArgument("no factors".into()))?;
    let image = product(factors)?;
    let t_point = point_coordinates(&image);
    let x_point = factor_coordinates(factors);
    let map = product_symbolic::<F>(m, n);

    // d(phi o F)/dx = sum_t dphi/dt(F(A)) dF_t/dx(A)
    let pullback_gradient = |f: &MPoly<F>| -> Vec<F> {
        let mut grad = vec![F::zero(); n * m * m];
        for (t, ft) in f.gradient_at(&t_point) {
            let (r, k) = (t / (m * m), t % (m * m));
            for (x, dx) in map[r][k].gradient_at(&x_point) {
                grad[x] = grad[x].clone() + ft.clone() * dx;
            }
        }
        grad
    };
    let gphi = pullback_gradient(phi);
    let gpsi = pullback_gradient(psi);

    let mut lhs = F::zero();
    for (f, a) in factors.iter().enumerate() {
        let base = f * m * m;
        for u in 0..m * m {
            if gphi[base + u].is_zero() {
                continue;
            }
            for v in 0..m * m {
                if gpsi[base + v].is_zero() {
                    continue;
                }
                let kks = kks_bracket(a, (u / m + 1, u % m + 1), (v / m + 1, v % m + 1))?;
                lhs = lhs + gphi[base + u].clone() * gpsi[base + v].clone() * kks;
            }
        }
    }
    let rhs = poisson_bracket_at(phi, psi, &image);
    Ok(lhs - rhs)
}

/// Coordinate function `t_a` as a polynomial.
pub fn coordinate<F: Field>(m: usize, a: CoordIndex) -> MPoly<F> {
    MPoly::var(a.position(m))
}

/// Coefficient of `z^{-r}` in `tr P(z)`.
pub fn trace_coefficient<F: Field>(m: usize, r: usize) -> MPoly<F> {
    (1..=m).fold(MPoly::zero(), |acc, i| acc.add(&coordinate(m, CoordIndex::new(i, i, r))))
}
