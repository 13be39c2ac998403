//! Symplectic leaves of monic matrix polynomials.
//!
//! A leaf is the set of monic `P` of fixed degree sharing the Smith normal
//! form of `z^n P`. The descriptor records the invariant polynomials together
//! with the derived type, dimension and determinant.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::matpoly::{MatPoly, MonicMatPoly};
use crate::poly::Poly;
use crate::scalar::{ExactField, Field};
use crate::smith::invariant_polynomials;
use crate::spectral::{poly_roots, separation};
use crate::Complex64;

/// `z^n p(z)` for `p = 1 + P_1 w + ... + P_k w^k` in `w = z^{-1}`, `k <= n`.
/// Both conventions share the coefficient list, so this only reindexes.
pub fn zinv_to_z<F: Field>(p: &MatPoly<F>, n: usize) -> Result<MonicMatPoly<F>> {
    let m = p.dim();
    let cm = p.coeff_matrices();
    if cm.first() != Some(&Mat::identity(m)) {
        return Err(Error::NotMonic("constant coefficient is not the identity".into()));
    }
    if cm.len() - 1 > n {
        return Err(Error::DegreeExceeds {
            degree: cm.len() - 1,
            bound: n,
        });
    }
    MonicMatPoly::new(m, cm[1..].to_vec()).map(|q| q.pad_to(n))
}

/// Inverse of [`zinv_to_z`]: `z^{-n} P(z)` written in `w = z^{-1}`.
pub fn z_to_zinv<F: Field>(p: &MonicMatPoly<F>) -> MatPoly<F> {
    p.to_zinv()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafDescriptor<F> {
    pub m: usize,
    pub n: usize,
    /// `d_1..d_m`, monic, `d_{i+1} | d_i`.
    pub invariants: Vec<Poly<F>>,
    /// `alpha_i = deg d_i - n`.
    pub type_alpha: Vec<i64>,
    pub dimension: i64,
    pub determinant: Poly<F>,
}

fn degrees<F: Field>(ds: &[Poly<F>]) -> Vec<i64> {
    ds.iter()
        .map(|d| d.degree().finite().map_or(-1, |k| k as i64))
        .collect()
}

/// `sum (m + 1 - 2i) r_i` over 1-based `i`.
fn weighted_dimension(r: &[i64]) -> i64 {
    let m = r.len() as i64;
    r.iter()
        .enumerate()
        .map(|(i, ri)| (m + 1 - 2 * (i as i64 + 1)) * ri)
        .sum()
}

/// Leaf of a monic matrix polynomial.
pub fn classify<F: ExactField>(p: &MonicMatPoly<F>) -> Result<LeafDescriptor<F>> {
    let n = p.degree();
    let invariants = invariant_polynomials(&p.to_z())?;
    let r = degrees(&invariants);
    let determinant = invariants.iter().fold(Poly::one(), |acc, d| &acc * d);
    Ok(LeafDescriptor {
        m: p.dim(),
        n,
        type_alpha: r.iter().map(|ri| ri - n as i64).collect(),
        dimension: weighted_dimension(&r),
        invariants,
        determinant,
    })
}

/// [`classify`] for a polynomial in `z` that must have identity leading coefficient.
pub fn classify_matpoly<F: ExactField>(p: &MatPoly<F>) -> Result<LeafDescriptor<F>> {
    classify(&MonicMatPoly::from_z(p)?)
}

/// Dimension of a leaf of type `alpha` in degree `n`.
pub fn leaf_dimension(alpha: &[i64], n: usize) -> Result<i64> {
    if alpha.windows(2).any(|w| w[0] < w[1]) || alpha.iter().sum::<i64>() != 0 {
        return Err(Error::NonDominantType(alpha.to_vec()));
    }
    if alpha.iter().any(|a| a + (n as i64) < 0) {
        return Err(Error::InvalidArgument(format!(
            "type {alpha:?} has a negative degree for n = {n}"
        )));
    }
    let r: Vec<i64> = alpha.iter().map(|a| a + n as i64).collect();
    Ok(weighted_dimension(&r))
}

/// Whether `s_prime` lies in the closure of `s`.
pub fn closure_contains<F: ExactField>(s: &LeafDescriptor<F>, s_prime: &LeafDescriptor<F>) -> Result<bool> {
    if s.m != s_prime.m || s.n != s_prime.n {
        return Err(Error::ShapeMismatch(s.m, s.n, s_prime.m, s_prime.n));
    }
    if s.determinant != s_prime.determinant {
        return Ok(false);
    }
    let mut acc = Poly::one();
    let mut acc_prime = Poly::one();
    for (d, dp) in s.invariants.iter().zip(&s_prime.invariants) {
        acc = &acc * d;
        acc_prime = &acc_prime * dp;
        if !acc_prime.divides(&acc) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Leaf data after dividing out the determinant's scalar part: `q_i = d_i / d_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SLLeafDescriptor<F> {
    pub q: Vec<Poly<F>>,
}

pub fn sl_reduce<F: ExactField>(s: &LeafDescriptor<F>) -> Result<SLLeafDescriptor<F>> {
    let (last, rest) = s
        .invariants
        .split_last()
        .ok_or_else(|| Error::InvalidArgument("descriptor without invariants".into()))?;
    let q = rest
        .iter()
        .map(|d| d.exact_div(last).ok_or(Error::InexactDivision))
        .collect::<Result<Vec<_>>>()?;
    Ok(SLLeafDescriptor { q })
}

fn series_mul<F: Field>(a: &[F], b: &[F], len: usize) -> Vec<F> {
    let mut out = vec![F::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// `f^{-1/m}` for a series with `f_0 = 1`, to `len` coefficients.
/// Newton step `y <- y + y (1 - f y^m) / m` doubles the correct prefix.
pub fn inverse_root_series<F: Field>(f: &[F], m: usize, len: usize) -> Vec<F> {
    let inv_m = F::from_i64(m as i64).inv();
    let mut y = vec![F::one()];
    let mut prec = 1;
    while prec < len {
        prec = (2 * prec).min(len);
        let mut ym = vec![F::one()];
        for _ in 0..m {
            ym = series_mul(&ym, &y, prec);
        }
        let fy = series_mul(f, &ym, prec);
        let corr: Vec<F> = fy
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let one_minus = if k == 0 { F::one() - c.clone() } else { -c.clone() };
                one_minus * inv_m.clone()
            })
            .collect();
        let delta = series_mul(&y, &corr, prec);
        y.resize(prec, F::zero());
        for (yk, dk) in y.iter_mut().zip(delta) {
            *yk = yk.clone() + dk;
        }
    }
    y.truncate(len);
    y
}

/// `P(z) det(P(z))^{-1/m}` as coefficients of `z^0..z^{-order}`.
/// The determinant of the result is `1 + O(z^{-order-1})`.
pub fn sl_normalize<F: Field>(p: &MonicMatPoly<F>, order: Option<usize>) -> Vec<Mat<F>> {
    let order = order.unwrap_or(2 * p.degree());
    let m = p.dim();
    let len = order + 1;
    let det = p.to_zinv().det();
    let f: Vec<F> = (0..len).map(|k| det.coeff(k)).collect();
    let y = inverse_root_series(&f, m, len);
    (0..len)
        .map(|k| {
            (0..=k.min(p.degree())).fold(Mat::zeros(m), |acc, a| &acc + &p.coeff(a).scale(&y[k - a]))
        })
        .collect()
}

/// Determinant series of truncated matrix series, to the same order.
pub fn series_det<F: Field>(series: &[Mat<F>]) -> Vec<F> {
    let Some(first) = series.first() else {
        return Vec::new();
    };
    let m = first.dim();
    let mp = MatPoly::from_coeff_matrices(m, series).expect("square series");
    let d = mp.det();
    (0..series.len()).map(|k| d.coeff(k)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleResidue {
    pub pole: Complex64,
    pub residue: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonopoleComponent<F> {
    /// 1-based level `i` in `1..m`.
    pub i: usize,
    pub a: Poly<F>,
    pub b: Poly<F>,
    /// `e_i = numerator / denominator` in lowest terms (exact path) or as given.
    pub numerator: Poly<F>,
    pub denominator: Poly<F>,
    pub k: i64,
    pub poles: Vec<PoleResidue>,
    /// All poles of `e_i` are simple and there are exactly `k` of them.
    pub simple: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonopoleChart<F> {
    pub components: Vec<MonopoleComponent<F>>,
    /// Every component is simple.
    pub in_open_subset: bool,
}

/// `a_i` (rows and columns `i+1..m`) and `b_i` (rows `i+1..m`, columns
/// `i, i+2..m`), 1-based, for `i = 1..m-1`.
pub fn drinfeld_minors<F: Field>(p: &MonicMatPoly<F>) -> Result<Vec<(Poly<F>, Poly<F>)>> {
    let m = p.dim();
    let pz = p.to_z();
    (1..m)
        .map(|i| {
            let rows: Vec<usize> = (i..m).collect();
            let b_cols: Vec<usize> = std::iter::once(i - 1).chain(i + 1..m).collect();
            Ok((pz.minor(&rows, &rows)?, pz.minor(&rows, &b_cols)?))
        })
        .collect()
}

/// `k_i = n(m-i) - (r_{m-i+1} + ... + r_m)`.
pub fn monopole_k<F: Field>(descriptor: &LeafDescriptor<F>) -> Vec<i64> {
    let (m, n) = (descriptor.m as i64, descriptor.n as i64);
    let r = degrees(&descriptor.invariants);
    (1..m)
        .map(|i| n * (m - i) - r[(m - i) as usize..].iter().sum::<i64>())
        .collect()
}

fn residues(num: &Poly<Complex64>, den: &Poly<Complex64>) -> (Vec<PoleResidue>, f64) {
    let dden = den.derivative();
    let roots: Vec<Complex64> = poly_roots(den).into_iter().map(|r| r.value).collect();
    let sep = separation(&roots);
    let poles = roots
        .into_iter()
        .map(|x| PoleResidue {
            pole: x,
            residue: num.eval(&x) / dden.eval(&x),
        })
        .collect();
    (poles, sep)
}

/// Exact Drinfeld data: `e_i` reduced by `gcd(a_i, b_i)`, `k_i` from the leaf.
/// A component is simple when its reduced denominator is squarefree of
/// degree `k_i`; poles and residues are listed only then.
pub fn drinfeld_coordinates<F: ExactField>(p: &MonicMatPoly<F>) -> Result<MonopoleChart<F>> {
    let leaf = classify(p)?;
    let ks = monopole_k(&leaf);
    let mut components = Vec::new();
    for (idx, (a, b)) in drinfeld_minors(p)?.into_iter().enumerate() {
        let (numerator, denominator) = if b.is_zero() {
            (Poly::zero(), Poly::one())
        } else {
            let g = a.gcd(&b)?;
            (
                b.exact_div(&g).ok_or(Error::InexactDivision)?,
                a.exact_div(&g).ok_or(Error::InexactDivision)?,
            )
        };
        let k = ks[idx];
        let deg = denominator.degree().finite().unwrap_or(0) as i64;
        let squarefree = denominator.gcd(&denominator.derivative())?.is_one();
        let simple = !numerator.is_zero() && squarefree && deg == k;
        let poles = if simple {
            let to_c = |q: &Poly<F>| q.map(Field::to_c64);
            residues(&to_c(&numerator), &to_c(&denominator)).0
        } else {
            Vec::new()
        };
        components.push(MonopoleComponent {
            i: idx + 1,
            a,
            b,
            numerator,
            denominator,
            k,
            poles,
            simple,
        });
    }
    let in_open_subset = components.iter().all(|c| c.simple);
    Ok(MonopoleChart {
        components,
        in_open_subset,
    })
}

/// Numeric Drinfeld data. Without exact gcds, `e_i = b_i / a_i` is taken as
/// is and `k_i = n(m-i)`, the generic value. Poles closer than `min_separation`
/// make residue extraction ill-conditioned and are rejected.
pub fn drinfeld_numeric(p: &MonicMatPoly<Complex64>, min_separation: f64) -> Result<MonopoleChart<Complex64>> {
    let (m, n) = (p.dim(), p.degree());
    let mut components = Vec::new();
    for (idx, (a, b)) in drinfeld_minors(p)?.into_iter().enumerate() {
        let (poles, sep) = residues(&b, &a);
        if sep < min_separation {
            return Err(Error::PolesTooClose {
                separation: sep,
                threshold: min_separation,
            });
        }
        let simple = !b.is_zero() && poles.iter().all(|pr| !pr.residue.is_zero());
        components.push(MonopoleComponent {
            i: idx + 1,
            numerator: b.clone(),
            denominator: a.clone(),
            a,
            b,
            k: (n * (m - idx - 1)) as i64,
            poles,
            simple,
        });
    }
    let in_open_subset = components.iter().all(|c| c.simple);
    Ok(MonopoleChart {
        components,
        in_open_subset,
    })
}

pub const DEFAULT_POLE_SEPARATION: f64 = 1e-6;
