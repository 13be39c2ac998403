//! Spectra, right divisors and factorization charts of monic matrix
//! polynomials over `C`.
//!
//! A monic `P(z)` of degree `n` whose `mn` eigenvalues are distinct factors as
//! `(z - A_1) ... (z - A_n)` once the spectrum is split into an ordered
//! partition of `n` blocks of size `m`. Factors are peeled from the right: the
//! eigenvectors of the last block give `A_n`, the quotient is factored next.
//! Neighbouring factors exchange one eigenvalue through a rank-one update
//! (`swap_adjacent`), and any reordering of a partition is a chain of such
//! exchanges (`transition`).

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::matpoly::MonicMatPoly;
use crate::poly::Poly;
use crate::scalar::Field;
use crate::Complex64;

/// Numeric thresholds for the spectral routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Minimum eigenvalue separation for a generic spectrum.
    pub eps_sep: f64,
    /// Maximum condition number of an eigenvector matrix.
    pub kappa_max: f64,
    /// Relative threshold below which `(u,v)` counts as zero.
    pub eps_ip: f64,
    /// Relative bound on the right-division remainder.
    pub tol_div: f64,
    /// Relative bound on `|P(lambda) v|`.
    pub tol_eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_sep: 1e-8,
            kappa_max: 1e8,
            eps_ip: 1e-10,
            tol_div: 1e-9,
            tol_eig: 1e-9,
        }
    }
}

pub(crate) fn to_dmatrix(a: &Mat<Complex64>) -> DMatrix<Complex64> {
    let m = a.dim();
    DMatrix::from_fn(m, m, |i, j| a[(i, j)])
}

pub(crate) fn from_dmatrix(a: &DMatrix<Complex64>) -> Mat<Complex64> {
    Mat::from_fn(a.nrows(), |i, j| a[(i, j)])
}

/// Eigenvalues of a constant complex matrix (complex Schur form).
pub fn eigenvalues(a: &Mat<Complex64>) -> Vec<Complex64> {
    if a.dim() == 0 {
        return Vec::new();
    }
    nalgebra::linalg::Schur::new(to_dmatrix(a))
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .expect("complex Schur form is triangular")
}

/// Smallest pairwise distance, `+inf` for fewer than two points.
pub fn separation(points: &[Complex64]) -> f64 {
    points
        .iter()
        .tuple_combinations()
        .map(|(a, b)| (a - b).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Minimal worst-case error over all pairings of two equally sized multisets
/// (optimal bottleneck assignment by enumeration; blocks are small).
pub fn match_spectra(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    (0..b.len())
        .permutations(b.len())
        .map(|perm| {
            a.iter()
                .zip(&perm)
                .map(|(x, &j)| (x - b[j]).norm())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    /// `|p(value)|` after polishing.
    pub residual: f64,
    /// Newton polishing failed to improve the companion estimate.
    pub diverged: bool,
    /// Radius within which roundoff in `p` cannot locate the root.
    pub error_bound: f64,
}

/// Roots of a scalar polynomial: eigenvalues of the companion matrix,
/// polished by Newton steps on the polynomial itself.
pub fn poly_roots(p: &Poly<Complex64>) -> Vec<Root> {
    let Some(deg) = p.degree().finite() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let monic = p.monic();
    let companion = Mat::from_fn(deg, |i, j| {
        if i + 1 == j {
            Complex64::new(1.0, 0.0)
        } else if i + 1 == deg {
            -monic.coeff(j)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let dp = monic.derivative();
    eigenvalues(&companion)
        .into_iter()
        .map(|z0| {
            let start = monic.eval(&z0).norm();
            let mut z = z0;
            let mut res = start;
            for _ in 0..8 {
                let d = dp.eval(&z);
                if d.norm() == 0.0 {
                    break;
                }
                let cand = z - monic.eval(&z) / d;
                let r = monic.eval(&cand).norm();
                if r < res {
                    z = cand;
                    res = r;
                } else {
                    break;
                }
            }
            let floor: f64 = monic
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, a)| a.norm() * z.norm().powi(k as i32))
                .sum();
            let slope = dp.eval(&z).norm();
            let error_bound = 4.0 * deg as f64 * f64::EPSILON * floor / slope;
            Root {
                value: z,
                residual: res,
                diverged: !res.is_finite() || res > start,
                error_bound: if error_bound.is_nan() { f64::INFINITY } else { error_bound },
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub roots: Vec<Root>,
    pub separation: f64,
    pub generic: bool,
}

impl Spectrum {
    pub fn values(&self) -> Vec<Complex64> {
        self.roots.iter().map(|r| r.value).collect()
    }
}

/// The `mn` eigenvalues of `P`, i.e. roots of `det P(z)`.
pub fn spectrum(p: &MonicMatPoly<Complex64>, tol: &Tolerances) -> Spectrum {
    let det = p.det();
    let mut roots = poly_roots(&det);
    for r in roots.iter_mut() {
        r.residual = to_dmatrix(&p.eval(&r.value)).determinant().norm();
    }
    let sep = resolved_separation(&roots);
    Spectrum {
        roots,
        separation: sep,
        generic: sep > tol.eps_sep,
    }
}

/// Minimum pairwise distance; pairs whose error discs overlap count as
/// coincident.
fn resolved_separation(roots: &[Root]) -> f64 {
    roots
        .iter()
        .tuple_combinations()
        .map(|(a, b)| {
            let d = (a.value - b.value).norm();
            if a.error_bound + b.error_bound >= d {
                0.0
            } else {
                d
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Scale for relative residuals of `P(lambda)`.
fn eval_scale(p: &MonicMatPoly<Complex64>, lambda: Complex64) -> f64 {
    let n = p.degree();
    let l = lambda.norm();
    (0..=n)
        .map(|k| p.coeff(k).max_modulus().max(if k == 0 { 1.0 } else { 0.0 }) * l.powi((n - k) as i32))
        .sum::<f64>()
        .max(1.0)
}

/// Smallest right singular vector; a second singular value below
/// `gap * scale` means the kernel is not a line.
fn null_vector(a: &Mat<Complex64>, lambda: Complex64, gap: f64, scale: f64) -> Result<Vec<Complex64>> {
    let m = a.dim();
    let svd = to_dmatrix(a).svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sv = &svd.singular_values;
    let order: Vec<usize> = (0..m).sorted_by(|&i, &j| sv[i].total_cmp(&sv[j])).collect();
    if m >= 2 && sv[order[1]] <= gap * scale {
        return Err(Error::AmbiguousKernel {
            lambda: format!("{lambda}"),
        });
    }
    let k = order[0];
    Ok((0..m).map(|j| v_t[(k, j)].conj()).collect())
}

fn apply(a: &Mat<Complex64>, v: &[Complex64]) -> Vec<Complex64> {
    (0..a.dim())
        .map(|i| (0..a.dim()).map(|j| a[(i, j)] * v[j]).sum())
        .collect()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Unit `v` with `P(lambda) v = 0`, the smallest right singular vector.
pub fn eigenvector(
    p: &MonicMatPoly<Complex64>,
    lambda: Complex64,
    tol: &Tolerances,
) -> Result<Vec<Complex64>> {
    kernel_vector(&p.eval(&lambda), lambda, eval_scale(p, lambda), tol)
}

/// Unit `u` with `u^t P(lambda) = 0`.
pub fn left_eigenvector(
    p: &MonicMatPoly<Complex64>,
    lambda: Complex64,
    tol: &Tolerances,
) -> Result<Vec<Complex64>> {
    kernel_vector(&p.eval(&lambda).transpose(), lambda, eval_scale(p, lambda), tol)
}

fn kernel_vector(a: &Mat<Complex64>, lambda: Complex64, scale: f64, tol: &Tolerances) -> Result<Vec<Complex64>> {
    let v = null_vector(a, lambda, tol.eps_sep, scale)?;
    let residual = norm(&apply(a, &v));
    if residual > tol.tol_eig * scale {
        return Err(Error::EigenResidual {
            residual,
            tolerance: tol.tol_eig * scale,
        });
    }
    Ok(v)
}

/// `P(z) = Q(z) (z - a) + R` with constant remainder `R`.
pub fn right_divide<F: Field>(p: &MonicMatPoly<F>, a: &Mat<F>) -> (MonicMatPoly<F>, Mat<F>) {
    let n = p.degree();
    let m = p.dim();
    let mut q = Vec::with_capacity(n.saturating_sub(1));
    let mut prev = Mat::identity(m);
    for k in 1..n {
        let next = &p.coeff(k) + &(&prev * a);
        q.push(next.clone());
        prev = next;
    }
    let rem = if n == 0 {
        Mat::identity(m)
    } else {
        &p.coeff(n) + &(&prev * a)
    };
    (MonicMatPoly::new(m, q).expect("shapes are consistent"), rem)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RightDivisor {
    pub a: Mat<Complex64>,
    pub quotient: MonicMatPoly<Complex64>,
    /// Condition number of the eigenvector matrix.
    pub condition: f64,
    /// Relative norm of the division remainder.
    pub residual: f64,
}

/// `A = V diag(block) V^{-1}` built from eigenvectors of `P` for the given
/// eigenvalues; `z - A` then divides `P` on the right.
pub fn right_divisor(
    p: &MonicMatPoly<Complex64>,
    block: &[Complex64],
    tol: &Tolerances,
) -> Result<RightDivisor> {
    let m = p.dim();
    if block.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: block.len(),
        });
    }
    let mut v = DMatrix::zeros(m, m);
    for (j, &lambda) in block.iter().enumerate() {
        let e = eigenvector(p, lambda, tol)?;
        v.set_column(j, &DVector::from_vec(e));
    }
    let sv = v.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > tol.kappa_max {
        return Err(Error::DependentEigenvectors { condition });
    }
    let vinv = v
        .clone()
        .try_inverse()
        .ok_or(Error::DependentEigenvectors { condition })?;
    let d = DMatrix::from_diagonal(&DVector::from_column_slice(block));
    let a = from_dmatrix(&(&v * d * vinv));
    let (quotient, rem) = right_divide(p, &a);
    let scale = division_scale(p, &a);
    let residual = rem.max_modulus() / scale;
    if residual > tol.tol_div {
        return Err(Error::DivisionResidual {
            residual,
            tolerance: tol.tol_div,
        });
    }
    Ok(RightDivisor {
        a,
        quotient,
        condition,
        residual,
    })
}

fn division_scale(p: &MonicMatPoly<Complex64>, a: &Mat<Complex64>) -> f64 {
    let n = p.degree();
    let na = a.max_modulus() * a.dim() as f64;
    (0..=n)
        .map(|k| {
            let c = if k == 0 { 1.0 } else { p.coeff(k).max_modulus() };
            c * na.powi((n - k) as i32)
        })
        .sum::<f64>()
        .max(1.0)
}

/// `(z - A_1) ... (z - A_n)`.
pub fn product<F: Field>(factors: &[Mat<F>]) -> Result<MonicMatPoly<F>> {
    let Some(first) = factors.first() else {
        return Err(Error::InvalidArgument("empty factor list".into()));
    };
    let m = first.dim();
    let mut acc = MonicMatPoly::identity(m, 0);
    for a in factors {
        a.check_same_dim(first)?;
        acc = &acc * &MonicMatPoly::linear(a);
    }
    Ok(acc)
}

/// Ordered partition of a spectrum into `n` blocks of `m` eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderedPartition {
    blocks: Vec<Vec<Complex64>>,
}

impl OrderedPartition {
    pub fn new(blocks: Vec<Vec<Complex64>>) -> Result<Self> {
        let Some(m) = blocks.first().map(Vec::len) else {
            return Err(Error::InvalidArgument("partition has no blocks".into()));
        };
        if let Some(b) = blocks.iter().find(|b| b.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: b.len(),
            });
        }
        Ok(OrderedPartition { blocks })
    }

    /// Consecutive chunks of `values`.
    pub fn from_sequence(values: &[Complex64], m: usize) -> Result<Self> {
        if m == 0 || !values.len().is_multiple_of(m) {
            return Err(Error::InvalidArgument(format!(
                "{} eigenvalues cannot be split into blocks of {m}",
                values.len()
            )));
        }
        Self::new(values.chunks(m).map(<[Complex64]>::to_vec).collect())
    }

    pub fn blocks(&self) -> &[Vec<Complex64>] {
        &self.blocks
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn flatten(&self) -> Vec<Complex64> {
        self.blocks.iter().flatten().copied().collect()
    }

    /// Replace every entry by its nearest point of `reference`, requiring a
    /// bijection with each distance below half the reference separation.
    fn snap_to(&self, reference: &[Complex64]) -> Result<Self> {
        let flat = self.flatten();
        if flat.len() != reference.len() {
            return Err(Error::NotAReordering(format!(
                "{} values against {} eigenvalues",
                flat.len(),
                reference.len()
            )));
        }
        let radius = 0.5 * separation(reference);
        let mut used = vec![false; reference.len()];
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let mut nb = Vec::with_capacity(b.len());
            for x in b {
                let (idx, dist) = reference
                    .iter()
                    .enumerate()
                    .map(|(k, r)| (k, (r - x).norm()))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("reference is nonempty");
                if used[idx] || dist >= radius {
                    return Err(Error::NotAReordering(format!("value {x} matches no unused eigenvalue")));
                }
                used[idx] = true;
                nb.push(reference[idx]);
            }
            blocks.push(nb);
        }
        Ok(OrderedPartition { blocks })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub factors: Vec<Mat<Complex64>>,
    pub partition: OrderedPartition,
    /// Relative max-entry error of `prod (z - A_i)` against the input.
    pub residual: f64,
    /// Worst eigenvalue mismatch between `A_i` and its block.
    pub spectral_error: f64,
    /// Eigenvector-matrix condition numbers, one per peeled factor.
    pub conditions: Vec<f64>,
}

impl Factorization {
    pub fn product(&self) -> MonicMatPoly<Complex64> {
        product(&self.factors).expect("factorization is nonempty")
    }

    /// Wraps given linear factors; each block is the computed spectrum of its
    /// factor.
    pub fn from_factors(factors: Vec<Mat<Complex64>>) -> Result<Self> {
        let m = factors.first().map(Mat::dim).ok_or_else(|| Error::InvalidArgument("no factors".into()))?;
        let blocks = factors
            .iter()
            .map(|a| {
                if a.dim() != m {
                    return Err(Error::DimensionMismatch {
                        expected: m,
                        found: a.dim(),
                    });
                }
                Ok(eigenvalues(a))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut f = Factorization {
            factors,
            partition: OrderedPartition::new(blocks)?,
            residual: 0.0,
            spectral_error: 0.0,
            conditions: Vec::new(),
        };
        let target = f.product();
        f.refresh_diagnostics(&target);
        Ok(f)
    }

    fn refresh_diagnostics(&mut self, target: &MonicMatPoly<Complex64>) {
        self.residual = relative_distance(&self.product(), target);
        self.spectral_error = self
            .factors
            .iter()
            .zip(self.partition.blocks())
            .map(|(a, b)| match_spectra(&eigenvalues(a), b))
            .fold(0.0, f64::max);
    }
}

/// Max coefficient difference relative to `max(1, max |coeff of b|)`.
pub fn relative_distance(a: &MonicMatPoly<Complex64>, b: &MonicMatPoly<Complex64>) -> f64 {
    let n = a.degree().max(b.degree());
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for k in 1..=n {
        diff = diff.max((&a.coeff(k) - &b.coeff(k)).max_modulus());
        scale = scale.max(b.coeff(k).max_modulus());
    }
    diff / scale
}

/// Factor `P = (z - A_1) ... (z - A_n)` with `Sp(A_i) = partition[i]`.
pub fn factorize(
    p: &MonicMatPoly<Complex64>,
    partition: &OrderedPartition,
    tol: &Tolerances,
) -> Result<Factorization> {
    let n = p.degree();
    let m = p.dim();
    if partition.len() != n || partition.block_size() != m {
        return Err(Error::InvalidArgument(format!(
            "partition has {} blocks of {}, expected {n} blocks of {m}",
            partition.len(),
            partition.block_size()
        )));
    }
    let spec = spectrum(p, tol);
    if !spec.generic {
        return Err(Error::NonGenericSpectrum {
            separation: spec.separation,
            threshold: tol.eps_sep,
        });
    }
    let partition = partition.snap_to(&spec.values())?;

    let mut factors = vec![Mat::zeros(m); n];
    let mut conditions = Vec::with_capacity(n);
    let mut current = p.clone();
    for stage in (1..n).rev() {
        let div = right_divisor(&current, &partition.blocks()[stage], tol).map_err(|e| {
            Error::ChartExcluded {
                stage: stage + 1,
                source: Box::new(e),
            }
        })?;
        factors[stage] = div.a;
        conditions.push(div.condition);
        current = div.quotient;
    }
    factors[0] = -&current.coeff(1);
    conditions.reverse();

    let mut f = Factorization {
        factors,
        partition,
        residual: 0.0,
        spectral_error: 0.0,
        conditions,
    };
    f.refresh_diagnostics(p);
    Ok(f)
}

/// Exchange `lambda` in `Sp(A)` with `mu` in `Sp(B)` keeping
/// `(z - A)(z - B)` fixed:
/// `A' = A + (mu - lambda) T`, `B' = B + (lambda - mu) T`, `T = v u^t / (u^t v)`
/// where `A v = lambda v` and `u^t B = mu u^t`.
pub fn swap_adjacent(
    a: &Mat<Complex64>,
    b: &Mat<Complex64>,
    lambda: Complex64,
    mu: Complex64,
    tol: &Tolerances,
) -> Result<(Mat<Complex64>, Mat<Complex64>)> {
    a.check_same_dim(b)?;
    if lambda == mu {
        return Ok((a.clone(), b.clone()));
    }
    let m = a.dim();
    let shift = |x: &Mat<Complex64>, s: Complex64| x - &Mat::scalar(m, s);
    let scale = |x: &Mat<Complex64>, s: Complex64| (x.max_modulus() + s.norm()).max(1.0);
    let v = null_vector(&shift(a, lambda), lambda, tol.eps_sep, scale(a, lambda))?;
    let u = null_vector(&shift(b, mu).transpose(), mu, tol.eps_sep, scale(b, mu))?;
    // bilinear pairing, no conjugation
    let ip: Complex64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
    if ip.norm() < tol.eps_ip * norm(&u) * norm(&v) {
        return Err(Error::InnerProductDegenerate { value: ip.norm() });
    }
    let t = Mat::from_fn(m, |i, j| v[i] * u[j] / ip);
    let a2 = a + &t.scale(&(mu - lambda));
    let b2 = b + &t.scale(&(lambda - mu));
    Ok((a2, b2))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SwapStep {
    /// Exchange between factors `position` and `position + 1` (0-based).
    pub position: usize,
    pub lambda: Complex64,
    pub mu: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub factorization: Factorization,
    pub steps: Vec<SwapStep>,
}

/// Move a factorization to the chart of another ordered partition of the
/// same spectrum by adjacent swaps. Target eigenvalues are placed block by
/// block from the left, each bubbled leftwards from where it currently sits.
pub fn transition(
    f: &Factorization,
    target: &OrderedPartition,
    tol: &Tolerances,
) -> Result<Transition> {
    let reference = f.partition.flatten();
    let target = target.snap_to(&reference)?;
    if target.len() != f.partition.len() || target.block_size() != f.partition.block_size() {
        return Err(Error::NotAReordering("block shapes differ".into()));
    }
    let target_product = f.product();
    let mut blocks: Vec<Vec<Complex64>> = f.partition.blocks().to_vec();
    let mut factors = f.factors.clone();
    let mut steps = Vec::new();

    for i in 0..blocks.len() {
        let wanted = target.blocks()[i].clone();
        for &t in &wanted {
            if blocks[i].contains(&t) {
                continue;
            }
            let mut j = (i + 1..blocks.len())
                .find(|&j| blocks[j].contains(&t))
                .expect("snapped target is a reordering");
            while j > i {
                let left = j - 1;
                let partner_pos = blocks[left]
                    .iter()
                    .position(|x| !wanted.contains(x))
                    .unwrap_or(0);
                let lambda = blocks[left][partner_pos];
                let t_pos = blocks[j].iter().position(|x| *x == t).expect("t is in block j");
                let (a2, b2) = swap_adjacent(&factors[left], &factors[j], lambda, t, tol).map_err(|e| {
                    Error::SwapFailed {
                        step: steps.len(),
                        source: Box::new(e),
                    }
                })?;
                factors[left] = a2;
                factors[j] = b2;
                blocks[left][partner_pos] = t;
                blocks[j][t_pos] = lambda;
                steps.push(SwapStep {
                    position: left,
                    lambda,
                    mu: t,
                });
                j = left;
            }
        }
    }

    let mut out = Factorization {
        factors,
        partition: target,
        residual: 0.0,
        spectral_error: 0.0,
        conditions: f.conditions.clone(),
    };
    out.refresh_diagnostics(&target_product);
    Ok(Transition {
        factorization: out,
        steps,
    })
}
