//! Seeded sample generators shared by the property suites and the CLI.
//!
//! All generators draw from [`SampleRng`], a ChaCha stream, so a seed
//! reproduces the same samples on every platform.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mat::Mat;
use crate::matpoly::{MatPoly, MonicMatPoly};
use crate::poly::Poly;
use crate::{Complex64, Rational};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn fill<F: crate::Field>(m: usize, mut draw: impl FnMut() -> F) -> Mat<F> {
    let rows = (0..m).map(|_| (0..m).map(|_| draw()).collect()).collect();
    Mat::from_rows(rows).expect("square by construction")
}

/// Small rational `p/q` with `|p| <= 5`, `1 <= q <= 3`.
pub fn rational(rng: &mut SampleRng) -> Rational {
    let num: i64 = rng.gen_range(-5..=5);
    let den: i64 = rng.gen_range(1..=3);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Small nonzero integer-valued rational.
pub fn nonzero_int(rng: &mut SampleRng) -> Rational {
    loop {
        let v: i64 = rng.gen_range(-3..=3);
        if v != 0 {
            return Rational::from_integer(v.into());
        }
    }
}

pub fn rat_poly(rng: &mut SampleRng, max_deg: usize) -> Poly<Rational> {
    let deg = rng.gen_range(0..=max_deg);
    Poly::new((0..=deg).map(|_| rational(rng)).collect())
}

pub fn rat_mat(rng: &mut SampleRng, m: usize) -> Mat<Rational> {
    fill(m, || rational(rng))
}

/// Random `m x m` polynomial matrix with entries of degree `<= max_deg`.
/// With `rank_deficient`, the last row is a polynomial combination of the others.
pub fn rat_matpoly(
    rng: &mut SampleRng,
    m: usize,
    max_deg: usize,
    rank_deficient: bool,
) -> MatPoly<Rational> {
    let mut rows: Vec<Vec<Poly<Rational>>> = (0..m)
        .map(|_| (0..m).map(|_| rat_poly(rng, max_deg)).collect())
        .collect();
    if rank_deficient && m >= 2 {
        let c = rat_poly(rng, 1);
        let last: Vec<Poly<Rational>> = (0..m).map(|j| &c * &rows[0][j]).collect();
        rows[m - 1] = last;
    }
    MatPoly::from_rows(rows).expect("square by construction")
}

/// Product of `steps` random elementary matrices over `Q[z]`: row additions
/// with polynomial multipliers, swaps and nonzero scalar scalings.
pub fn unimodular(rng: &mut SampleRng, m: usize, steps: usize, max_deg: usize) -> MatPoly<Rational> {
    let mut acc = MatPoly::identity(m);
    for _ in 0..steps {
        let mut e = MatPoly::identity(m);
        match rng.gen_range(0..4) {
            0 if m >= 2 => {
                let i = rng.gen_range(0..m);
                let j = (i + rng.gen_range(1..m)) % m;
                e.set(i, i, Poly::zero());
                e.set(j, j, Poly::zero());
                e.set(i, j, Poly::one());
                e.set(j, i, Poly::one());
            }
            1 => {
                let i = rng.gen_range(0..m);
                e.set(i, i, Poly::constant(nonzero_int(rng)));
            }
            _ if m >= 2 => {
                let i = rng.gen_range(0..m);
                let j = (i + rng.gen_range(1..m)) % m;
                e.set(i, j, rat_poly(rng, max_deg));
            }
            _ => {}
        }
        acc = &acc * &e;
    }
    acc
}

pub fn rat_monic(rng: &mut SampleRng, m: usize, n: usize) -> MonicMatPoly<Rational> {
    let coeffs = (0..n).map(|_| rat_mat(rng, m)).collect();
    MonicMatPoly::new(m, coeffs).expect("shapes are consistent")
}

pub fn complex(rng: &mut SampleRng, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

pub fn complex_mat(rng: &mut SampleRng, m: usize, scale: f64) -> Mat<Complex64> {
    fill(m, || complex(rng, scale))
}

pub fn complex_monic(rng: &mut SampleRng, m: usize, n: usize, scale: f64) -> MonicMatPoly<Complex64> {
    let coeffs = (0..n).map(|_| complex_mat(rng, m, scale)).collect();
    MonicMatPoly::new(m, coeffs).expect("shapes are consistent")
}

pub fn real_mat(rng: &mut SampleRng, m: usize, scale: f64) -> Mat<f64> {
    fill(m, || rng.gen_range(-scale..scale))
}

pub fn real_monic(rng: &mut SampleRng, m: usize, n: usize, scale: f64) -> MonicMatPoly<f64> {
    let coeffs = (0..n).map(|_| real_mat(rng, m, scale)).collect();
    MonicMatPoly::new(m, coeffs).expect("shapes are consistent")
}
