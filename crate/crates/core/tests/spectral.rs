use itertools::Itertools;
use matpoly::random;
use matpoly::spectral::{
    eigenvalues, eigenvector, factorize, left_eigenvector, match_spectra, product, relative_distance, right_divide,
    right_divisor, spectrum, swap_adjacent, transition, OrderedPartition, Tolerances,
};
use matpoly::{Complex64, ComplexMat, ComplexMonic, Error, Mat};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

/// `[[0, I], [-P_2, -P_1]]` for degree 2.
fn block_companion(p: &ComplexMonic) -> ComplexMat {
    let m = p.dim();
    Mat::from_fn(2 * m, |i, j| match (i < m, j < m) {
        (true, true) => Complex64::new(0.0, 0.0),
        (true, false) => if j - m == i { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) },
        (false, true) => -p.coeffs()[1][(i - m, j)],
        (false, false) => -p.coeffs()[0][(i - m, j - m)],
    })
}

fn apply(a: &ComplexMat, v: &[Complex64]) -> Vec<Complex64> {
    (0..a.dim()).map(|i| (0..a.dim()).map(|j| a[(i, j)] * v[j]).sum()).collect()
}

fn first_chart(p: &ComplexMonic) -> Option<matpoly::spectral::Factorization> {
    let values = spectrum(p, &tol()).values();
    values
        .iter()
        .copied()
        .permutations(values.len())
        .find_map(|perm| factorize(p, &OrderedPartition::from_sequence(&perm, p.dim()).ok()?, &tol()).ok())
}

#[test]
fn spectrum_matches_block_companion() {
    let mut rng = random::rng(61);
    for _ in 0..20 {
        let p = random::complex_monic(&mut rng, 2, 2, 1.0);
        let roots = spectrum(&p, &tol()).values();
        let oracle = eigenvalues(&block_companion(&p));
        assert!(match_spectra(&roots, &oracle) < 1e-9);
    }
}

#[test]
fn eigenvector_residuals() {
    let mut rng = random::rng(62);
    for _ in 0..20 {
        let p = random::complex_monic(&mut rng, 2, 2, 1.0);
        for lambda in spectrum(&p, &tol()).values() {
            let v = eigenvector(&p, lambda, &tol()).unwrap();
            assert!(apply(&p.eval(&lambda), &v).iter().map(|c| c.norm()).fold(0.0, f64::max) <= 1e-9);
            let u = left_eigenvector(&p, lambda, &tol()).unwrap();
            assert!(apply(&p.eval(&lambda).transpose(), &u).iter().map(|c| c.norm()).fold(0.0, f64::max) <= 1e-9);
        }
    }
}

#[test]
fn right_divisor_remainder() {
    let mut rng = random::rng(63);
    for _ in 0..20 {
        let p = random::complex_monic(&mut rng, 2, 2, 1.0);
        let values = spectrum(&p, &tol()).values();
        let div = right_divisor(&p, &values[..2], &tol()).unwrap();
        let (_, rem) = right_divide(&p, &div.a);
        assert!(rem.max_modulus() <= 1e-9);
    }
}

#[test]
fn scalar_polynomial_eigenvalue_is_ambiguous() {
    // P = (z - 1)(z - 2) I has two-dimensional kernels
    let c = |x: f64| Complex64::new(x, 0.0);
    let p = product(&[Mat::scalar(2, c(1.0)), Mat::scalar(2, c(2.0))]).unwrap();
    assert!(matches!(eigenvector(&p, c(1.0), &tol()), Err(Error::AmbiguousKernel { .. })));
    assert!(!spectrum(&p, &tol()).generic);
}

#[test]
fn factorization_of_degree_three() {
    let mut rng = random::rng(64);
    for _ in 0..10 {
        let p = random::complex_monic(&mut rng, 2, 3, 1.0);
        let f = first_chart(&p).unwrap();
        assert!(f.residual <= 1e-8);
        assert!(f.spectral_error <= 1e-7);
    }
}

#[test]
fn product_of_diagonals() {
    let c = |x: f64| Complex64::new(x, 0.0);
    let p = product(&[Mat::diag(&[c(1.0), c(2.0)]), Mat::diag(&[c(3.0), c(4.0)])]).unwrap();
    assert_eq!(p.coeffs()[0], Mat::diag(&[c(-4.0), c(-6.0)]));
    assert_eq!(p.coeffs()[1], Mat::diag(&[c(3.0), c(8.0)]));
    assert!(matches!(product::<f64>(&[]), Err(Error::InvalidArgument(_))));
}

#[test]
fn factorize_inverts_product() {
    let mut rng = random::rng(65);
    for _ in 0..10 {
        let factors: Vec<ComplexMat> = (0..2).map(|_| random::complex_mat(&mut rng, 2, 1.0)).collect();
        let p = product(&factors).unwrap();
        let blocks: Vec<Vec<Complex64>> = factors.iter().map(eigenvalues).collect();
        let f = factorize(&p, &OrderedPartition::new(blocks).unwrap(), &tol()).unwrap();
        for (a, b) in f.factors.iter().zip(&factors) {
            assert!((a - b).max_modulus() < 1e-8);
        }
    }
}

#[test]
fn identity_and_single_transitions() {
    let mut rng = random::rng(66);
    let p = random::complex_monic(&mut rng, 2, 2, 1.0);
    let f = first_chart(&p).unwrap();
    let same = transition(&f, &f.partition, &tol()).unwrap();
    assert!(same.steps.is_empty());
    assert_eq!(same.factorization.factors, f.factors);

    let mut blocks = f.partition.blocks().to_vec();
    let (x, y) = (blocks[0][0], blocks[1][1]);
    blocks[0][0] = y;
    blocks[1][1] = x;
    let one = transition(&f, &OrderedPartition::new(blocks).unwrap(), &tol()).unwrap();
    assert_eq!(one.steps.len(), 1);
    assert!(relative_distance(&one.factorization.product(), &p) < 1e-9);
}

#[test]
fn transition_rejects_foreign_values() {
    let mut rng = random::rng(67);
    let p = random::complex_monic(&mut rng, 2, 2, 1.0);
    let f = first_chart(&p).unwrap();
    let bogus = OrderedPartition::from_sequence(&[Complex64::new(100.0, 0.0); 4], 2).unwrap();
    assert!(matches!(transition(&f, &bogus, &tol()), Err(Error::NotAReordering(_))));
}

#[test]
fn charts_cover_generic_polynomials() {
    let mut rng = random::rng(68);
    for _ in 0..50 {
        let p = random::complex_monic(&mut rng, 2, 2, 1.0);
        assert!(first_chart(&p).is_some());
    }
}

#[test]
fn left_eigenvectors_annihilate_other_eigenvectors() {
    let mut rng = random::rng(69);
    for _ in 0..20 {
        let b = random::complex_mat(&mut rng, 2, 1.0);
        let lin = matpoly::MonicMatPoly::linear(&b);
        let ev = eigenvalues(&b);
        let u = left_eigenvector(&lin, ev[0], &tol()).unwrap();
        let w = eigenvector(&lin, ev[1], &tol()).unwrap();
        let ip: Complex64 = u.iter().zip(&w).map(|(x, y)| x * y).sum();
        assert!(ip.norm() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn swap_exchanges_spectra(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let a = random::complex_mat(&mut rng, 2, 1.0);
        let b = random::complex_mat(&mut rng, 2, 1.0);
        let (sa, sb) = (eigenvalues(&a), eigenvalues(&b));
        let (a2, b2) = swap_adjacent(&a, &b, sa[0], sb[1], &tol()).unwrap();
        prop_assert!(match_spectra(&eigenvalues(&a2), &[sb[1], sa[1]]) < 1e-8);
        prop_assert!(match_spectra(&eigenvalues(&b2), &[sb[0], sa[0]]) < 1e-8);
        let before = product(&[a.clone(), b.clone()]).unwrap();
        let after = product(&[a2, b2]).unwrap();
        prop_assert!(relative_distance(&after, &before) <= 1e-9);
    }

    #[test]
    fn transitions_compose_to_identity(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let p = random::complex_monic(&mut rng, 2, 2, 1.0);
        let f = first_chart(&p).unwrap();
        let values = f.partition.flatten();
        let targets: Vec<OrderedPartition> = values
            .iter()
            .copied()
            .permutations(4)
            .filter_map(|perm| OrderedPartition::from_sequence(&perm, 2).ok())
            .collect();
        let mut checked = 0;
        for target in targets {
            let Ok(there) = transition(&f, &target, &tol()) else { continue };
            let Ok(back) = transition(&there.factorization, &f.partition, &tol()) else { continue };
            for (x, y) in back.factorization.factors.iter().zip(&f.factors) {
                prop_assert!((x - y).max_modulus() <= 1e-7);
            }
            checked += 1;
        }
        prop_assert!(checked > 0);
    }
}
