use itertools::Itertools;
use matpoly::poisson::symbolic::{
    casimir_check, det_coefficients_symbolic, point_coordinates, poisson_bracket_at, product_map_poisson_check,
    trace_coefficient,
};
use matpoly::poisson::{
    bracket_tt, coset_solve, dressing_field, flow_integrate, hamiltonian_field, kks_bracket, CoordIndex,
    FlowOptions, PlusPolyMat,
};
use matpoly::random;
use matpoly::spectral::{match_spectra, spectrum, Tolerances};
use matpoly::{Mat, MonicMatPoly, RatMonic, Rational};
use num_traits::Zero;
use proptest::prelude::*;

/// `{t_ij(u), t_kl(v)} = (t_kj(u) t_il(v) - t_kj(v) t_il(u)) / (u - v)`
/// expanded with `1/(u-v) = sum_p v^p u^{-p-1}`: the `u^{-r} v^{-s}`
/// coefficient is `sum_{p<r} c(r-p-1, s+p)` with
/// `c(a, b) = t_kj^(a) t_il^(b) - t_kj^(b) t_il^(a)`.
fn omega_oracle(p: &RatMonic, a: CoordIndex, b: CoordIndex) -> Rational {
    let t = |q: usize, i: usize, j: usize| -> Rational {
        if q == 0 {
            if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }
        } else if q > p.degree() {
            Rational::zero()
        } else {
            p.coeffs()[q - 1][(i - 1, j - 1)].clone()
        }
    };
    let c = |x: usize, y: usize| t(x, b.i, a.j) * t(y, a.i, b.j) - t(y, b.i, a.j) * t(x, a.i, b.j);
    (0..a.r).fold(Rational::zero(), |acc, q| acc + c(a.r - q - 1, b.r + q))
}

#[test]
fn bracket_table_matches_omega_expansion() {
    let mut rng = random::rng(41);
    for _ in 0..5 {
        let p = random::rat_monic(&mut rng, 2, 2);
        for a in CoordIndex::all(2, 2) {
            for b in CoordIndex::all(2, 2) {
                assert_eq!(bracket_tt(&p, a, b).unwrap(), omega_oracle(&p, a, b), "{a:?} {b:?}");
            }
        }
    }
}

#[test]
fn hamiltonian_fields_pair_to_brackets() {
    let mut rng = random::rng(42);
    for (m, n) in [(2, 1), (2, 2), (3, 2), (2, 3)] {
        let p = random::rat_monic(&mut rng, m, n);
        for a in CoordIndex::all(m, n) {
            let xi = hamiltonian_field(&p, a).unwrap();
            for b in CoordIndex::all(m, n) {
                assert_eq!(xi.component(b), bracket_tt(&p, a, b).unwrap());
            }
        }
    }
}

#[test]
fn truncation_is_consistent() {
    let mut rng = random::rng(43);
    let p = random::rat_monic(&mut rng, 2, 2);
    let bigger = p.pad_to(3);
    for a in CoordIndex::all(2, 2) {
        for b in CoordIndex::all(2, 2) {
            assert_eq!(bracket_tt(&p, a, b).unwrap(), bracket_tt(&bigger, a, b).unwrap());
        }
    }
}

#[test]
fn coset_solution_reprojects() {
    let mut rng = random::rng(44);
    for (m, n) in [(2, 2), (2, 3), (3, 3)] {
        let p = random::rat_monic(&mut rng, m, n);
        let b = PlusPolyMat::new((0..n).map(|_| random::rat_mat(&mut rng, m)).collect());
        let sol = coset_solve(&p, &b).unwrap();
        // (PA)_+ at z^k: sum_i P_i A_{k+i}
        for k in 0..n {
            let pa = (0..n - k).fold(Mat::zeros(m), |acc, i| &acc + &(&p.coeff(i) * &sol.a.coeff(k + i, m)));
            assert_eq!(pa, b.coeff(k, m));
        }
    }
}

#[test]
fn identity_point_coset() {
    let mut rng = random::rng(45);
    let p = RatMonic::identity(2, 3);
    let b = PlusPolyMat::new((0..3).map(|_| random::rat_mat(&mut rng, 2)).collect());
    let sol = coset_solve(&p, &b).unwrap();
    assert_eq!(sol.a, b);
    assert_eq!(sol.c, b);
}

#[test]
fn casimir_examples() {
    let mut rng = random::rng(46);
    let p = random::rat_monic(&mut rng, 2, 1);
    for s in 1..=2 {
        for b in CoordIndex::all(2, 1) {
            assert!(casimir_check(&p, s, b).unwrap().is_zero());
        }
    }
    let d = MonicMatPoly::new(2, vec![Mat::diag(&[Rational::from_integer(3.into()), Rational::zero()])]).unwrap();
    for b in CoordIndex::all(2, 1) {
        assert!(casimir_check(&d, 1, b).unwrap().is_zero());
    }
    assert!(casimir_check(&p, 3, CoordIndex::new(1, 1, 1)).is_err());
}

#[test]
fn conjugation_invariants_commute() {
    // trace and determinant coefficients Poisson-commute pairwise
    let mut rng = random::rng(47);
    let (m, n) = (2, 2);
    for _ in 0..5 {
        let p = random::rat_monic(&mut rng, m, n);
        let mut funcs: Vec<_> = (1..=n).map(|r| trace_coefficient::<Rational>(m, r)).collect();
        funcs.extend(det_coefficients_symbolic::<Rational>(m, n).into_iter().skip(1));
        for (f, g) in funcs.iter().tuple_combinations() {
            assert!(poisson_bracket_at(f, g, &p).is_zero());
        }
    }
}

#[test]
fn single_factor_product_is_kks() {
    let mut rng = random::rng(48);
    let a = random::rat_mat(&mut rng, 2);
    let coords: Vec<_> = CoordIndex::all(2, 1)
        .into_iter()
        .map(|c| matpoly::poisson::symbolic::coordinate::<Rational>(2, c))
        .collect();
    for (f, g) in coords.iter().tuple_combinations() {
        assert!(product_map_poisson_check(std::slice::from_ref(&a), f, g).unwrap().is_zero());
    }
}

#[test]
fn numeric_gradient_matches_finite_differences() {
    // exact symbolic gradient of det coefficients against central differences
    let mut rng = random::rng(49);
    let p = random::real_monic(&mut rng, 2, 2, 1.0);
    let point = point_coordinates(&p);
    let h = 1e-6;
    for c in det_coefficients_symbolic::<f64>(2, 2).iter().skip(1) {
        for (v, g) in c.gradient_at(&point) {
            let mut up = point.clone();
            let mut down = point.clone();
            up[v] += h;
            down[v] -= h;
            let fd = (c.eval(&up) - c.eval(&down)) / (2.0 * h);
            assert!((fd - g).abs() <= 1e-4 * g.abs().max(1.0), "{fd} vs {g}");
        }
    }
}

#[test]
fn flow_keeps_the_spectrum() {
    let tol = Tolerances::default();
    let mut rng = random::rng(50);
    let p = random::complex_monic(&mut rng, 2, 2, 0.5);
    let a = PlusPolyMat::new(vec![random::complex_mat(&mut rng, 2, 0.5), random::complex_mat(&mut rng, 2, 0.5)]);
    let res = flow_integrate(&p, &a, &FlowOptions::new(1.0, 1e-3)).unwrap();
    let moved = (&res.endpoint().coeffs()[0] - &p.coeffs()[0]).max_modulus();
    assert!(moved > 1e-3, "the flow should move the point");
    let err = match_spectra(&spectrum(&p, &tol).values(), &spectrum(res.endpoint(), &tol).values());
    assert!(err < 1e-6);
    let scalar = flow_integrate(&p, &PlusPolyMat::monomial(Mat::identity(2), 0), &FlowOptions::new(1.0, 0.1)).unwrap();
    assert_eq!(scalar.endpoint(), &p);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn antisymmetry(seed in any::<u64>(), m in 1usize..=3, n in 1usize..=3) {
        let mut rng = random::rng(seed);
        let p = random::rat_monic(&mut rng, m, n);
        for a in CoordIndex::all(m, n) {
            for b in CoordIndex::all(m, n) {
                prop_assert_eq!(bracket_tt(&p, a, b).unwrap(), -bracket_tt(&p, b, a).unwrap());
            }
        }
    }

    #[test]
    fn kks_is_antisymmetric(seed in any::<u64>(), m in 1usize..=3) {
        let mut rng = random::rng(seed);
        let x = random::rat_mat(&mut rng, m);
        for (i, j, k, l) in itertools::iproduct!(1..=m, 1..=m, 1..=m, 1..=m) {
            prop_assert_eq!(kks_bracket(&x, (i, j), (k, l)).unwrap(), -kks_bracket(&x, (k, l), (i, j)).unwrap());
        }
    }

    #[test]
    fn polynomial_hamiltonians_of_high_degree_act_trivially(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = random::rng(seed);
        let p = random::rat_monic(&mut rng, 2, n);
        let a = PlusPolyMat::monomial(random::rat_mat(&mut rng, 2), n + seed as usize % 2);
        prop_assert!(dressing_field(&p, &a).is_zero());
    }
}
