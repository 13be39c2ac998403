use matpoly::leaves::{
    classify, closure_contains, drinfeld_coordinates, drinfeld_numeric, monopole_k, sl_normalize, sl_reduce,
    series_det, LeafDescriptor, DEFAULT_POLE_SEPARATION,
};
use matpoly::random;
use matpoly::{Complex64, Error, Mat, MonicMatPoly, Poly, RatMat, RatMonic, RatPoly, Rational};
use proptest::prelude::*;

fn r(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn invertible(rng: &mut random::SampleRng, m: usize) -> (RatMat, RatMat) {
    loop {
        let g = random::rat_mat(rng, m);
        let gp = matpoly::MatPoly::from_constant(&g);
        let det = gp.det().coeff(0);
        if det != r(0) {
            // adjugate over det via the cofactor matrix
            let inv = Mat::from_fn(m, |i, j| {
                let rows: Vec<usize> = (0..m).filter(|&k| k != j).collect();
                let cols: Vec<usize> = (0..m).filter(|&k| k != i).collect();
                let minor = if m == 1 { r(1) } else { gp.minor(&rows, &cols).unwrap().coeff(0) };
                let sign = if (i + j) % 2 == 0 { r(1) } else { r(-1) };
                sign * minor / det.clone()
            });
            return (g, inv);
        }
    }
}

#[test]
fn squarefree_determinant_gives_generic_leaf() {
    let mut rng = random::rng(31);
    for _ in 0..10 {
        let p = random::rat_monic(&mut rng, 3, 2);
        let det = p.det();
        if !det.gcd(&det.derivative()).unwrap().is_one() {
            continue;
        }
        let leaf = classify(&p).unwrap();
        assert_eq!(leaf.invariants[0], det);
        assert!(leaf.invariants[1..].iter().all(Poly::is_one));
        assert_eq!(leaf.dimension, 2 * 6);
    }
}

#[test]
fn sl_reduce_frozen() {
    let mk = |ds: Vec<RatPoly>| LeafDescriptor {
        m: ds.len(),
        n: 0,
        determinant: ds.iter().fold(RatPoly::one(), |a, d| &a * d),
        invariants: ds,
        type_alpha: vec![],
        dimension: 0,
    };
    let z2 = RatPoly::monomial(r(1), 2);
    assert_eq!(sl_reduce(&mk(vec![z2.clone(), RatPoly::one()])).unwrap().q, vec![z2]);
    let broken = mk(vec![RatPoly::monomial(r(1), 1), RatPoly::monomial(r(1), 2)]);
    assert_eq!(sl_reduce(&broken), Err(Error::InexactDivision));
}

#[test]
fn numeric_residue_matches_partial_fractions() {
    let mut rng = random::rng(33);
    for _ in 0..10 {
        let p = random::complex_monic(&mut rng, 2, 1, 1.0);
        let chart = drinfeld_numeric(&p, DEFAULT_POLE_SEPARATION).unwrap();
        let c = &chart.components[0];
        let p1 = &p.coeffs()[0];
        // a_1 = z + p22, b_1 = p21
        let pole = -p1[(1, 1)];
        assert_eq!(c.poles.len(), 1);
        assert!((c.poles[0].pole - pole).norm() < 1e-12);
        assert!((c.poles[0].residue - p1[(1, 0)]).norm() < 1e-12);
        assert_eq!(c.k, 1);
    }
}

#[test]
fn numeric_poles_too_close_are_rejected() {
    // a_1 = (z - 1)^2 for m = 2, n = 2
    let c = |x: f64| Complex64::new(x, 0.0);
    let p = MonicMatPoly::new(
        2,
        vec![Mat::diag(&[c(0.0), c(-2.0)]), Mat::from_fn(2, |i, j| match (i, j) { (1, 1) => c(1.0), (1, 0) => c(1.0), _ => c(0.0) })],
    )
    .unwrap();
    assert!(matches!(
        drinfeld_numeric(&p, DEFAULT_POLE_SEPARATION),
        Err(Error::PolesTooClose { .. })
    ));
}

#[test]
fn sl_normalize_truncations_agree() {
    let mut rng = random::rng(34);
    let p = random::rat_monic(&mut rng, 2, 2);
    let short = sl_normalize(&p, None);
    let long = sl_normalize(&p, Some(8));
    assert_eq!(short.len(), 5);
    assert_eq!(&long[..5], &short[..]);
    let det = series_det(&long);
    assert_eq!(det[0], r(1));
    assert!(det[1..].iter().all(|c| *c == r(0)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn descriptor_invariants(seed in any::<u64>(), m in 1usize..=3, n in 1usize..=3) {
        let mut rng = random::rng(seed);
        let p = random::rat_monic(&mut rng, m, n);
        let leaf = classify(&p).unwrap();
        let degs: usize = leaf.invariants.iter().map(|d| d.degree().finite().unwrap()).sum();
        prop_assert_eq!(degs, m * n);
        prop_assert_eq!(&leaf.determinant, &p.det());
        prop_assert!(leaf.dimension >= 0 && leaf.dimension % 2 == 0);
        prop_assert_eq!(leaf.type_alpha.iter().sum::<i64>(), 0);
    }

    #[test]
    fn conjugation_preserves_the_leaf(seed in any::<u64>(), m in 2usize..=3, n in 1usize..=2) {
        let mut rng = random::rng(seed);
        let p = random::rat_monic(&mut rng, m, n);
        let (g, g_inv) = invertible(&mut rng, m);
        let q = MonicMatPoly::new(m, p.coeffs().iter().map(|c| &(&g * c) * &g_inv).collect()).unwrap();
        prop_assert_eq!(classify(&q).unwrap(), classify(&p).unwrap());
    }

    #[test]
    fn nilpotent_determinant_gives_powers_of_z(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        // strictly upper triangular coefficients force det = z^{mn}
        let m = 3;
        let coeffs: Vec<RatMat> = (0..2)
            .map(|_| {
                let full = random::rat_mat(&mut rng, m);
                Mat::from_fn(m, |i, j| if i < j { full[(i, j)].clone() } else { r(0) })
            })
            .collect();
        let p = MonicMatPoly::new(m, coeffs).unwrap();
        let leaf = classify(&p).unwrap();
        for d in &leaf.invariants {
            let k = d.degree().finite().unwrap();
            prop_assert_eq!(d, &RatPoly::monomial(r(1), k));
        }
    }

    #[test]
    fn monopole_k_recomputed(seed in any::<u64>(), m in 2usize..=3, n in 1usize..=2) {
        let mut rng = random::rng(seed);
        let p = random::rat_monic(&mut rng, m, n);
        let leaf = classify(&p).unwrap();
        let chart = drinfeld_coordinates(&p).unwrap();
        let r_deg: Vec<i64> = leaf.invariants.iter().map(|d| d.degree().finite().unwrap() as i64).collect();
        for (idx, comp) in chart.components.iter().enumerate() {
            let i = idx + 1;
            let expected = (n * (m - i)) as i64 - r_deg[m - i..].iter().sum::<i64>();
            prop_assert_eq!(comp.k, expected);
            prop_assert!(comp.a.is_monic());
            prop_assert_eq!(comp.a.degree().finite(), Some(n * (m - i)));
            prop_assert!(comp.b.degree() < comp.a.degree());
        }
        prop_assert_eq!(monopole_k(&leaf).len(), m - 1);
    }

    #[test]
    fn closure_is_reflexive_on_random_leaves(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let p: RatMonic = random::rat_monic(&mut rng, 2, 2);
        let leaf = classify(&p).unwrap();
        prop_assert!(closure_contains(&leaf, &leaf).unwrap());
    }
}
