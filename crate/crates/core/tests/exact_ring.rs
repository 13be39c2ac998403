use matpoly::random;
use matpoly::{Error, Mat, MatPoly, Poly, RatMatPoly, RatPoly, Rational};
use proptest::prelude::*;

fn r(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn p(c: &[i64]) -> RatPoly {
    Poly::new(c.iter().map(|&v| r(v)).collect())
}

#[test]
fn divmod_examples() {
    assert_eq!(p(&[-1, 0, 1]).div_rem(&p(&[-1, 1])).unwrap(), (p(&[1, 1]), p(&[])));
    assert_eq!(p(&[0, 1]).div_rem(&p(&[0, 0, 1])).unwrap(), (p(&[]), p(&[0, 1])));
    assert_eq!(p(&[0, 2, 0, 1]).div_rem(&p(&[1, 0, 1])).unwrap(), (p(&[0, 1]), p(&[0, 1])));
    assert_eq!(p(&[1]).div_rem(&p(&[])), Err(Error::DivisionByZeroPolynomial));
}

#[test]
fn gcd_examples() {
    assert_eq!(p(&[0, 0, 1]).gcd(&p(&[0, -1, 1])).unwrap(), p(&[0, 1]));
    assert_eq!(p(&[4, 2]).gcd(&p(&[])).unwrap(), p(&[2, 1]));
    assert!(p(&[-1, 1]).gcd(&p(&[-2, 1])).unwrap().is_one());
    assert_eq!(p(&[]).gcd(&p(&[])), Err(Error::GcdOfZeros));
}

#[test]
fn det_examples() {
    let zn = MatPoly::scalar(3, p(&[0, 0, 1]));
    assert_eq!(zn.det(), RatPoly::monomial(r(1), 6));
    let d = MatPoly::diag(&[p(&[0, 0, 1]), p(&[0, -1, 1])]);
    assert_eq!(d.det(), p(&[0, 0, 0, -1, 1]));
    assert_eq!(p(&[2, 2]).monic(), p(&[1, 1]));
}

#[test]
fn eval_of_diagonal() {
    let d = MatPoly::diag(&[p(&[0, 1]), p(&[0, 1])]);
    assert_eq!(d.eval(&r(2)), Mat::diag(&[r(2), r(2)]));
}

#[test]
fn cofactor_oracle_on_random_3x3() {
    let mut rng = random::rng(11);
    for _ in 0..20 {
        let m = random::rat_matpoly(&mut rng, 3, 2, false);
        assert_eq!(m.det_bareiss(), m.det_cofactor());
    }
}

#[test]
fn mismatched_dimensions_are_rejected() {
    let a = RatMatPoly::identity(2);
    let b = RatMatPoly::identity(3);
    assert!(matches!(a.try_mul(&b), Err(Error::DimensionMismatch { .. })));
    assert!(matches!(a.try_add(&b), Err(Error::DimensionMismatch { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divmod_reconstructs(seed in any::<u64>(), da in 0usize..6, db in 0usize..4) {
        let mut rng = random::rng(seed);
        let a = random::rat_poly(&mut rng, da);
        let b = random::rat_poly(&mut rng, db);
        prop_assume!(!b.is_zero());
        let (q, rem) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &rem, a);
        prop_assert!(rem.degree() < b.degree());
    }

    #[test]
    fn gcd_divides_and_is_symmetric(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let common = random::rat_poly(&mut rng, 2);
        let a = &random::rat_poly(&mut rng, 3) * &common;
        let b = &random::rat_poly(&mut rng, 3) * &common;
        prop_assume!(!a.is_zero() || !b.is_zero());
        let g = a.gcd(&b).unwrap();
        prop_assert!(g.divides(&a) && g.divides(&b));
        prop_assert_eq!(&g, &b.gcd(&a).unwrap());
        if !common.is_zero() {
            prop_assert!(common.divides(&g));
        }
    }

    #[test]
    fn det_is_multiplicative(seed in any::<u64>(), m in 1usize..=4, deg in 0usize..=3) {
        let mut rng = random::rng(seed);
        let a = random::rat_matpoly(&mut rng, m, deg, false);
        let b = random::rat_matpoly(&mut rng, m, deg, false);
        prop_assert_eq!((&a * &b).det(), &a.det() * &b.det());
    }

    #[test]
    fn eval_is_a_ring_homomorphism(seed in any::<u64>(), m in 1usize..=3) {
        let mut rng = random::rng(seed);
        let a = random::rat_matpoly(&mut rng, m, 2, false);
        let b = random::rat_matpoly(&mut rng, m, 2, false);
        let z0 = random::rational(&mut rng);
        prop_assert_eq!((&a * &b).eval(&z0), &a.eval(&z0) * &b.eval(&z0));
        prop_assert_eq!((&a + &b).eval(&z0), &a.eval(&z0) + &b.eval(&z0));
    }
}
