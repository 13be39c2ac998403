//! Smith normal form over `F[z]`.
//!
//! Elimination pivots on the lowest-degree entry of the trailing block,
//! clears its row and column by Euclidean division, and forces divisibility of
//! the remaining block before recursing. The diagonal comes out as
//! `e_1 | e_2 | ... | e_m` and is finally reversed, so the reported invariant
//! polynomials satisfy `d_{i+1} | d_i` (zeros first).

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::matpoly::MatPoly;
use crate::poly::Poly;
use crate::scalar::ExactField;

/// `M = U * D * V` with unimodular `U`, `V` and diagonal `D = diag(d_1..d_m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<F> {
    pub u: MatPoly<F>,
    pub d: MatPoly<F>,
    pub v: MatPoly<F>,
    /// Monic (or zero) invariant polynomials, `d_{i+1} | d_i`.
    pub invariants: Vec<Poly<F>>,
}

impl<F: ExactField> SmithForm<F> {
    pub fn reconstruct(&self) -> MatPoly<F> {
        &(&self.u * &self.d) * &self.v
    }

    pub fn rank(&self) -> usize {
        self.invariants.iter().filter(|d| !d.is_zero()).count()
    }
}

struct Elimination<F> {
    m: usize,
    w: Vec<Vec<Poly<F>>>,
    left: Vec<Vec<Poly<F>>>,
    right: Vec<Vec<Poly<F>>>,
}

impl<F: ExactField> Elimination<F> {
    fn new(input: &MatPoly<F>) -> Self {
        let m = input.dim();
        let id = |i: usize, j: usize| if i == j { Poly::one() } else { Poly::zero() };
        Elimination {
            m,
            w: (0..m)
                .map(|i| (0..m).map(|j| input.get(i, j).clone()).collect())
                .collect(),
            left: (0..m).map(|i| (0..m).map(|j| id(i, j)).collect()).collect(),
            right: (0..m).map(|i| (0..m).map(|j| id(i, j)).collect()).collect(),
        }
    }

    // Invariant: input = left * w * right. Row operations on `w` are undone by
    // the inverse column operation on `left`; column operations on `w` by the
    // inverse row operation on `right`.

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.w.swap(i, j);
        for row in self.left.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.w.iter_mut() {
            row.swap(i, j);
        }
        self.right.swap(i, j);
    }

    /// row `target` += c * row `src`
    fn add_row(&mut self, target: usize, src: usize, c: &Poly<F>) {
        for j in 0..self.m {
            let t = &self.w[target][j] + &(c * &self.w[src][j]);
            self.w[target][j] = t;
        }
        for row in self.left.iter_mut() {
            row[src] = &row[src] - &(c * &row[target]);
        }
    }

    /// col `target` += c * col `src`
    fn add_col(&mut self, target: usize, src: usize, c: &Poly<F>) {
        for row in self.w.iter_mut() {
            row[target] = &row[target] + &(c * &row[src]);
        }
        for j in 0..self.m {
            let t = &self.right[src][j] - &(c * &self.right[target][j]);
            self.right[src][j] = t;
        }
    }

    fn scale_row(&mut self, i: usize, unit: &F) {
        for p in self.w[i].iter_mut() {
            *p = p.scale(unit);
        }
        let inv = unit.inv();
        for row in self.left.iter_mut() {
            row[i] = row[i].scale(&inv);
        }
    }

    /// Lowest-degree nonzero entry of the trailing block, row-major ties.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        (t..self.m)
            .flat_map(|i| (t..self.m).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.w[i][j].is_zero())
            .min_by_key(|&(i, j)| (self.w[i][j].degree(), i, j))
    }

    fn run(&mut self) -> Result<()> {
        for t in 0..self.m {
            loop {
                let Some((pi, pj)) = self.pivot(t) else {
                    return Ok(());
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);

                let pivot = self.w[t][t].clone();
                let mut dirty = false;
                for i in t + 1..self.m {
                    if self.w[i][t].is_zero() {
                        continue;
                    }
                    let (q, r) = self.w[i][t].div_rem(&pivot)?;
                    self.add_row(i, t, &-q);
                    dirty |= !r.is_zero();
                }
                for j in t + 1..self.m {
                    if self.w[t][j].is_zero() {
                        continue;
                    }
                    let (q, r) = self.w[t][j].div_rem(&pivot)?;
                    self.add_col(j, t, &-q);
                    dirty |= !r.is_zero();
                }
                if dirty {
                    // a remainder of lower degree than the pivot survived
                    continue;
                }
                let offender = (t + 1..self.m)
                    .flat_map(|i| (t + 1..self.m).map(move |j| (i, j)))
                    .find(|&(i, j)| !pivot.divides(&self.w[i][j]));
                match offender {
                    Some((i, _)) => self.add_row(t, i, &Poly::one()),
                    None => break,
                }
            }
            let lc = self.w[t][t].leading_coeff().cloned().expect("pivot is nonzero");
            self.scale_row(t, &lc.inv());
        }
        Ok(())
    }
}

fn to_matpoly<F: ExactField>(rows: Vec<Vec<Poly<F>>>) -> MatPoly<F> {
    MatPoly::from_rows(rows).expect("square by construction")
}

pub fn smith_normal_form<F: ExactField>(input: &MatPoly<F>) -> Result<SmithForm<F>> {
    let m = input.dim();
    let mut e = Elimination::new(input);
    e.run()?;

    // reverse the diagonal order: D' = P D P, U = left P, V = P right
    let rev = |k: usize| m - 1 - k;
    let invariants: Vec<Poly<F>> = (0..m).map(|k| e.w[rev(k)][rev(k)].clone()).collect();
    let u = to_matpoly(
        (0..m)
            .map(|i| (0..m).map(|j| e.left[i][rev(j)].clone()).collect())
            .collect(),
    );
    let v = to_matpoly((0..m).map(|i| e.right[rev(i)].clone()).collect());
    Ok(SmithForm {
        u,
        d: MatPoly::diag(&invariants),
        v,
        invariants,
    })
}

pub fn invariant_polynomials<F: ExactField>(input: &MatPoly<F>) -> Result<Vec<Poly<F>>> {
    Ok(smith_normal_form(input)?.invariants)
}

/// Monic gcd of all `r x r` minors, or zero when they all vanish. This is an
/// independent route to `d_{m-r+1} * ... * d_m`.
pub fn minor_gcd_oracle<F: ExactField>(input: &MatPoly<F>, r: usize) -> Result<Poly<F>> {
    let m = input.dim();
    if r == 0 || r > m {
        return Err(Error::IndexOutOfRange(format!(
            "minor size {r} for a {m}x{m} matrix"
        )));
    }
    let mut acc = Poly::zero();
    for rows in (0..m).combinations(r) {
        for cols in (0..m).combinations(r) {
            let minor = input.minor(&rows, &cols)?;
            if minor.is_zero() {
                continue;
            }
            acc = if acc.is_zero() {
                minor.monic()
            } else {
                acc.gcd(&minor)?
            };
            if acc.is_one() {
                return Ok(acc);
            }
        }
    }
    Ok(acc)
}

/// `d_{i+1} | d_i` for every consecutive pair; zero is divisible by everything.
pub fn is_divisibility_chain<F: ExactField>(invariants: &[Poly<F>]) -> bool {
    invariants.windows(2).all(|w| w[1].divides(&w[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{RatPoly, Rational};

    fn p(c: &[i64]) -> RatPoly {
        Poly::new(c.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    fn check(m: &MatPoly<Rational>) -> SmithForm<Rational> {
        let s = smith_normal_form(m).unwrap();
        assert_eq!(&s.reconstruct(), m);
        assert!(s.u.det().is_constant() && !s.u.det().is_zero());
        assert!(s.v.det().is_constant() && !s.v.det().is_zero());
        assert!(is_divisibility_chain(&s.invariants));
        s
    }

    #[test]
    fn scalar_power_is_already_smith() {
        let m = MatPoly::scalar(3, p(&[0, 0, 1]));
        let s = check(&m);
        assert!(s.invariants.iter().all(|d| d == &p(&[0, 0, 1])));
    }

    #[test]
    fn diagonal_example() {
        let m = MatPoly::diag(&[p(&[0, 0, 1]), p(&[0, -1, 1])]);
        let s = check(&m);
        assert_eq!(s.invariants, vec![p(&[0, 0, -1, 1]), p(&[0, 1])]);
        assert_eq!(minor_gcd_oracle(&m, 1).unwrap(), p(&[0, 1]));
        assert_eq!(minor_gcd_oracle(&m, 2).unwrap(), p(&[0, 0, 0, -1, 1]));
    }

    #[test]
    fn zero_rows_give_leading_zero_invariants() {
        let m = MatPoly::from_rows(vec![
            vec![p(&[1, 1]), p(&[0, 2])],
            vec![p(&[]), p(&[])],
        ])
        .unwrap();
        let s = check(&m);
        assert!(s.invariants[0].is_zero());
        assert_eq!(s.invariants[1], p(&[1]));
        assert!(smith_normal_form(&MatPoly::<Rational>::zeros(2))
            .unwrap()
            .invariants
            .iter()
            .all(Poly::is_zero));
    }

    #[test]
    fn oracle_rejects_bad_sizes() {
        let m = MatPoly::<Rational>::identity(2);
        assert!(minor_gcd_oracle(&m, 0).is_err());
        assert!(minor_gcd_oracle(&m, 3).is_err());
        assert_eq!(
            minor_gcd_oracle(&MatPoly::scalar(3, p(&[0, 0, 1])), 2).unwrap(),
            p(&[0, 0, 0, 0, 1])
        );
    }

    #[test]
    fn non_monic_entries() {
        let m = MatPoly::from_rows(vec![
            vec![p(&[2, 0, 3]), p(&[1, 5])],
            vec![p(&[0, -4]), p(&[7, 1, 1])],
        ])
        .unwrap();
        let s = check(&m);
        let d = m.det().monic();
        assert_eq!(&s.invariants[0] * &s.invariants[1], d);
    }
}
