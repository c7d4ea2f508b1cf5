//! The monoid `B` and group `B̄` of an attached triangle (glued along `e_1`)
//! and the extended counit `ε_X` on `T(Q̄; B)`.
//!
//! Exponents are over `triangle_points(n)`.

use crate::error::{Error, Result};
use crate::qtorus::TorusElement;
use crate::scalars::LaurentScalar;
use crate::structmat::balanced_triangle_vector;
use crate::surface::{triangle_points, Pt};

#[derive(Clone, Debug)]
pub struct AttachMonoid {
    pub n: i64,
    points: Vec<Pt>,
}

impl AttachMonoid {
    pub fn new(n: i64) -> Self {
        Self {
            n,
            points: triangle_points(n),
        }
    }

    fn balanced(&self, k: &[i64]) -> bool {
        k.len() == self.points.len() && balanced_triangle_vector(self.n, &self.points, k)
    }

    /// Zero on `j = 0`, non-increasing in `k` along each fixed `j`, balanced.
    pub fn in_b(&self, k: &[i64]) -> bool {
        self.balanced(k)
            && self.points.iter().zip(k).all(|(p, &v)| p[1] != 0 || v == 0)
            && self.pairs().all(|(a, b)| k[b] <= k[a])
    }

    /// As [`in_b`](Self::in_b) with equality along each fixed `j`.
    pub fn in_b_bar(&self, k: &[i64]) -> bool {
        self.in_b(k) && self.pairs().all(|(a, b)| k[b] == k[a])
    }

    /// Index pairs `(a, b)` with the same `j` and `k_b ≥ k_a`.
    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let pts = &self.points;
        (0..pts.len()).flat_map(move |a| {
            (0..pts.len()).filter_map(move |b| (pts[a][1] == pts[b][1] && pts[b][2] >= pts[a][2]).then_some((a, b)))
        })
    }

    /// `b_{ijk}(i'j'k') = n δ_{jj'} δ_{k' ≥ k}`.
    pub fn b_vector(&self, v: &Pt) -> Vec<i64> {
        self.points
            .iter()
            .map(|p| if p[1] == v[1] && p[2] >= v[2] { self.n } else { 0 })
            .collect()
    }

    /// Group generators of `B̄`: `k_2` and `b_{n-j,j,0}` for `j ≥ 2`.
    pub fn b_bar_generators(&self) -> Vec<Vec<i64>> {
        let mut g = vec![self.points.iter().map(|p| p[1]).collect::<Vec<_>>()];
        for j in 2..self.n {
            g.push(self.b_vector(&[self.n - j, j, 0]));
        }
        g
    }

    /// Monoid generators of `B` beyond `B̄`: `-b_{ijk}` with `j ≠ 0`, `k ≠ 0`.
    pub fn free_generators(&self) -> Vec<Vec<i64>> {
        self.points
            .iter()
            .filter(|p| p[1] != 0 && p[2] != 0)
            .map(|p| self.b_vector(p).into_iter().map(|x| -x).collect())
            .collect()
    }

    /// `ε_X`: `B̄`-monomials keep their coefficient, `B \ B̄`-monomials vanish.
    pub fn epsilon_x(&self, e: &TorusElement) -> Result<LaurentScalar> {
        let mut out = LaurentScalar::zero();
        for (k, c) in e.terms() {
            if !self.in_b(k) {
                return Err(Error::OutsideMonoid(format!("{k:?}")));
            }
            if self.in_b_bar(k) {
                out = &out + c;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtrace::paths::{trace_corner, triangle_torus, Orientation, StatedCornerArc};
    use proptest::prelude::*;

    #[test]
    fn generator_counts() {
        for n in 2..=4 {
            let b = AttachMonoid::new(n);
            let gb = b.b_bar_generators();
            assert_eq!(gb.len() as i64, n - 1);
            assert!(gb.iter().all(|g| b.in_b_bar(g)));
            let free = b.free_generators();
            assert_eq!(free.len() as i64, n * (n - 1) / 2);
            assert!(free.iter().all(|g| b.in_b(g) && !b.in_b_bar(g)));
            // positive multiples of those are outside B
            for g in &free {
                let neg: Vec<i64> = g.iter().map(|x| -x).collect();
                assert!(!b.in_b(&neg));
            }
        }
    }

    #[test]
    fn counit_on_corner_arcs() {
        for n in 2..=4 {
            let b = AttachMonoid::new(n);
            let size = n as usize;
            for s in 1..=size {
                for t in 1..=s {
                    let a = StatedCornerArc::new(n, 2, Orientation::Ccw, s, t).unwrap();
                    let e = b.epsilon_x(&trace_corner(&a)).unwrap();
                    assert_eq!(e, LaurentScalar::from(i64::from(s == t)), "n={n} s={s} t={t}");
                }
            }
        }
    }

    #[test]
    fn counit_rejects_outside_b() {
        let n = 3;
        let b = AttachMonoid::new(n);
        let pres = triangle_torus(n);
        // k_1 is balanced but nonzero on j = 0.
        let k1: Vec<i64> = triangle_points(n).iter().map(|p| p[0]).collect();
        let e = TorusElement::monomial(&pres, k1).unwrap();
        assert!(matches!(b.epsilon_x(&e), Err(Error::OutsideMonoid(_))));
        assert!(b.epsilon_x(&TorusElement::one(&pres)).unwrap().is_one());
    }

    fn arb_b(n: i64) -> impl Strategy<Value = Vec<i64>> {
        let b = AttachMonoid::new(n);
        let (gb, free) = (b.b_bar_generators(), b.free_generators());
        (
            proptest::collection::vec(-2i64..=2, gb.len()),
            proptest::collection::vec(0i64..=2, free.len()),
        )
            .prop_map(move |(cg, cf)| {
                let mut k = vec![0; triangle_points(n).len()];
                for (c, g) in cg.iter().zip(&gb).chain(cf.iter().zip(&free)) {
                    k.iter_mut().zip(g).for_each(|(a, b)| *a += c * b);
                }
                k
            })
    }

    proptest! {
        #[test]
        fn counit_is_multiplicative(k in arb_b(3), l in arb_b(3)) {
            let n = 3;
            let b = AttachMonoid::new(n);
            prop_assert!(b.in_b(&k) && b.in_b(&l));
            let pres = triangle_torus(n);
            let x = TorusElement::monomial(&pres, k).unwrap();
            let y = TorusElement::monomial(&pres, l).unwrap();
            let lhs = b.epsilon_x(&x.mul(&y).unwrap()).unwrap();
            let rhs = &b.epsilon_x(&x).unwrap() * &b.epsilon_x(&y).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
