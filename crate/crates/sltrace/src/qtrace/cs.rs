//! Chekhov–Shapiro relations between the transport matrices of the triangle.

use serde::Serialize;

use crate::error::Result;
use crate::par::{self, Exec};
use crate::qmatrix::{is_q_quantum, QMatrix};
use crate::qtorus::TorusElement;
use crate::scalars::{constants, q_exp, LaurentScalar};

use super::paths::{transport_matrix_with, triangle_torus, Orientation};

/// Which braiding to use in [`exchange_relation_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Braiding {
    /// The R-matrix of the fundamental representation.
    Fundamental,
    /// `R = Id`; a negative control that must fail.
    Identity,
}

/// `R^{ab}_{cd} = q^{-1/n}(q^{δ_ab} δ_bd δ_ac + (q - q⁻¹) δ_{b<d} δ_bc δ_ad)`.
pub fn r_entry(n: i64, a: usize, b: usize, c: usize, d: usize) -> LaurentScalar {
    let qe = q_exp(n);
    let mut out = LaurentScalar::zero();
    if b == d && a == c {
        out = &out + &LaurentScalar::hq(if a == b { qe } else { 0 });
    }
    if b < d && b == c && a == d {
        out = &(&out + &LaurentScalar::hq(qe)) - &LaurentScalar::hq(-qe);
    }
    out.shift(-2 * n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub checked: usize,
    /// 1-based index tuples where the relation fails.
    pub failures: Vec<Vec<usize>>,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `(M_1)_{ij} (M̄_2)_{kl} = Σ_{j',l'} R^{j'l'}_{jl} (M̄_2)_{kl'} (M_1)_{ij'}` for
/// all `i, j, k, l`.
pub fn exchange_relation_check(n: i64, braiding: Braiding, exec: Exec) -> Result<RelationCheck> {
    let m1 = transport_matrix_with(n, 1, Orientation::Ccw, exec)?;
    let m2 = transport_matrix_with(n, 2, Orientation::Cw, exec)?;
    let size = n as usize;
    let mut quads = Vec::new();
    for i in 0..size {
        for j in 0..size {
            for k in 0..size {
                for l in 0..size {
                    quads.push([i, j, k, l]);
                }
            }
        }
    }
    let pres = triangle_torus(n);
    let r = |a: usize, b: usize, c: usize, d: usize| match braiding {
        Braiding::Fundamental => r_entry(n, a, b, c, d),
        Braiding::Identity => LaurentScalar::from(i64::from(a == c && b == d)),
    };
    let results = par::map(exec, &quads, |&[i, j, k, l]| -> Result<bool> {
        let lhs = m1.get(i, j).mul(m2.get(k, l))?;
        let mut rhs = TorusElement::zero(&pres);
        for jp in 0..size {
            for lp in 0..size {
                let c = r(jp, lp, j, l);
                if c.is_zero() {
                    continue;
                }
                rhs = rhs.add(&m2.get(k, lp).mul(m1.get(i, jp))?.scale(&c))?;
            }
        }
        Ok(lhs == rhs)
    });
    let mut failures = Vec::new();
    for (q, ok) in quads.iter().zip(results) {
        if !ok? {
            failures.push(q.iter().map(|x| x + 1).collect());
        }
    }
    Ok(RelationCheck {
        name: "exchange relation M1 x Mbar2".into(),
        checked: quads.len(),
        failures,
    })
}

/// The anti-diagonal matrix `C_{ij} = δ_{ī j} c_j`.
pub fn antidiagonal_c(n: i64) -> Result<QMatrix> {
    let pres = triangle_torus(n);
    let c = constants(n).c;
    let size = n as usize;
    QMatrix::from_fn(&pres, size, size, |i, j| {
        if i + j + 1 == size {
            TorusElement::scalar(&pres, c[j].clone())
        } else {
            TorusElement::zero(&pres)
        }
    })
}

/// `M̄_2 = M_3 C M_1`, entrywise.
pub fn factorization_check(n: i64, exec: Exec) -> Result<RelationCheck> {
    let m1 = transport_matrix_with(n, 1, Orientation::Ccw, exec)?;
    let m3 = transport_matrix_with(n, 3, Orientation::Ccw, exec)?;
    let m2 = transport_matrix_with(n, 2, Orientation::Cw, exec)?;
    let rhs = m3.mul(&antidiagonal_c(n)?)?.mul(&m1)?;
    compare("Mbar2 = M3 C M1", &m2, &rhs)
}

pub(crate) fn compare(name: &str, a: &QMatrix, b: &QMatrix) -> Result<RelationCheck> {
    let mut failures = Vec::new();
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if a.get(r, c) != b.get(r, c) {
                failures.push(vec![r + 1, c + 1]);
            }
        }
    }
    Ok(RelationCheck {
        name: name.into(),
        checked: a.rows() * a.cols(),
        failures,
    })
}

/// The q-matrix relations on all six transport matrices.
pub fn quantum_matrix_checks(n: i64, exec: Exec) -> Result<Vec<RelationCheck>> {
    let mut out = Vec::new();
    for o in [Orientation::Ccw, Orientation::Cw] {
        for m in 1..=3u8 {
            let t = transport_matrix_with(n, m, o, exec)?;
            let rep = is_q_quantum(&t, q_exp(n));
            let bar = if o == Orientation::Cw { "bar" } else { "" };
            out.push(RelationCheck {
                name: format!("M{bar}{m} is a quantum q-matrix"),
                checked: rep.checked,
                failures: rep
                    .failures
                    .iter()
                    .map(|f| vec![f.rows.0, f.rows.1, f.cols.0, f.cols.1])
                    .collect(),
            });
        }
    }
    Ok(out)
}
