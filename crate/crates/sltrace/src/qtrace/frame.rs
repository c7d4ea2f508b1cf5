//! Traces of the frame elements `g_v`.
//!
//! On the triangle `g_{ijk} = [M_1(i,k) M_2(j)]_Weyl`, with `M_1(i,k)` the
//! quantum minor of `M̄_1` on rows `[i+1, i+k]`, columns `[k̄, n]` and
//! `M_2(j)` the principal minor of `M_2` on `[j̄, n]`; its trace is
//! `x^{K̄(v,·)}`.

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::qtorus::TorusElement;
use crate::scalars::{q_exp, LaurentScalar};
use crate::structmat::{p_tri, TriangleMatrices};
use crate::surface::{triangle_points, Pt};

use super::context::SurfaceContext;
use super::cs::RelationCheck;
use super::paths::{transport_matrix_with, triangle_torus, Orientation};

/// `x^{K̄(v,·)}` on the triangle.
pub fn trace_g_triangle(n: i64, v: &Pt) -> Result<TorusElement> {
    let tm = TriangleMatrices::new(n)?;
    let r = tm
        .index_of(v)
        .ok_or_else(|| Error::UnknownVertex(format!("({},{},{})", v[0], v[1], v[2])))?;
    TorusElement::monomial(&triangle_torus(n), tm.k.row(r).to_vec())
}

/// `x^{K̄_λ(v,·)}` (reduced, `v ∈ V̄_λ`) or `x^{K_λ(v,·)}` (extended,
/// `v ∈ V′_λ`).
pub fn trace_g(ctx: &SurfaceContext, v: &str, reduced: bool) -> Result<TorusElement> {
    if reduced {
        let r = &ctx.matrices.reduced;
        let row = r.vertices.position(v)?;
        TorusElement::monomial(ctx.reduced_torus(), r.k.row(row).to_vec())
    } else {
        let row = ctx
            .matrices
            .a_ids()
            .iter()
            .position(|x| x == v)
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
        TorusElement::monomial(ctx.extended_torus(), ctx.matrices.k.row(row).to_vec())
    }
}

fn single_term(e: &TorusElement, what: &str) -> Result<(Vec<i64>, LaurentScalar)> {
    e.as_monomial()
        .map(|(k, c)| (k.clone(), c.clone()))
        .ok_or_else(|| Error::Internal(format!("{what} is not a monomial: {e}")))
}

/// `[tr M_1(i,k) · tr M_2(j)]_Weyl` from the transport matrices.
pub fn g_from_minors(n: i64, v: &Pt, exec: Exec) -> Result<TorusElement> {
    let [i, j, k] = *v;
    let (i, j, k) = (i as usize, j as usize, k as usize);
    let size = n as usize;
    let qe = q_exp(n);
    let pres = triangle_torus(n);
    let mut exp = vec![0; pres.len()];
    let mut coeff = LaurentScalar::one();
    if k > 0 {
        let mbar1 = transport_matrix_with(n, 1, Orientation::Cw, exec)?;
        let rows: Vec<usize> = (i..i + k).collect();
        let cols: Vec<usize> = (size - k..size).collect();
        let m = mbar1.submatrix(&rows, &cols).qdet_columns_with(qe, exec)?;
        let (e, c) = single_term(&m, "M_1(i,k)")?;
        exp.iter_mut().zip(&e).for_each(|(a, b)| *a += b);
        coeff = &coeff * &c;
    }
    if j > 0 {
        let m2 = transport_matrix_with(n, 2, Orientation::Ccw, exec)?;
        let idx: Vec<usize> = (size - j..size).collect();
        let m = m2.qminor(&idx, &idx, qe)?;
        let (e, c) = single_term(&m, "M_2(j)")?;
        exp.iter_mut().zip(&e).for_each(|(a, b)| *a += b);
        coeff = &coeff * &c;
    }
    Ok(TorusElement::term(&pres, exp, coeff))
}

/// The three frame checks on the triangle: `tr g_v = x^{K̄(v,·)}` is a
/// normalized monomial, the minor decomposition reproduces it, and the
/// commutation exponents of computed products are `2P̄`.
pub fn frame_checks(n: i64, exec: Exec) -> Result<Vec<RelationCheck>> {
    let pts = triangle_points(n);
    let gs: Vec<TorusElement> = pts.iter().map(|v| trace_g_triangle(n, v)).collect::<Result<_>>()?;
    let tm = TriangleMatrices::new(n)?;

    let mut mono = Vec::new();
    for (r, g) in gs.iter().enumerate() {
        let ok = matches!(g.as_monomial(), Some((k, c)) if c.is_one() && k.as_slice() == tm.k.row(r));
        if !ok {
            mono.push(vec![r + 1]);
        }
    }

    let minors = par::map(exec, &pts, |v| g_from_minors(n, v, Exec::Sequential));
    let mut minor_fail = Vec::new();
    for (r, (m, g)) in minors.into_iter().zip(&gs).enumerate() {
        if m? != *g {
            minor_fail.push(vec![r + 1]);
        }
    }

    let pairs: Vec<(usize, usize)> = (0..pts.len())
        .flat_map(|a| (0..pts.len()).map(move |b| (a, b)))
        .collect();
    let comm = par::map(exec, &pairs, |&(a, b)| -> Result<bool> {
        let ab = gs[a].mul(&gs[b])?;
        let ba = gs[b].mul(&gs[a])?;
        let want = 2 * p_tri(n, &pts[a], &pts[b]);
        Ok(ab == ba.scale(&LaurentScalar::hq(want)))
    });
    let mut comm_fail = Vec::new();
    for (&(a, b), ok) in pairs.iter().zip(comm) {
        if !ok? {
            comm_fail.push(vec![a + 1, b + 1]);
        }
    }

    Ok(vec![
        RelationCheck {
            name: "tr g_v = x^{K(v,.)}".into(),
            checked: pts.len(),
            failures: mono,
        },
        RelationCheck {
            name: "tr g_v = [M1(i,k) M2(j)]_Weyl".into(),
            checked: pts.len(),
            failures: minor_fail,
        },
        RelationCheck {
            name: "g_v g_w = hq^{2P(v,w)} g_w g_v".into(),
            checked: pairs.len(),
            failures: comm_fail,
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::TriangulatedSurface;

    #[test]
    fn triangle_frame() {
        for n in 2..=4 {
            for c in frame_checks(n, Exec::default()).unwrap() {
                assert!(c.passed(), "n={n} {}: {:?}", c.name, c.failures);
            }
        }
    }

    #[test]
    fn edge_vertices_come_from_principal_minors() {
        // g_{n-j,j,0} = M_2(j)
        let n = 3;
        for j in 1..n {
            let v = [n - j, j, 0];
            assert_eq!(
                g_from_minors(n, &v, Exec::Sequential).unwrap(),
                trace_g_triangle(n, &v).unwrap()
            );
        }
    }

    #[test]
    fn a_trace_of_frame_is_generator() {
        for s in [TriangulatedSurface::triangle(), TriangulatedSurface::polygon(4)] {
            let ctx = SurfaceContext::new(&s, 3).unwrap();
            for v in ctx.matrices.reduced.ids() {
                let a = ctx.reduced.inverse(&trace_g(&ctx, v, true).unwrap()).unwrap();
                assert_eq!(a, TorusElement::generator(ctx.reduced.a_torus(), v).unwrap());
            }
            for v in ctx.matrices.a_ids() {
                let a = ctx.extended.inverse(&trace_g(&ctx, &v, false).unwrap()).unwrap();
                assert_eq!(a, TorusElement::generator(ctx.extended.a_torus(), &v).unwrap());
            }
        }
    }

    #[test]
    fn surface_frame_commutes_by_p() {
        let ctx = SurfaceContext::new(&TriangulatedSurface::polygon(4), 2).unwrap();
        let ids = ctx.matrices.a_ids();
        for (a, u) in ids.iter().enumerate() {
            for (b, v) in ids.iter().enumerate() {
                let (gu, gv) = (trace_g(&ctx, u, false).unwrap(), trace_g(&ctx, v, false).unwrap());
                let lhs = gu.mul(&gv).unwrap();
                let rhs = gv
                    .mul(&gu)
                    .unwrap()
                    .scale(&LaurentScalar::hq(2 * ctx.matrices.p[(a, b)]));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
