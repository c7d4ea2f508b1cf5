//! Matrices over a quantum torus: the q-quantum relations, quantum
//! determinants and minors, the adjugate, and Cramer's rule.
//!
//! The quantum parameter is passed as an `hq`-exponent `qe`, so `q = hq^qe`;
//! transport matrices use `qe = 2n²` and their reverses `qe = -2n²`.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::qtorus::{TorusElement, TorusPresentation};
use crate::scalars::LaurentScalar;

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    pres: Arc<TorusPresentation>,
    rows: usize,
    cols: usize,
    entries: Vec<TorusElement>,
}

fn neg_q(qe: i64, k: i64) -> LaurentScalar {
    LaurentScalar::monomial(qe * k, if k.rem_euclid(2) == 0 { 1 } else { -1 })
}

/// Number of inversions.
fn length(p: &[usize]) -> i64 {
    let mut l = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                l += 1;
            }
        }
    }
    l
}

impl QMatrix {
    pub fn new(pres: &Arc<TorusPresentation>, rows: usize, cols: usize, entries: Vec<TorusElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::SizeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| **e.presentation() != **pres) {
            return Err(Error::PresentationMismatch);
        }
        Ok(Self {
            pres: pres.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        pres: &Arc<TorusPresentation>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> TorusElement,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self::new(pres, rows, cols, entries)
    }

    /// The identity-entry matrix: 1 on the diagonal, 0 elsewhere.
    pub fn identity(pres: &Arc<TorusPresentation>, n: usize) -> Self {
        Self::from_fn(pres, n, n, |r, c| {
            if r == c {
                TorusElement::one(pres)
            } else {
                TorusElement::zero(pres)
            }
        })
        .expect("entries share the presentation")
    }

    pub fn presentation(&self) -> &Arc<TorusPresentation> {
        &self.pres
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at 0-based `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> &TorusElement {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: TorusElement) -> Result<()> {
        if **x.presentation() != *self.pres {
            return Err(Error::PresentationMismatch);
        }
        self.entries[r * self.cols + c] = x;
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.pres, self.cols, self.rows, |r, c| self.get(c, r).clone()).unwrap()
    }

    pub fn map(&self, f: impl Fn(&TorusElement) -> TorusElement) -> Self {
        Self::from_fn(&self.pres, self.rows, self.cols, |r, c| f(self.get(r, c))).unwrap()
    }

    /// Submatrix on 0-based row and column index lists, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(&self.pres, rows.len(), cols.len(), |r, c| {
            self.get(rows[r], cols[c]).clone()
        })
        .unwrap()
    }

    /// Remove 0-based row `r` and column `c`.
    pub fn without(&self, r: usize, c: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&x| x != r).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&x| x != c).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if *self.pres != *other.pres {
            return Err(Error::PresentationMismatch);
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = TorusElement::zero(&self.pres);
                for k in 0..self.cols {
                    let (a, b) = (self.get(r, k), other.get(k, c));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b)?)?;
                    }
                }
                entries.push(acc);
            }
        }
        Self::new(&self.pres, self.rows, other.cols, entries)
    }

    pub fn scale(&self, s: &TorusElement) -> Result<Self> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(s.mul(e)?);
        }
        Self::new(&self.pres, self.rows, self.cols, entries)
    }

    fn product(&self, cells: impl Iterator<Item = (usize, usize)>) -> TorusElement {
        let mut acc = TorusElement::one(&self.pres);
        for (r, c) in cells {
            let e = self.get(r, c);
            if e.is_zero() {
                return TorusElement::zero(&self.pres);
            }
            acc = acc.mul(e).expect("shared presentation");
        }
        acc
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::SizeMismatch(format!(
                "{}x{} is not square",
                self.rows, self.cols
            )))
        }
    }

    /// Row-ordered quantum determinant `Σ (-q)^{ℓ(σ)} u_{1σ(1)} ··· u_{nσ(n)}`.
    pub fn qdet(&self, qe: i64) -> Result<TorusElement> {
        self.qdet_with(qe, Exec::default())
    }

    pub fn qdet_with(&self, qe: i64, exec: Exec) -> Result<TorusElement> {
        self.require_square()?;
        Ok(self.permutation_sum(qe, exec, |p| self.product(p.iter().enumerate().map(|(r, &c)| (r, c)))))
    }

    /// Column-ordered form `Σ (-q)^{ℓ(σ)} u_{σ(1)1} ··· u_{σ(n)n}`.
    pub fn qdet_columns(&self, qe: i64) -> Result<TorusElement> {
        self.qdet_columns_with(qe, Exec::default())
    }

    pub fn qdet_columns_with(&self, qe: i64, exec: Exec) -> Result<TorusElement> {
        self.require_square()?;
        Ok(self.permutation_sum(qe, exec, |p| self.product(p.iter().enumerate().map(|(c, &r)| (r, c)))))
    }

    fn permutation_sum(
        &self,
        qe: i64,
        exec: Exec,
        term: impl Fn(&[usize]) -> TorusElement + Sync + Send,
    ) -> TorusElement {
        let n = self.rows;
        if n == 0 {
            return TorusElement::one(&self.pres);
        }
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        par::map_reduce(
            exec,
            &perms,
            || TorusElement::zero(&self.pres),
            |p| term(p).scale(&neg_q(qe, length(p))),
            |a, b| a.add(&b).expect("shared presentation"),
        )
    }

    /// Quantum minor on 0-based row set `rows` and column set `cols`.
    pub fn qminor(&self, rows: &[usize], cols: &[usize], qe: i64) -> Result<TorusElement> {
        if rows.len() != cols.len() {
            return Err(Error::SizeMismatch(format!(
                "minor with {} rows and {} columns",
                rows.len(),
                cols.len()
            )));
        }
        if rows.iter().chain(cols).any(|&x| x >= self.rows.max(self.cols))
            || rows.iter().any(|&r| r >= self.rows)
            || cols.iter().any(|&c| c >= self.cols)
        {
            return Err(Error::SizeMismatch("minor index out of range".into()));
        }
        let mut rs = rows.to_vec();
        let mut cs = cols.to_vec();
        rs.sort_unstable();
        cs.sort_unstable();
        self.submatrix(&rs, &cs).qdet(qe)
    }

    /// `u^!` with entries `(-q)^{i-j} det_q(u^{ji})`.
    pub fn adjugate(&self, qe: i64) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        if n == 1 {
            return Ok(Self::identity(&self.pres, 1));
        }
        let cells: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).collect();
        let entries: Vec<Result<TorusElement>> = par::map(Exec::default(), &cells, |&(i, j)| {
            Ok(self
                .without(j, i)
                .qdet_with(qe, Exec::Sequential)?
                .scale(&neg_q(qe, i as i64 - j as i64)))
        });
        Self::new(&self.pres, n, n, entries.into_iter().collect::<Result<_>>()?)
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Relation checks.

/// One violated relation, with 1-based rows and columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub relation: String,
    pub rows: (usize, usize),
    pub cols: (usize, usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn is_q_multiple(x: &TorusElement, y: &TorusElement, s: &LaurentScalar) -> bool {
    x.sub(&y.scale(s)).map(|d| d.is_zero()).unwrap_or(false)
}

/// Check the six relations on every 2×2 submatrix `[[a, b], [c, d]]`:
/// `ab = q ba`, `ac = q ca`, `bd = q db`, `cd = q dc`, `bc = cb`,
/// `ad - da = (q - q^{-1}) bc`.
pub fn is_q_quantum(m: &QMatrix, qe: i64) -> RelationReport {
    let q = LaurentScalar::hq(qe);
    let one = LaurentScalar::one();
    let qq = LaurentScalar::hq(qe) - LaurentScalar::hq(-qe);
    let mut report = RelationReport::default();
    let e = |r, c| m.get(r, c);
    let prod = |x: &TorusElement, y: &TorusElement| x.mul(y).expect("shared presentation");
    let mut pairs = Vec::new();
    // Same row (ab) and same column (ac) relations, then full 2×2 blocks.
    for r in 0..m.rows() {
        for (c1, c2) in (0..m.cols()).tuple_combinations() {
            pairs.push(("ab = q ba", (r, r), (c1, c2)));
        }
    }
    for c in 0..m.cols() {
        for (r1, r2) in (0..m.rows()).tuple_combinations() {
            pairs.push(("ac = q ca", (r1, r2), (c, c)));
        }
    }
    for (r1, r2) in (0..m.rows()).tuple_combinations() {
        for (c1, c2) in (0..m.cols()).tuple_combinations() {
            pairs.push(("bc = cb", (r1, r2), (c1, c2)));
            pairs.push(("ad - da = (q - q^-1) bc", (r1, r2), (c1, c2)));
        }
    }
    for (name, (r1, r2), (c1, c2)) in pairs {
        let ok = match name {
            "ab = q ba" => {
                let (a, b) = (e(r1, c1), e(r1, c2));
                is_q_multiple(&prod(a, b), &prod(b, a), &q)
            }
            "ac = q ca" => {
                let (a, c) = (e(r1, c1), e(r2, c1));
                is_q_multiple(&prod(a, c), &prod(c, a), &q)
            }
            "bc = cb" => {
                let (b, c) = (e(r1, c2), e(r2, c1));
                is_q_multiple(&prod(b, c), &prod(c, b), &one)
            }
            _ => {
                let (a, b, c, d) = (e(r1, c1), e(r1, c2), e(r2, c1), e(r2, c2));
                let lhs = prod(a, d).sub(&prod(d, a)).unwrap();
                is_q_multiple(&lhs, &prod(b, c), &qq)
            }
        };
        report.checked += 1;
        if !ok {
            report.failures.push(RelationFailure {
                relation: name.to_string(),
                rows: (r1 + 1, r2 + 1),
                cols: (c1 + 1, c2 + 1),
            });
        }
    }
    report
}

/// Whether `u^! u` and `u u^!` both equal `det_q(u) Id`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjugateReport {
    pub left: bool,
    pub right: bool,
}

impl AdjugateReport {
    pub fn passed(&self) -> bool {
        self.left && self.right
    }
}

pub fn adjugate_check(m: &QMatrix, qe: i64) -> Result<AdjugateReport> {
    let adj = m.adjugate(qe)?;
    let det = m.qdet(qe)?;
    let expected = QMatrix::identity(m.presentation(), m.rows()).scale(&det)?;
    Ok(AdjugateReport {
        left: adj.mul(m)? == expected,
        right: m.mul(&adj)? == expected,
    })
}

/// Solve `M x = c` for `M' = [c | M]` (n × (n+1)).
///
/// The solution is `x = det_q(M)^{-1} M^! c`, which needs only `M` to be
/// q-quantum. When all of `M'` is q-quantum the minor form
/// `x_i = (-q)^{i-1} det_q(M)^{-1} det_q(M_i)`, `M_i` being `M'` without its
/// `(i+1)`-th column, is computed as well and must agree. The residual
/// `M x - c` is checked before returning.
pub fn cramer_solve(m_prime: &QMatrix, qe: i64) -> Result<Vec<TorusElement>> {
    let n = m_prime.rows();
    if m_prime.cols() != n + 1 {
        return Err(Error::SizeMismatch(format!(
            "expected an n x (n+1) matrix, got {}x{}",
            n,
            m_prime.cols()
        )));
    }
    let all_rows: Vec<usize> = (0..n).collect();
    let m = m_prime.submatrix(&all_rows, &(1..=n).collect::<Vec<_>>());
    let det = m.qdet(qe)?;
    let det_inv = match det.as_monomial() {
        Some((_, c)) if c.as_unit().is_some() => det.inverse()?,
        _ => return Err(Error::NotInvertible),
    };
    let adj = m.adjugate(qe)?;
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = TorusElement::zero(m.presentation());
        for j in 0..n {
            acc = acc.add(&adj.get(i, j).mul(m_prime.get(j, 0))?)?;
        }
        x.push(det_inv.mul(&acc)?);
    }
    if is_q_quantum(m_prime, qe).passed() {
        for i in 1..=n {
            let cols: Vec<usize> = (0..=n).filter(|&c| c != i).collect();
            let di = m_prime.submatrix(&all_rows, &cols).qdet(qe)?;
            let xi = det_inv.mul(&di)?.scale(&neg_q(qe, i as i64 - 1));
            if xi != x[i - 1] {
                return Err(Error::Internal(format!("Cramer minor form disagrees in x_{i}")));
            }
        }
    }
    for r in 0..n {
        let mut acc = TorusElement::zero(m.presentation());
        for (j, xj) in x.iter().enumerate() {
            acc = acc.add(&m.get(r, j).mul(xj)?)?;
        }
        if acc != *m_prime.get(r, 0) {
            return Err(Error::Internal(format!("Cramer residual nonzero in row {}", r + 1)));
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imat::IMat;
    use proptest::prelude::*;

    fn commutative(k: usize) -> Arc<TorusPresentation> {
        TorusPresentation::new((0..k).map(|i| format!("x{i}")).collect(), IMat::zeros(k, k)).unwrap()
    }

    fn int_matrix(pres: &Arc<TorusPresentation>, rows: &[Vec<i64>]) -> QMatrix {
        let r = rows.len();
        let c = rows[0].len();
        QMatrix::from_fn(pres, r, c, |i, j| TorusElement::scalar(pres, rows[i][j].into())).unwrap()
    }

    /// Laplace expansion along the first row; an independent determinant.
    fn laplace(m: &[Vec<i64>]) -> i64 {
        if m.is_empty() {
            return 1;
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * laplace(&minor)
            })
            .sum()
    }

    /// x y = q y x, y z = q z y, x z = z x with q = hq^2.
    fn lower_triangular() -> (Arc<TorusPresentation>, QMatrix) {
        let q = IMat::from_rows(vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]);
        let pres = TorusPresentation::new(vec!["x".into(), "y".into(), "z".into()], q).unwrap();
        let g = |s: &str| TorusElement::generator(&pres, s).unwrap();
        let m = QMatrix::new(&pres, 2, 2, vec![g("x"), TorusElement::zero(&pres), g("y"), g("z")]).unwrap();
        (pres, m)
    }

    #[test]
    fn one_by_one_and_identity() {
        let pres = commutative(1);
        let one = QMatrix::identity(&pres, 1);
        assert!(is_q_quantum(&one, 7).passed());
        let id = QMatrix::identity(&pres, 3);
        assert!(is_q_quantum(&id, 7).passed());
        assert_eq!(id.qdet(7).unwrap(), TorusElement::one(&pres));
        assert!(adjugate_check(&id, 7).unwrap().passed());
    }

    #[test]
    fn lower_triangular_is_quantum() {
        let (pres, m) = lower_triangular();
        let r = is_q_quantum(&m, 2);
        assert!(r.passed(), "{r:?}");
        let xz = TorusElement::generator(&pres, "x")
            .unwrap()
            .mul(&TorusElement::generator(&pres, "z").unwrap())
            .unwrap();
        assert_eq!(m.qdet(2).unwrap(), xz);
        assert_eq!(m.qdet_columns(2).unwrap(), xz);
        assert!(adjugate_check(&m, 2).unwrap().passed());
        // Wrong parameter is detected.
        assert!(!is_q_quantum(&m, -2).passed());
    }

    #[test]
    fn two_by_two_formula() {
        let pres = TorusPresentation::new(
            (0..4).map(|i| format!("u{i}")).collect(),
            IMat::from_rows(vec![
                vec![0, 1, 2, 0],
                vec![-1, 0, 3, 1],
                vec![-2, -3, 0, 1],
                vec![0, -1, -1, 0],
            ]),
        )
        .unwrap();
        let g: Vec<TorusElement> = (0..4)
            .map(|i| TorusElement::generator(&pres, &format!("u{i}")).unwrap())
            .collect();
        let m = QMatrix::new(&pres, 2, 2, g.clone()).unwrap();
        let expected = g[0]
            .mul(&g[3])
            .unwrap()
            .sub(&g[1].mul(&g[2]).unwrap().scale(&LaurentScalar::hq(6)))
            .unwrap();
        assert_eq!(m.qdet(6).unwrap(), expected);
    }

    #[test]
    fn minors() {
        let (pres, m) = lower_triangular();
        assert_eq!(m.qminor(&[0, 1], &[0, 1], 2).unwrap(), m.qdet(2).unwrap());
        assert_eq!(
            m.qminor(&[1], &[0], 2).unwrap(),
            TorusElement::generator(&pres, "y").unwrap()
        );
        assert!(matches!(m.qminor(&[0], &[0, 1], 2), Err(Error::SizeMismatch(_))));
    }

    #[test]
    fn swapped_entries_fail_adjugate() {
        let (pres, m) = lower_triangular();
        let mut bad = m.clone();
        bad.set(0, 0, m.get(1, 0).clone()).unwrap();
        bad.set(1, 0, m.get(0, 0).clone()).unwrap();
        assert!(!is_q_quantum(&bad, 2).passed());
        assert!(!adjugate_check(&bad, 2).unwrap().passed());
        let _ = pres;
    }

    #[test]
    fn cramer_on_triangular_system() {
        let (pres, m) = lower_triangular();
        // c = first column of M forces x = (1, 0).
        let mp = QMatrix::from_fn(&pres, 2, 3, |r, c| {
            if c == 0 {
                m.get(r, 0).clone()
            } else {
                m.get(r, c - 1).clone()
            }
        })
        .unwrap();
        let x = cramer_solve(&mp, 2).unwrap();
        assert_eq!(x, vec![TorusElement::one(&pres), TorusElement::zero(&pres)]);
    }

    #[test]
    fn cramer_one_by_one() {
        let (pres, _) = lower_triangular();
        let g = |s: &str| TorusElement::generator(&pres, s).unwrap();
        let mp = QMatrix::new(&pres, 1, 2, vec![g("y"), g("x")]).unwrap();
        let x = cramer_solve(&mp, 2).unwrap();
        assert_eq!(x, vec![g("x").inverse().unwrap().mul(&g("y")).unwrap()]);
    }

    #[test]
    fn cramer_rejects_singular() {
        let pres = commutative(1);
        let mp = int_matrix(&pres, &[vec![1, 2, 4], vec![1, 1, 2]]);
        assert!(matches!(cramer_solve(&mp, 0), Err(Error::NotInvertible)));
    }

    fn unimodular() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (2usize..5).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n, -2i64..3), 0..8).prop_map(move |ops| {
                let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
                for (a, b, f) in ops {
                    if a != b {
                        let src = m[b].clone();
                        m[a].iter_mut().zip(&src).for_each(|(x, y)| *x += f * y);
                    }
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn classical_limit_matches_laplace(rows in (1usize..5).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-4i64..5, n), n))) {
            let pres = commutative(1);
            let m = int_matrix(&pres, &rows);
            let d = m.qdet(0).unwrap();
            prop_assert_eq!(d.coeff(&[0]).at_one(), laplace(&rows).into());
            prop_assert_eq!(m.qdet_columns(0).unwrap(), d.clone());
            prop_assert_eq!(m.qdet_with(0, Exec::Sequential).unwrap(), d);
        }

        #[test]
        fn classical_cramer(m in unimodular(), c in prop::collection::vec(-5i64..6, 4)) {
            let n = m.len();
            let pres = commutative(1);
            let mut rows = Vec::new();
            for r in 0..n {
                let mut row = vec![c[r]];
                row.extend(&m[r]);
                rows.push(row);
            }
            let x = cramer_solve(&int_matrix(&pres, &rows), 0).unwrap();
            for r in 0..n {
                let s: i64 = (0..n).map(|j| m[r][j] * i64::try_from(x[j].coeff(&[0]).at_one()).unwrap()).sum();
                prop_assert_eq!(s, c[r]);
            }
        }
    }
}
