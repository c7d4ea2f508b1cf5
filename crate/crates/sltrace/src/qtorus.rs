//! Quantum tori `T(Q)` over a finite ordered index set.
//!
//! Elements are stored in the basis of Weyl-normalized monomials `x^k`, with
//! `x^k x^{k'} = hq^{⟨k,k'⟩_Q} x^{k+k'}` and `⟨k,k'⟩_Q = Σ Q_ij k_i k'_j`.
//! Exponent vectors are dense over the presentation's vertex order; the
//! sparse string-keyed form only appears at the JSON boundary.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::imat::IMat;
use crate::lattice::Lattice;
use crate::scalars::LaurentScalar;

pub type Exponent = Vec<i64>;

/// An ordered vertex list with an antisymmetric integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct TorusPresentation {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    q: IMat,
}

impl fmt::Debug for TorusPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusPresentation").field("ids", &self.ids).finish()
    }
}

impl TorusPresentation {
    pub fn new(ids: Vec<String>, q: IMat) -> Result<Arc<Self>> {
        if q.rows() != ids.len() || q.cols() != ids.len() {
            return Err(Error::SizeMismatch(format!(
                "Q is {}x{} but there are {} vertices",
                q.rows(),
                q.cols(),
                ids.len()
            )));
        }
        for r in 0..ids.len() {
            for c in r..ids.len() {
                if q[(r, c)] != -q[(c, r)] {
                    return Err(Error::NotAntisymmetric(ids[r].clone(), ids[c].clone()));
                }
            }
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::Parse(format!("duplicate vertex identifier `{id}`")));
            }
        }
        Ok(Arc::new(Self { ids, index, q }))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn q(&self) -> &IMat {
        &self.q
    }

    pub fn position(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// `⟨k, k'⟩_Q`.
    pub fn form(&self, k: &[i64], k2: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, &a) in k.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let row = self.q.row(i);
            acc += a * row.iter().zip(k2).map(|(x, y)| x * y).sum::<i64>();
        }
        acc
    }

    pub fn exponent_from_map(&self, m: &BTreeMap<String, i64>) -> Result<Exponent> {
        let mut k = vec![0; self.len()];
        for (id, v) in m {
            k[self.position(id)?] += v;
        }
        Ok(k)
    }

    pub fn exponent_to_map(&self, k: &[i64]) -> BTreeMap<String, i64> {
        k.iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(i, v)| (self.ids[i].clone(), *v))
            .collect()
    }

    fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// Which exponents a monomial subalgebra admits.
pub enum MonomialSet<'a> {
    Lattice(&'a Lattice),
    Predicate(&'a (dyn Fn(&[i64]) -> bool + Sync)),
}

impl MonomialSet<'_> {
    pub fn contains(&self, k: &[i64]) -> bool {
        match self {
            MonomialSet::Lattice(l) => l.contains(k),
            MonomialSet::Predicate(p) => p(k),
        }
    }
}

/// Result of a homogeneity query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    /// The zero element: every degree is vacuously shared.
    Zero,
    Homogeneous(i64),
    Inhomogeneous,
}

/// A finite sum of normalized monomials.
#[derive(Clone)]
pub struct TorusElement {
    pres: Arc<TorusPresentation>,
    terms: BTreeMap<Exponent, LaurentScalar>,
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        TorusPresentation::same(&self.pres, &other.pres) && self.terms == other.terms
    }
}

impl Eq for TorusElement {}

impl TorusElement {
    pub fn zero(pres: &Arc<TorusPresentation>) -> Self {
        Self {
            pres: pres.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(pres: &Arc<TorusPresentation>) -> Self {
        Self::scalar(pres, LaurentScalar::one())
    }

    pub fn scalar(pres: &Arc<TorusPresentation>, c: LaurentScalar) -> Self {
        Self::term(pres, vec![0; pres.len()], c)
    }

    /// The normalized monomial `x^k`.
    pub fn monomial(pres: &Arc<TorusPresentation>, k: Exponent) -> Result<Self> {
        if k.len() != pres.len() {
            return Err(Error::SizeMismatch(format!(
                "exponent has length {} but the torus has {} generators",
                k.len(),
                pres.len()
            )));
        }
        Ok(Self::term(pres, k, LaurentScalar::one()))
    }

    /// `x^k` from a sparse map keyed by vertex identifiers.
    pub fn monomial_from_map(pres: &Arc<TorusPresentation>, m: &BTreeMap<String, i64>) -> Result<Self> {
        Self::monomial(pres, pres.exponent_from_map(m)?)
    }

    /// The generator `x_v`.
    pub fn generator(pres: &Arc<TorusPresentation>, id: &str) -> Result<Self> {
        let mut k = vec![0; pres.len()];
        k[pres.position(id)?] = 1;
        Self::monomial(pres, k)
    }

    pub fn term(pres: &Arc<TorusPresentation>, k: Exponent, c: LaurentScalar) -> Self {
        assert_eq!(k.len(), pres.len());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self {
            pres: pres.clone(),
            terms,
        }
    }

    pub fn presentation(&self) -> &Arc<TorusPresentation> {
        &self.pres
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &LaurentScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// If `self = c x^k`, return `(k, c)`.
    pub fn as_monomial(&self) -> Option<(&Exponent, &LaurentScalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn coeff(&self, k: &[i64]) -> LaurentScalar {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, k: Exponent, c: LaurentScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if TorusPresentation::same(&self.pres, &other.pres) {
            Ok(())
        } else {
            Err(Error::PresentationMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-LaurentScalar::one()))
    }

    pub fn scale(&self, s: &LaurentScalar) -> Self {
        let mut out = Self::zero(&self.pres);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(&self.pres);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let e = self.pres.form(k1, k2);
                let k: Exponent = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                out.add_term(k, (c1 * c2).shift(e));
            }
        }
        Ok(out)
    }

    /// Inverse of `±hq^a x^k`; anything else is refused.
    pub fn inverse(&self) -> Result<Self> {
        let (k, c) = self.as_monomial().ok_or(Error::NotInvertible)?;
        let ci = c.inverse().ok_or(Error::NotInvertible)?;
        let neg: Exponent = k.iter().map(|x| -x).collect();
        Ok(Self::term(&self.pres, neg, ci))
    }

    /// The bar involution: inverts `hq` in coefficients, fixes every `x^k`.
    pub fn reflect(&self) -> Self {
        Self {
            pres: self.pres.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.reflect())).collect(),
        }
    }

    pub fn degree_in(&self, v: &str) -> Result<Degree> {
        let pos = self.pres.position(v)?;
        let mut deg = Degree::Zero;
        for k in self.terms.keys() {
            deg = match deg {
                Degree::Zero => Degree::Homogeneous(k[pos]),
                Degree::Homogeneous(d) if d == k[pos] => deg,
                _ => return Ok(Degree::Inhomogeneous),
            };
        }
        Ok(deg)
    }

    /// Evaluate at `hq = 1` with `x_v ↦ assignment[v]`.
    pub fn specialize_classical(&self, assignment: &HashMap<String, BigRational>) -> Result<BigRational> {
        let vals: Vec<BigRational> = self
            .pres
            .ids
            .iter()
            .map(|id| {
                assignment
                    .get(id)
                    .cloned()
                    .ok_or_else(|| Error::UnknownVertex(id.clone()))
            })
            .collect::<Result<_>>()?;
        let mut total = BigRational::zero();
        for (k, c) in &self.terms {
            let mut m = BigRational::from_integer(c.at_one());
            for (x, &e) in vals.iter().zip(k) {
                if e == 0 {
                    continue;
                }
                if x.is_zero() {
                    return Err(Error::Precondition(
                        "cannot specialize a generator with a negative power to 0".into(),
                    ));
                }
                let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
                m *= if e > 0 { p } else { p.recip() };
            }
            total += m;
        }
        Ok(total)
    }

    /// `hq = 1` and every generator set to 1: the sum of the coefficients.
    pub fn specialize_all_ones(&self) -> BigInt {
        self.terms.values().map(LaurentScalar::at_one).sum()
    }

    pub fn in_subalgebra(&self, set: &MonomialSet<'_>) -> bool {
        self.terms.keys().all(|k| set.contains(k))
    }

    /// Canonical JSON: `{"terms":[{"exp":{id:int},"coeff":[[e,c],..]},..]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(k, c)| {
                serde_json::json!({
                    "exp": self.pres.exponent_to_map(k),
                    "coeff": c.to_json(),
                })
            })
            .collect();
        serde_json::json!({ "terms": terms })
    }

    pub fn from_json(pres: &Arc<TorusPresentation>, v: &serde_json::Value) -> Result<Self> {
        let terms = v
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| Error::Parse("element JSON needs a `terms` array".into()))?;
        let mut out = Self::zero(pres);
        for t in terms {
            let exp: BTreeMap<String, i64> =
                serde_json::from_value(t.get("exp").cloned().unwrap_or_else(|| serde_json::json!({})))
                    .map_err(|e| Error::Parse(e.to_string()))?;
            let c = LaurentScalar::from_json(
                t.get("coeff")
                    .ok_or_else(|| Error::Parse("term needs `coeff`".into()))?,
            )?;
            out.add_term(pres.exponent_from_map(&exp)?, c);
        }
        Ok(out)
    }

    pub(crate) fn from_terms_unchecked(
        pres: &Arc<TorusPresentation>,
        terms: impl IntoIterator<Item = (Exponent, LaurentScalar)>,
    ) -> Self {
        let mut out = Self::zero(pres);
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let exp: Vec<String> = self
                    .pres
                    .exponent_to_map(k)
                    .into_iter()
                    .map(|(id, e)| format!("{id}:{e}"))
                    .collect();
                let mono = if exp.is_empty() {
                    "1".to_string()
                } else {
                    format!("x[{}]", exp.join(" "))
                };
                if c.is_one() {
                    mono
                } else {
                    format!("({c})*{mono}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The multiplicatively linear map `x^k ↦ x^{kH}` between two tori.
#[derive(Clone, Debug)]
pub struct MonomialMap {
    source: Arc<TorusPresentation>,
    target: Arc<TorusPresentation>,
    h: IMat,
}

impl MonomialMap {
    /// Requires `H Q' Hᵗ = Q`; reports the first offending entry otherwise.
    pub fn new(source: &Arc<TorusPresentation>, target: &Arc<TorusPresentation>, h: IMat) -> Result<Self> {
        if h.rows() != source.len() || h.cols() != target.len() {
            return Err(Error::SizeMismatch(format!(
                "H is {}x{}, expected {}x{}",
                h.rows(),
                h.cols(),
                source.len(),
                target.len()
            )));
        }
        let got = h.mul(target.q()).mul(&h.transpose());
        if let Some((r, c)) = got.first_difference(source.q()) {
            return Err(Error::Incompatible {
                row: source.ids[r].clone(),
                col: source.ids[c].clone(),
                expected: source.q()[(r, c)],
                got: got[(r, c)],
            });
        }
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            h,
        })
    }

    pub fn source(&self) -> &Arc<TorusPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TorusPresentation> {
        &self.target
    }

    pub fn matrix(&self) -> &IMat {
        &self.h
    }

    pub fn apply_exponent(&self, k: &[i64]) -> Exponent {
        self.h.vec_mul(k)
    }

    pub fn apply(&self, a: &TorusElement) -> Result<TorusElement> {
        if !TorusPresentation::same(a.presentation(), &self.source) {
            return Err(Error::PresentationMismatch);
        }
        Ok(TorusElement::from_terms_unchecked(
            &self.target,
            a.terms().map(|(k, c)| (self.apply_exponent(k), c.clone())),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn pres2() -> Arc<TorusPresentation> {
        TorusPresentation::new(
            vec!["a".into(), "b".into()],
            IMat::from_rows(vec![vec![0, 1], vec![-1, 0]]),
        )
        .unwrap()
    }

    fn pres4() -> Arc<TorusPresentation> {
        TorusPresentation::new(
            (0..4).map(|i| format!("v{i}")).collect(),
            IMat::from_rows(vec![
                vec![0, 1, -2, 0],
                vec![-1, 0, 1, 3],
                vec![2, -1, 0, -1],
                vec![0, -3, 1, 0],
            ]),
        )
        .unwrap()
    }

    #[test]
    fn monomial_examples() {
        let p = pres2();
        assert_eq!(TorusElement::monomial(&p, vec![0, 0]).unwrap(), TorusElement::one(&p));
        let x = TorusElement::monomial(&p, vec![2, -1]).unwrap();
        let y = TorusElement::monomial(&p, vec![-2, 1]).unwrap();
        assert_eq!(x.mul(&y).unwrap(), TorusElement::one(&p));
        let a = TorusElement::monomial(&p, vec![1, 0]).unwrap();
        let b = TorusElement::monomial(&p, vec![0, 1]).unwrap();
        let ab = TorusElement::term(&p, vec![1, 1], LaurentScalar::hq(1));
        assert_eq!(a.mul(&b).unwrap(), ab);
    }

    #[test]
    fn generator_relation() {
        let p = pres4();
        for u in p.ids() {
            for v in p.ids() {
                let xu = TorusElement::generator(&p, u).unwrap();
                let xv = TorusElement::generator(&p, v).unwrap();
                let e = p.q()[(p.position(u).unwrap(), p.position(v).unwrap())];
                let lhs = xu.mul(&xv).unwrap();
                let rhs = xv.mul(&xu).unwrap().scale(&LaurentScalar::hq(2 * e));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn weyl_normalization_matches_ordered_product() {
        // x^k = hq^{-Σ_{i<j} Q_ij k_i k_j} x_1^{k_1} ... x_r^{k_r}
        let p = pres4();
        let k: Exponent = vec![2, -1, 1, 3];
        let mut prod = TorusElement::one(&p);
        for (i, &e) in k.iter().enumerate() {
            let mut g = TorusElement::generator(&p, &p.ids()[i]).unwrap();
            if e < 0 {
                g = g.inverse().unwrap();
            }
            for _ in 0..e.abs() {
                prod = prod.mul(&g).unwrap();
            }
        }
        let mut s = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                s += p.q()[(i, j)] * k[i] * k[j];
            }
        }
        let expect = TorusElement::term(&p, k, LaurentScalar::hq(s));
        assert_eq!(prod, expect);
    }

    #[test]
    fn reflect_and_degree() {
        let p = pres2();
        let x = TorusElement::monomial(&p, vec![3, 1]).unwrap();
        assert_eq!(x.reflect(), x);
        let y = x.scale(&LaurentScalar::hq(1));
        assert_eq!(y.reflect(), x.scale(&LaurentScalar::hq(-1)));
        assert_eq!(x.degree_in("a").unwrap(), Degree::Homogeneous(3));
        let s = TorusElement::generator(&p, "a")
            .unwrap()
            .add(&TorusElement::generator(&p, "b").unwrap())
            .unwrap();
        assert_eq!(s.degree_in("a").unwrap(), Degree::Inhomogeneous);
        assert!(TorusElement::generator(&p, "zz").is_err());
    }

    #[test]
    fn specialize() {
        let p = pres2();
        let mut asg = HashMap::new();
        asg.insert("a".to_string(), BigRational::from_integer(2.into()));
        asg.insert("b".to_string(), BigRational::new(1.into(), 3.into()));
        let x = TorusElement::term(&p, vec![2, -1], LaurentScalar::monomial(5, 4));
        assert_eq!(
            x.specialize_classical(&asg).unwrap(),
            BigRational::from_integer(48.into())
        );
        assert_eq!(TorusElement::one(&p).specialize_all_ones(), BigInt::one());
    }

    #[test]
    fn psi_identity_and_failure() {
        let p = pres4();
        let id = MonomialMap::new(&p, &p, IMat::identity(4)).unwrap();
        let x = TorusElement::monomial(&p, vec![1, -2, 0, 4]).unwrap();
        assert_eq!(id.apply(&x).unwrap(), x);
        let mut h = IMat::identity(4);
        h[(0, 1)] = 1;
        assert!(matches!(MonomialMap::new(&p, &p, h), Err(Error::Incompatible { .. })));
    }

    #[test]
    fn json_roundtrip() {
        let p = pres2();
        let x = TorusElement::term(&p, vec![2, -1], LaurentScalar::monomial(5, 4))
            .add(&TorusElement::one(&p))
            .unwrap();
        let j = x.to_json();
        assert_eq!(TorusElement::from_json(&p, &j).unwrap(), x);
        assert_eq!(
            serde_json::to_string(&TorusElement::zero(&p).to_json()).unwrap(),
            r#"{"terms":[]}"#
        );
    }

    fn arb_k() -> impl Strategy<Value = Exponent> {
        prop::collection::vec(-3i64..4, 4)
    }

    fn arb_elem() -> impl Strategy<Value = TorusElement> {
        prop::collection::vec((arb_k(), -3i64..3, -2i64..3), 0..4).prop_map(|ts| {
            let p = pres4();
            TorusElement::from_terms_unchecked(&p, ts.into_iter().map(|(k, e, c)| (k, LaurentScalar::monomial(e, c))))
        })
    }

    proptest! {
        #[test]
        fn associativity_and_identity(a in arb_elem(), b in arb_elem(), c in arb_elem()) {
            let one = TorusElement::one(a.presentation());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
            prop_assert_eq!(one.mul(&a).unwrap(), a.clone());
        }

        #[test]
        fn monomial_commutation(k in arb_k(), k2 in arb_k()) {
            let p = pres4();
            let x = TorusElement::monomial(&p, k.clone()).unwrap();
            let y = TorusElement::monomial(&p, k2.clone()).unwrap();
            let e = 2 * p.form(&k, &k2);
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap().scale(&LaurentScalar::hq(e)));
        }

        #[test]
        fn monomial_product_by_brute_expansion(k in arb_k(), k2 in arb_k(), k3 in arb_k()) {
            let p = pres4();
            let m = |k: &Exponent| TorusElement::monomial(&p, k.clone()).unwrap();
            let lhs = m(&k).mul(&m(&k2)).unwrap().mul(&m(&k3)).unwrap();
            let k12: Exponent = k.iter().zip(&k2).map(|(a, b)| a + b).collect();
            let e = p.form(&k, &k2) + p.form(&k12, &k3);
            let sum: Exponent = k12.iter().zip(&k3).map(|(a, b)| a + b).collect();
            prop_assert_eq!(lhs, TorusElement::term(&p, sum, LaurentScalar::hq(e)));
        }

        #[test]
        fn reflect_fixes_monomials(a in arb_elem(), k in arb_k()) {
            let p = pres4();
            prop_assert_eq!(a.reflect().reflect(), a.clone());
            let x = TorusElement::monomial(&p, k).unwrap();
            prop_assert_eq!(x.reflect(), x);
        }

        #[test]
        fn psi_is_multiplicative(k in arb_k(), k2 in arb_k(), s in 1i64..3) {
            // H = s·I maps T(s²Q) to T(Q).
            let p = pres4();
            let big = TorusPresentation::new(p.ids().to_vec(), p.q().scale(s * s)).unwrap();
            let psi = MonomialMap::new(&big, &p, IMat::identity(4).scale(s)).unwrap();
            let x = TorusElement::monomial(&big, k).unwrap();
            let y = TorusElement::monomial(&big, k2).unwrap();
            prop_assert_eq!(
                psi.apply(&x.mul(&y).unwrap()).unwrap(),
                psi.apply(&x).unwrap().mul(&psi.apply(&y).unwrap()).unwrap()
            );
        }

        #[test]
        fn psi_fails_iff_incompatible(entries in prop::collection::vec(-1i64..2, 16)) {
            let p = pres4();
            let h = IMat::from_fn(4, 4, |r, c| entries[r * 4 + c]);
            let ok = h.mul(p.q()).mul(&h.transpose()) == *p.q();
            prop_assert_eq!(MonomialMap::new(&p, &p, h).is_ok(), ok);
        }
    }
}
