//! Exact arithmetic in the ground ring Z[hq^{±1}].
//!
//! Everything downstream stores coefficients as [`LaurentScalar`]s. The
//! deformation parameter `q` is always `hq^{2n²}`, so fractional powers of `q`
//! are accepted only when they land on an integer power of `hq`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A Laurent polynomial in `hq` with arbitrary-precision integer coefficients.
///
/// Zero coefficients are never stored, so structural equality is ring equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentScalar {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c · hq^e`.
    pub fn monomial(e: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// `hq^e`.
    pub fn hq(e: i64) -> Self {
        Self::monomial(e, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(it: I) -> Self {
        let mut s = Self::zero();
        for (e, c) in it {
            s.add_term(e, c);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Iterate `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Multiply by `hq^e`.
    pub fn shift(&self, e: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect(),
        }
    }

    /// If `self = ±hq^e`, return `(e, sign)`.
    pub fn as_unit(&self) -> Option<(i64, i8)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if c.is_one() {
            Some((*e, 1))
        } else if (-c).is_one() {
            Some((*e, -1))
        } else {
            None
        }
    }

    /// Inverse of a unit `±hq^e`.
    pub fn inverse(&self) -> Option<Self> {
        self.as_unit().map(|(e, s)| Self::monomial(-e, s as i64))
    }

    /// The bar involution `hq ↦ hq^{-1}`.
    pub fn reflect(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Value at `hq = 1`.
    pub fn at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// JSON form `[[hqExp, coeff], ...]`, ascending exponents.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| serde_json::json!([e, bigint_json(c)]))
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("scalar must be an array of [exp, coeff] pairs".into()))?;
        let mut s = Self::zero();
        for pair in arr {
            let p = pair
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Parse("scalar term must be [exp, coeff]".into()))?;
            let e = p[0]
                .as_i64()
                .ok_or_else(|| Error::Parse("scalar exponent must be an integer".into()))?;
            s.add_term(e, bigint_from_json(&p[1])?);
        }
        Ok(s)
    }
}

pub(crate) fn bigint_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(c.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    v.as_str()
        .and_then(|s| s.parse::<BigInt>().ok())
        .ok_or_else(|| Error::Parse(format!("not an integer: {v}")))
}

impl From<i64> for LaurentScalar {
    fn from(c: i64) -> Self {
        Self::monomial(0, c)
    }
}

impl fmt::Display for LaurentScalar {
    /// Canonical text: descending exponents, e.g. `hq^4 - hq^-4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            match (*e, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (e, true) => write!(f, "hq^{e}")?,
                (e, false) => write!(f, "{abs}*hq^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentScalar {
    type Output = LaurentScalar;
    fn add(mut self, rhs: LaurentScalar) -> LaurentScalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentScalar> for LaurentScalar {
    fn add_assign(&mut self, rhs: &LaurentScalar) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}

impl Sub<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        self + &(-rhs)
    }
}

impl Sub for LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: LaurentScalar) -> LaurentScalar {
        &self - &rhs
    }
}

impl Mul<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: LaurentScalar) -> LaurentScalar {
        &self * &rhs
    }
}

/// Exponent of `hq` in `q = hq^{2n²}`.
pub fn q_exp(n: i64) -> i64 {
    2 * n * n
}

/// `q^{num/den} = hq^{2n²·num/den}`, refused unless the exponent is integral.
pub fn q_power(n: i64, num: i64, den: i64) -> Result<LaurentScalar> {
    Ok(LaurentScalar::hq(q_power_exp(n, num, den)?))
}

/// The `hq`-exponent of `q^{num/den}`.
pub fn q_power_exp(n: i64, num: i64, den: i64) -> Result<i64> {
    let top = q_exp(n) * num;
    if den == 0 || top % den != 0 {
        return Err(Error::FractionalPower { n, num, den });
    }
    Ok(top / den)
}

/// `q`.
pub fn q(n: i64) -> LaurentScalar {
    LaurentScalar::hq(q_exp(n))
}

/// `-q` raised to an integer power.
pub fn neg_q_pow(n: i64, k: i64) -> LaurentScalar {
    let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
    LaurentScalar::monomial(q_exp(n) * k, sign)
}

/// The quantum integer `[m] = q^{m-1} + q^{m-3} + ... + q^{1-m}`.
pub fn quantum_int(n: i64, m: u32) -> LaurentScalar {
    let m = m as i64;
    let qe = q_exp(n);
    LaurentScalar::from_terms((0..m).map(|t| ((m - 1 - 2 * t) * qe, BigInt::one())))
}

/// `[m]! = [1][2]...[m]`.
pub fn quantum_factorial(n: i64, m: u32) -> LaurentScalar {
    (1..=m).fold(LaurentScalar::one(), |acc, k| &acc * &quantum_int(n, k))
}

/// The ground-ring constants `t`, `a`, `c_1..c_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constants {
    pub t: LaurentScalar,
    pub a: LaurentScalar,
    /// `c[i-1]` is `c_i`.
    pub c: Vec<LaurentScalar>,
}

pub fn constants(n: i64) -> Constants {
    // All of these exponents are integral for every n >= 1 (2n² absorbs the denominators).
    let sign_t = if (n - 1) % 2 == 0 { 1 } else { -1 };
    let t = LaurentScalar::monomial(q_power_exp(n, n * n - 1, n).unwrap(), sign_t);
    let a = q_power(n, (1 - n) * (2 * n + 1), 4).unwrap();
    let base = q_power_exp(n, n - 1, 2 * n).unwrap();
    let c = (1..=n)
        .map(|i| &LaurentScalar::hq(base) * &neg_q_pow(n, n - i))
        .collect();
    Constants { t, a, c }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(terms: &[(i64, i64)]) -> LaurentScalar {
        LaurentScalar::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn q_power_examples() {
        assert_eq!(q_power(2, 1, 1).unwrap(), LaurentScalar::hq(8));
        assert!(q_power(3, 0, 1).unwrap().is_one());
        assert_eq!(q_power(2, 1, 2).unwrap(), LaurentScalar::hq(4));
        assert!(matches!(q_power(2, 1, 3), Err(Error::FractionalPower { .. })));
    }

    #[test]
    fn quantum_int_examples() {
        assert!(quantum_int(2, 0).is_zero());
        assert!(quantum_int(2, 1).is_one());
        assert_eq!(quantum_int(2, 2), s(&[(8, 1), (-8, 1)]));
    }

    #[test]
    fn quantum_int_times_denominator_is_numerator() {
        // (q - q^{-1})[m] = q^m - q^{-m}
        for n in 2..5 {
            for m in 0..6u32 {
                let qe = q_exp(n);
                let lhs = &s(&[(qe, 1), (-qe, -1)]) * &quantum_int(n, m);
                let rhs = s(&[(qe * m as i64, 1), (-qe * m as i64, -1)]);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn constants_examples() {
        let c2 = constants(2);
        assert_eq!(c2.t, s(&[(12, -1)]));
        assert_eq!(c2.c[1], LaurentScalar::hq(2));
        for n in 2..6 {
            let c = constants(n);
            for i in 0..(n as usize - 1) {
                // c_i = -q c_{i+1}
                assert_eq!(c.c[i], &c.c[i + 1] * &neg_q_pow(n, 1));
            }
        }
    }

    #[test]
    fn display_is_descending() {
        assert_eq!(s(&[(4, 1), (-4, -1)]).to_string(), "hq^4 - hq^-4");
        assert_eq!(s(&[(0, -2), (3, 5)]).to_string(), "5*hq^3 - 2");
        assert_eq!(LaurentScalar::zero().to_string(), "0");
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(s(&[(2, 1), (0, 1)]).reflect(), s(&[(-2, 1), (0, 1)]));
        assert!(LaurentScalar::zero().reflect().is_zero());
    }

    #[test]
    fn json_roundtrip() {
        let x = s(&[(3, -7), (-1, 2)]);
        assert_eq!(LaurentScalar::from_json(&x.to_json()).unwrap(), x);
    }

    fn arb_scalar() -> impl Strategy<Value = LaurentScalar> {
        prop::collection::vec((-6i64..6, -5i64..5), 0..5).prop_map(|v| s(&v))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &LaurentScalar::one(), a.clone());
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn reflect_is_involutive_automorphism(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!(a.reflect().reflect(), a.clone());
            prop_assert_eq!((&a * &b).reflect(), &a.reflect() * &b.reflect());
            prop_assert_eq!((&a + &b).reflect(), &a.reflect() + &b.reflect());
        }
    }
}
