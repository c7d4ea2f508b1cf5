//! The weight lattice of sl_n: Z^n modulo the all-ones vector.

use num_rational::Ratio;

/// An element `Σ c_i w_i`, stored with last coordinate 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector {
    coeffs: Vec<i64>,
}

impl WeightVector {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        assert!(!coeffs.is_empty(), "weight vectors need n >= 1");
        let last = *coeffs.last().unwrap();
        for c in &mut coeffs {
            *c -= last;
        }
        Self { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    /// The basis vector `w_i`, 1-based.
    pub fn w(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i));
        let mut c = vec![0; n];
        c[i - 1] = 1;
        Self::new(c)
    }

    /// The fundamental weight `ϖ_i = w_1 + ... + w_i`; `ϖ_0 = ϖ_n = 0`.
    pub fn fundamental(n: usize, i: usize) -> Self {
        assert!(i <= n);
        Self::new((0..n).map(|t| i64::from(t < i)).collect())
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// The involution `w_i ↦ -w_{n+1-i}`.
    pub fn involution(&self) -> Self {
        Self::new(self.coeffs.iter().rev().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        Self::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// The symmetric pairing with `⟨w_i, w_j⟩ = δ_ij - 1/n`.
pub fn weight_pairing(u: &WeightVector, v: &WeightVector) -> Ratio<i64> {
    let n = u.n() as i64;
    assert_eq!(u.n(), v.n());
    let dot: i64 = u.coeffs.iter().zip(&v.coeffs).map(|(a, b)| a * b).sum();
    let su: i64 = u.coeffs.iter().sum();
    let sv: i64 = v.coeffs.iter().sum();
    Ratio::new(n * dot - su * sv, n)
}
