//! Formal power series in ħ with complex coefficients.
//!
//! ħ is carried as a grading, never substituted, so that statements like
//! "every odd order above the first vanishes" can be checked exactly.

use crate::scalar::Coeff;
use num_complex::Complex;
use std::collections::BTreeMap;

/// Sparse map ħ-power -> coefficient. No zero coefficients are stored.
#[derive(Clone, PartialEq)]
pub struct HbarSeries<C: Coeff> {
    terms: BTreeMap<u32, C>,
}

impl<C: Coeff> HbarSeries<C> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        let mut s = Self::zero();
        s.add_term(0, c);
        s
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    /// Single term c·ħ^k.
    pub fn term(k: u32, c: C) -> Self {
        let mut s = Self::zero();
        s.add_term(k, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: u32, c: C) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn coeff(&self, k: u32) -> C {
        self.terms.get(&k).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &C)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn max_power(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, ca) in self.iter() {
            for (kb, cb) in other.iter() {
                out.add_term(ka + kb, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (k, v) in self.iter() {
            out.add_term(k, v.clone() * c.clone());
        }
        out
    }

    /// Multiply by ħ^k.
    pub fn shift(&self, k: u32) -> Self {
        Self {
            terms: self.terms.iter().map(|(p, c)| (p + k, c.clone())).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, c.conj_c())).collect(),
        }
    }

    /// True if every coefficient is real (so the series is real for real ħ).
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    /// Substitute a numeric value for ħ.
    pub fn eval(&self, hbar: f64) -> Complex<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for (k, c) in self.iter() {
            acc += c.to_c64() * hbar.powi(k as i32);
        }
        acc
    }

    /// Sum of coefficient magnitudes with ħ = `hbar` (a crude but monotone
    /// size measure used for truncation reports).
    pub fn abs_at(&self, hbar: f64) -> f64 {
        self.iter()
            .map(|(k, c)| c.to_c64().norm() * hbar.powi(k as i32))
            .sum()
    }
}

impl<C: Coeff> std::fmt::Debug for HbarSeries<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(k, c)| {
                if k == 0 {
                    format!("{:?}", c.to_c64())
                } else if k == 1 {
                    format!("{:?}·ħ", c.to_c64())
                } else {
                    format!("{:?}·ħ^{}", c.to_c64(), k)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactC;
    use num_traits::Zero;

    #[test]
    fn no_zero_terms_survive() {
        let mut s = HbarSeries::<ExactC>::zero();
        s.add_term(2, ExactC::from_int(3));
        s.add_term(2, ExactC::from_int(-3));
        assert!(s.is_zero());
    }

    #[test]
    fn mul_grades_add() {
        let a = HbarSeries::<ExactC>::term(1, ExactC::from_int(2));
        let b = HbarSeries::<ExactC>::term(3, ExactC::from_ratio(1, 2));
        let c = a.mul(&b);
        assert_eq!(c.coeff(4), ExactC::from_int(1));
        assert!(c.coeff(0).is_zero());
    }
}
