//! Differential-operator images of operator words on phase space.
//!
//! A `BoppOperator` is a finite sum of normal-ordered terms
//! (monomial in p,q) × (monomial in ∂p,∂q) with ħ-series coefficients.
//! Star-multiplication by a coordinate symbol from either side is such an
//! operator, and so is the image of any operator word acting by commutator.

use super::hbar::HbarSeries;
use super::poly::PolySymbol;
use super::word::{Letter, OperatorWord};
use crate::scalar::Coeff;
use std::collections::BTreeMap;

/// Term key: (p power, q power, ∂p power, ∂q power); multiplication acts
/// after differentiation.
type Key = (u32, u32, u32, u32);

#[derive(Clone, PartialEq)]
pub struct BoppOperator<C: Coeff> {
    terms: BTreeMap<Key, HbarSeries<C>>,
}

impl<C: Coeff> BoppOperator<C> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn identity() -> Self {
        let mut t = Self::zero();
        t.add_term((0, 0, 0, 0), HbarSeries::one());
        t
    }

    /// One normal-ordered term coeff·p^m q^n ∂p^a ∂q^b from the key
    /// (m, n, a, b).
    pub fn single(key: Key, coeff: HbarSeries<C>) -> Self {
        let mut t = Self::zero();
        t.add_term(key, coeff);
        t
    }

    fn add_term(&mut self, k: Key, s: HbarSeries<C>) {
        if s.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(HbarSeries::zero);
        *e = e.add(&s);
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// iħ/2 as an ħ-series.
    fn half_i_hbar() -> HbarSeries<C> {
        HbarSeries::term(1, C::i() * C::from_ratio(1, 2))
    }

    /// Star-multiplication by p from the right: f ↦ f ⋆ p = (p + iħ/2 ∂q) f.
    pub fn p_l() -> Self {
        let mut t = Self::zero();
        t.add_term((1, 0, 0, 0), HbarSeries::one());
        t.add_term((0, 0, 0, 1), Self::half_i_hbar());
        t
    }

    /// f ↦ f ⋆ q = (q − iħ/2 ∂p) f.
    pub fn q_l() -> Self {
        let mut t = Self::zero();
        t.add_term((0, 1, 0, 0), HbarSeries::one());
        t.add_term((0, 0, 1, 0), Self::half_i_hbar().neg());
        t
    }

    /// f ↦ p ⋆ f = (p − iħ/2 ∂q) f.
    pub fn p_r() -> Self {
        let mut t = Self::zero();
        t.add_term((1, 0, 0, 0), HbarSeries::one());
        t.add_term((0, 0, 0, 1), Self::half_i_hbar().neg());
        t
    }

    /// f ↦ q ⋆ f = (q + iħ/2 ∂p) f.
    pub fn q_r() -> Self {
        let mut t = Self::zero();
        t.add_term((0, 1, 0, 0), HbarSeries::one());
        t.add_term((0, 0, 1, 0), Self::half_i_hbar());
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, s) in &other.terms {
            out.add_term(*k, s.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, s)| (*k, s.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (k, s) in &self.terms {
            out.add_term(*k, s.scale(c));
        }
        out
    }

    pub fn scale_series(&self, f: &HbarSeries<C>) -> Self {
        let mut out = Self::zero();
        for (k, s) in &self.terms {
            out.add_term(*k, s.mul(f));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Key, &HbarSeries<C>)> {
        self.terms.iter().map(|(k, s)| (*k, s))
    }

    /// Operator composition self ∘ other (`other` acts first). Derivatives are
    /// normal-ordered to the right via the Leibniz rule.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(ma, na, aa, ba), sa) in &self.terms {
            for (&(mb, nb, ab, bb), sb) in &other.terms {
                // reorder ∂p^aa ∂q^ba ∘ p^mb q^nb
                for j in 0..=aa.min(mb) {
                    let cj = binom(aa, j) * falling(mb, j);
                    for k in 0..=ba.min(nb) {
                        let ck = binom(ba, k) * falling(nb, k);
                        let coeff = C::from_int((cj * ck) as i64);
                        let key = (
                            ma + mb - j,
                            na + nb - k,
                            aa - j + ab,
                            ba - k + bb,
                        );
                        out.add_term(key, sa.mul(sb).scale(&coeff));
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    /// Apply to a polynomial symbol.
    pub fn apply(&self, f: &PolySymbol<C>) -> PolySymbol<C> {
        let mut out = PolySymbol::zero();
        for ((m, n, a, b), s) in &self.terms {
            let d = f.d_p_k(*a).d_q_k(*b);
            if d.is_zero() {
                continue;
            }
            let shifted = d.mul(&PolySymbol::monomial(*m, *n));
            out = out.add(&shifted.scale_series(s));
        }
        out
    }

    /// Total derivative order of the highest term.
    pub fn max_derivative_order(&self) -> u32 {
        self.terms
            .keys()
            .map(|(_, _, a, b)| a + b)
            .max()
            .unwrap_or(0)
    }

    /// Split into (first-order-or-less part, higher-derivative remainder).
    pub fn split_first_order(&self) -> (Self, Self) {
        let mut low = Self::zero();
        let mut high = Self::zero();
        for ((m, n, a, b), s) in &self.terms {
            if a + b <= 1 {
                low.add_term((*m, *n, *a, *b), s.clone());
            } else {
                high.add_term((*m, *n, *a, *b), s.clone());
            }
        }
        (low, high)
    }

    /// Coefficient symbols (c, a, b) of the first-order part c + a ∂p + b ∂q.
    pub fn first_order_coefficients(&self) -> (PolySymbol<C>, PolySymbol<C>, PolySymbol<C>) {
        let mut c = PolySymbol::zero();
        let mut ap = PolySymbol::zero();
        let mut bq = PolySymbol::zero();
        for ((m, n, a, b), s) in &self.terms {
            let mono = PolySymbol::monomial(*m, *n).scale_series(s);
            match (a, b) {
                (0, 0) => c = c.add(&mono),
                (1, 0) => ap = ap.add(&mono),
                (0, 1) => bq = bq.add(&mono),
                _ => {}
            }
        }
        (c, ap, bq)
    }
}

impl<C: Coeff> std::fmt::Debug for BoppOperator<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((m, n, a, b), s)| {
                format!("[{:?}]·p^{}q^{}∂p^{}∂q^{}", s, m, n, a, b)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn binom(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    for j in 0..k.min(n - k) {
        acc = acc * (n - j) as u64 / (j + 1) as u64;
    }
    acc
}

fn falling(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).map(|j| (n - j) as u64).product::<u64>().max(1)
}

/// Image of an operator word acting by commutator on symbols:
/// V f = f ⋆ w − w ⋆ f, assembled from the left/right coordinate operators.
/// The left factor reverses the word order; the right factor preserves it.
pub fn bopp_image<C: Coeff>(w: &OperatorWord<C>) -> BoppOperator<C> {
    let mut out = BoppOperator::zero();
    for (weight, letters) in w.terms() {
        let mut left = BoppOperator::identity();
        for l in letters {
            let op = match l {
                Letter::P => BoppOperator::p_l(),
                Letter::Q => BoppOperator::q_l(),
            };
            left = op.compose(&left);
        }
        let mut right = BoppOperator::identity();
        for l in letters.iter().rev() {
            let op = match l {
                Letter::P => BoppOperator::p_r(),
                Letter::Q => BoppOperator::q_r(),
            };
            right = op.compose(&right);
        }
        out = out.add(&left.sub(&right).scale_series(weight));
    }
    out
}

/// Image of the symmetric monomial t̂ₘₙ.
pub fn monomial_image<C: Coeff>(m: u32, n: u32) -> BoppOperator<C> {
    bopp_image(&OperatorWord::symmetric_monomial(m, n))
}
