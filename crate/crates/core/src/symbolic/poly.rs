//! Exact polynomial phase-space symbols and their star algebra.

use super::hbar::HbarSeries;
use crate::scalar::Coeff;
use num_complex::Complex;
use std::collections::BTreeMap;

/// Sparse polynomial in (p, q) whose coefficients are formal ħ-series.
///
/// Keys are `(m, n)` = (p-degree, q-degree).
#[derive(Clone, PartialEq)]
pub struct PolySymbol<C: Coeff> {
    coeffs: BTreeMap<(u32, u32), HbarSeries<C>>,
}

impl<C: Coeff> PolySymbol<C> {
    pub fn zero() -> Self {
        Self {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        let mut s = Self::zero();
        s.add_term(0, 0, HbarSeries::constant(c));
        s
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    /// The coordinate symbol p.
    pub fn p() -> Self {
        Self::monomial(1, 0)
    }

    /// The coordinate symbol q.
    pub fn q() -> Self {
        Self::monomial(0, 1)
    }

    /// p^m q^n with unit coefficient.
    pub fn monomial(m: u32, n: u32) -> Self {
        let mut s = Self::zero();
        s.add_term(m, n, HbarSeries::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, m: u32, n: u32, series: HbarSeries<C>) {
        if series.is_zero() {
            return;
        }
        let entry = self
            .coeffs
            .entry((m, n))
            .or_insert_with(HbarSeries::zero);
        *entry = entry.add(&series);
        if entry.is_zero() {
            self.coeffs.remove(&(m, n));
        }
    }

    pub fn coeff(&self, m: u32, n: u32) -> HbarSeries<C> {
        self.coeffs
            .get(&(m, n))
            .cloned()
            .unwrap_or_else(HbarSeries::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), &HbarSeries<C>)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Largest m + n present.
    pub fn total_degree(&self) -> u32 {
        self.coeffs.keys().map(|(m, n)| m + n).max().unwrap_or(0)
    }

    pub fn p_degree(&self) -> u32 {
        self.coeffs.keys().map(|(m, _)| *m).max().unwrap_or(0)
    }

    pub fn q_degree(&self) -> u32 {
        self.coeffs.keys().map(|(_, n)| *n).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((m, n), s) in other.iter() {
            out.add_term(m, n, s.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, s)| (*k, s.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Pointwise (commutative) product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((ma, na), sa) in self.iter() {
            for ((mb, nb), sb) in other.iter() {
                out.add_term(ma + mb, na + nb, sa.mul(sb));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for ((m, n), s) in self.iter() {
            out.add_term(m, n, s.scale(c));
        }
        out
    }

    pub fn scale_series(&self, f: &HbarSeries<C>) -> Self {
        let mut out = Self::zero();
        for ((m, n), s) in self.iter() {
            out.add_term(m, n, s.mul(f));
        }
        out
    }

    /// ∂/∂p.
    pub fn d_p(&self) -> Self {
        let mut out = Self::zero();
        for ((m, n), s) in self.iter() {
            if m > 0 {
                out.add_term(m - 1, n, s.scale(&C::from_int(m as i64)));
            }
        }
        out
    }

    /// ∂/∂q.
    pub fn d_q(&self) -> Self {
        let mut out = Self::zero();
        for ((m, n), s) in self.iter() {
            if n > 0 {
                out.add_term(m, n - 1, s.scale(&C::from_int(n as i64)));
            }
        }
        out
    }

    pub fn d_p_k(&self, k: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.d_p();
        }
        out
    }

    pub fn d_q_k(&self, k: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.d_q();
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, s)| (*k, s.conj()))
                .collect(),
        }
    }

    /// A symbol is real-valued iff every coefficient is real at real ħ.
    pub fn is_real(&self) -> bool {
        self.coeffs.values().all(|s| s.is_real())
    }

    /// Substitute numbers for (p, q, ħ).
    pub fn eval(&self, p: f64, q: f64, hbar: f64) -> Complex<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for ((m, n), s) in self.iter() {
            acc += s.eval(hbar) * p.powi(m as i32) * q.powi(n as i32);
        }
        acc
    }

    /// Sum of |coefficient| with ħ = `hbar`; a size measure for reports.
    pub fn norm_at(&self, hbar: f64) -> f64 {
        self.iter().map(|(_, s)| s.abs_at(hbar)).sum()
    }

    /// Restrict to the ħ^k component (the result carries ħ^k explicitly).
    pub fn hbar_component(&self, k: u32) -> Self {
        let mut out = Self::zero();
        for ((m, n), s) in self.iter() {
            let c = s.coeff(k);
            if !c.is_zero() {
                out.add_term(m, n, HbarSeries::term(k, c));
            }
        }
        out
    }

    /// Largest ħ power appearing anywhere.
    pub fn max_hbar_power(&self) -> u32 {
        self.coeffs
            .values()
            .filter_map(|s| s.max_power())
            .max()
            .unwrap_or(0)
    }

    /// Canonical serialization: entries {m, n, hbar_power, re, im} sorted
    /// lexicographically by (m, n, hbar_power).
    pub fn to_json(&self) -> serde_json::Value {
        let mut entries = Vec::new();
        for ((m, n), s) in self.iter() {
            for (k, c) in s.iter() {
                let z = c.to_c64();
                entries.push(serde_json::json!({
                    "m": m, "n": n, "hbar_power": k, "re": z.re, "im": z.im,
                }));
            }
        }
        serde_json::Value::Array(entries)
    }
}

impl<C: Coeff> std::fmt::Debug for PolySymbol<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|((m, n), s)| format!("[{:?}]·p^{}q^{}", s, m, n))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn binomial(n: u32, k: u32) -> u64 {
    let mut acc = 1u64;
    for j in 0..k.min(n - k) {
        acc = acc * (n - j) as u64 / (j + 1) as u64;
    }
    if k > n {
        0
    } else {
        acc
    }
}

/// n-th power of the Poisson bidifferential applied to the pair (f, g):
/// Dⁿ(f,g) = Σₖ C(n,k) (−1)ᵏ (∂q^{n−k}∂pᵏ f)(∂p^{n−k}∂qᵏ g).
///
/// The left factor is differentiated in q first; this fixes the bracket sign
/// convention for the whole crate.
pub fn bidiff<C: Coeff>(f: &PolySymbol<C>, g: &PolySymbol<C>, n: u32) -> PolySymbol<C> {
    let mut out = PolySymbol::zero();
    for k in 0..=n {
        let f_part = f.d_q_k(n - k).d_p_k(k);
        if f_part.is_zero() {
            continue;
        }
        let g_part = g.d_p_k(n - k).d_q_k(k);
        if g_part.is_zero() {
            continue;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let c = C::from_int(sign * binomial(n, k) as i64);
        out = out.add(&f_part.mul(&g_part).scale(&c));
    }
    out
}

/// Star product of polynomial symbols: f ⋆ g = Σₙ (iħ/2)ⁿ/n! Dⁿ(f,g).
///
/// The series terminates once n exceeds the smaller total degree, so the
/// result is exact.
pub fn star_poly<C: Coeff>(f: &PolySymbol<C>, g: &PolySymbol<C>) -> PolySymbol<C> {
    let n_max = f.total_degree().min(g.total_degree());
    let mut out = PolySymbol::zero();
    // (i/2)^n / n! accumulated incrementally to stay exact
    let mut prefactor = C::one();
    for n in 0..=n_max {
        if n > 0 {
            prefactor = prefactor * C::i() * C::from_ratio(1, 2) * C::from_ratio(1, n as i64);
        }
        let d = bidiff(f, g, n);
        if d.is_zero() {
            continue;
        }
        // each order n carries ħ^n
        let mut term = PolySymbol::zero();
        for ((m, nn), s) in d.scale(&prefactor).iter() {
            term.add_term(m, nn, s.shift(n));
        }
        out = out.add(&term);
    }
    out
}

/// Moyal bracket: f ⋆ g − g ⋆ f. Only odd ħ powers survive.
pub fn moyal_bracket_poly<C: Coeff>(f: &PolySymbol<C>, g: &PolySymbol<C>) -> PolySymbol<C> {
    star_poly(f, g).sub(&star_poly(g, f))
}

/// Poisson bracket {f,g} = ∂q f ∂p g − ∂p f ∂q g (same sign convention as D).
pub fn poisson_bracket_poly<C: Coeff>(f: &PolySymbol<C>, g: &PolySymbol<C>) -> PolySymbol<C> {
    bidiff(f, g, 1)
}
