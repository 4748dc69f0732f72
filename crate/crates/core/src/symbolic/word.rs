//! Words in the canonical operator letters and their Weyl symbols.

use super::hbar::HbarSeries;
use super::poly::{star_poly, PolySymbol};
use crate::scalar::Coeff;

/// One canonical operator letter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Letter {
    P,
    Q,
}

/// Finite sum of weighted operator words. Concatenation is associative and
/// the empty word is the identity.
#[derive(Clone, PartialEq)]
pub struct OperatorWord<C: Coeff> {
    /// (weight, letters) pairs; kept as a flat unordered sum.
    terms: Vec<(HbarSeries<C>, Vec<Letter>)>,
}

impl<C: Coeff> OperatorWord<C> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::from_letters(&[])
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        Self {
            terms: vec![(HbarSeries::one(), letters.to_vec())],
        }
    }

    pub fn p_hat() -> Self {
        Self::from_letters(&[Letter::P])
    }

    pub fn q_hat() -> Self {
        Self::from_letters(&[Letter::Q])
    }

    /// p̂^a as a single word.
    pub fn p_pow(a: u32) -> Self {
        Self::from_letters(&vec![Letter::P; a as usize])
    }

    /// q̂^a as a single word.
    pub fn q_pow(a: u32) -> Self {
        Self::from_letters(&vec![Letter::Q; a as usize])
    }

    /// The symmetrically ordered monomial t̂ₘₙ: the average over all distinct
    /// interleavings of m P letters and n Q letters.
    pub fn symmetric_monomial(m: u32, n: u32) -> Self {
        let arrangements = interleavings(m, n);
        let count = arrangements.len() as i64;
        let w = HbarSeries::constant(C::from_ratio(1, count));
        Self {
            terms: arrangements
                .into_iter()
                .map(|letters| (w.clone(), letters))
                .collect(),
        }
    }

    /// A polynomial in q̂ alone built from coefficients c[k] on q̂^k.
    pub fn poly_in_q(coeffs: &[i64]) -> Self {
        let mut out = Self::zero();
        for (k, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                out = out.add(&Self::q_pow(k as u32).scale(&C::from_int(c)));
            }
        }
        out
    }

    /// Symmetrized product (1/2)(F(q̂)p̂ + p̂F(q̂)) for polynomial F given by
    /// coefficients on q̂^k. This is the generator shape of point maps.
    pub fn contact_generator(f_coeffs: &[i64]) -> Self {
        let f = Self::poly_in_q(f_coeffs);
        let half = C::from_ratio(1, 2);
        f.concat(&Self::p_hat())
            .add(&Self::p_hat().concat(&f))
            .scale(&half)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(w, l)| (w.scale(c), l.clone()))
                .filter(|(w, _)| !w.is_zero())
                .collect(),
        }
    }

    pub fn scale_series(&self, s: &HbarSeries<C>) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(w, l)| (w.mul(s), l.clone()))
                .filter(|(w, _)| !w.is_zero())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }.merged()
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(w, l)| (w.neg(), l.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Operator product: concatenation distributed over the sums.
    pub fn concat(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for (wa, la) in &self.terms {
            for (wb, lb) in &other.terms {
                let mut l = la.clone();
                l.extend_from_slice(lb);
                terms.push((wa.mul(wb), l));
            }
        }
        Self { terms }.merged()
    }

    /// Word commutator [A, B] = AB − BA.
    pub fn commutator(&self, other: &Self) -> Self {
        self.concat(other).sub(&other.concat(self))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HbarSeries<C>, &[Letter])> {
        self.terms.iter().map(|(w, l)| (w, l.as_slice()))
    }

    fn merged(self) -> Self {
        use std::collections::BTreeMap;
        let mut map: BTreeMap<Vec<Letter>, HbarSeries<C>> = BTreeMap::new();
        for (w, l) in self.terms {
            let entry = map.entry(l).or_insert_with(HbarSeries::zero);
            *entry = entry.add(&w);
        }
        Self {
            terms: map
                .into_iter()
                .filter(|(_, w)| !w.is_zero())
                .map(|(l, w)| (w, l))
                .collect(),
        }
    }
}

impl<C: Coeff> std::fmt::Debug for OperatorWord<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, l)| {
                let word: String = l
                    .iter()
                    .map(|x| match x {
                        Letter::P => 'p',
                        Letter::Q => 'q',
                    })
                    .collect();
                format!("({:?})·[{}]", w, if word.is_empty() { "1" } else { &word })
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All distinct arrangements of m P letters and n Q letters.
fn interleavings(m: u32, n: u32) -> Vec<Vec<Letter>> {
    fn rec(m: u32, n: u32, prefix: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if m == 0 && n == 0 {
            out.push(prefix.clone());
            return;
        }
        if m > 0 {
            prefix.push(Letter::P);
            rec(m - 1, n, prefix, out);
            prefix.pop();
        }
        if n > 0 {
            prefix.push(Letter::Q);
            rec(m, n - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, n, &mut Vec::new(), &mut out);
    out
}

/// Weyl symbol of an operator word, computed by star-multiplying the letter
/// symbols left to right (star is associative so the fold direction only
/// matters for cost).
pub fn symbol_of_word<C: Coeff>(w: &OperatorWord<C>) -> PolySymbol<C> {
    let mut out = PolySymbol::zero();
    for (weight, letters) in w.terms() {
        let mut acc = PolySymbol::one();
        for l in letters.iter().rev() {
            let letter_sym = match l {
                Letter::P => PolySymbol::p(),
                Letter::Q => PolySymbol::q(),
            };
            acc = star_poly(&letter_sym, &acc);
        }
        out = out.add(&acc.scale_series(weight));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactC;

    type W = OperatorWord<ExactC>;
    type Sym = PolySymbol<ExactC>;

    #[test]
    fn symbol_of_p_is_p() {
        assert_eq!(symbol_of_word(&W::p_hat()), Sym::p());
    }

    #[test]
    fn symbol_of_pq_word() {
        // p̂q̂ -> pq − iħ/2
        let got = symbol_of_word(&W::p_hat().concat(&W::q_hat()));
        let mut want = Sym::monomial(1, 1);
        want.add_term(
            0,
            0,
            HbarSeries::term(1, ExactC::i() * ExactC::from_ratio(-1, 2)),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn symmetrized_pq_is_pq() {
        // (1/2)(p̂q̂ + q̂p̂) -> pq
        let sym = W::symmetric_monomial(1, 1);
        assert_eq!(symbol_of_word(&sym), Sym::monomial(1, 1));
    }

    #[test]
    fn symmetric_monomials_map_to_monomials() {
        for (m, n) in [(2, 1), (3, 0), (2, 2), (1, 3)] {
            let w = W::symmetric_monomial(m, n);
            assert_eq!(symbol_of_word(&w), Sym::monomial(m, n), "t_{m}{n}");
        }
    }

    #[test]
    fn ccr_word_commutator() {
        // [p̂, q̂] -> −iħ
        let c = W::p_hat().commutator(&W::q_hat());
        let got = symbol_of_word(&c);
        let mut want = Sym::zero();
        want.add_term(0, 0, HbarSeries::term(1, -ExactC::i()));
        assert_eq!(got, want);
    }

    #[test]
    fn concat_associative() {
        let a = W::symmetric_monomial(1, 1);
        let b = W::p_hat();
        let c = W::q_pow(2);
        assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
    }
}
