//! Property tests for the exact symbol algebra.

use proptest::prelude::*;
use weylkit::scalar::Coeff;
use weylkit::symbolic::{
    bidiff, bopp_image, moyal_bracket_poly, poisson_bracket_poly, star_poly, symbol_of_word,
    HbarSeries, OperatorWord, PolySymbol,
};
use weylkit::Exact;

type Sym = PolySymbol<Exact>;
type Word = OperatorWord<Exact>;

/// Random polynomial with small rational coefficients, total degree ≤ 5.
fn arb_poly() -> impl Strategy<Value = Sym> {
    proptest::collection::vec(
        ((0u32..=3, 0u32..=3), -9i64..=9, 1i64..=4),
        1..6,
    )
    .prop_map(|terms| {
        let mut s = Sym::zero();
        for ((m, n), num, den) in terms {
            if m + n <= 5 {
                s.add_term(m, n, HbarSeries::constant(Exact::from_ratio(num, den)));
            }
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_is_associative(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
        let left = star_poly(&star_poly(&f, &g), &h);
        let right = star_poly(&f, &star_poly(&g, &h));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn star_is_bilinear(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
        let lhs = star_poly(&f.add(&g), &h);
        let rhs = star_poly(&f, &h).add(&star_poly(&g, &h));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn classical_limit_of_star(f in arb_poly(), g in arb_poly()) {
        // ħ⁰ component is the pointwise product
        let st = star_poly(&f, &g);
        prop_assert_eq!(st.hbar_component(0), f.mul(&g));
    }

    #[test]
    fn moyal_leading_order_is_poisson(f in arb_poly(), g in arb_poly()) {
        // ħ¹ component of the Moyal bracket equals iħ·{f,g}
        let mb = moyal_bracket_poly(&f, &g);
        let pb = poisson_bracket_poly(&f, &g);
        let mut want = Sym::zero();
        for ((m, n), s) in pb.iter() {
            want.add_term(m, n, s.mul(&HbarSeries::term(1, Exact::i())));
        }
        prop_assert_eq!(mb.hbar_component(1), want.hbar_component(1));
    }

    #[test]
    fn moyal_is_antisymmetric_and_odd(f in arb_poly(), g in arb_poly()) {
        let ab = moyal_bracket_poly(&f, &g);
        let ba = moyal_bracket_poly(&g, &f);
        prop_assert_eq!(ab.clone(), ba.neg());
        for (_, series) in ab.iter() {
            for (k, _) in series.iter() {
                prop_assert!(k % 2 == 1);
            }
        }
    }

    #[test]
    fn image_is_linear(m in 0u32..=2, n in 0u32..=2, a in -5i64..=5, b in -5i64..=5) {
        let wa = Word::symmetric_monomial(m + 1, n);
        let wb = Word::symmetric_monomial(m, n + 1);
        let ca = Exact::from_int(a);
        let cb = Exact::from_int(b);
        let combined = wa.scale(&ca).add(&wb.scale(&cb));
        let lhs = bopp_image(&combined);
        let rhs = bopp_image(&wa).scale(&ca).add(&bopp_image(&wb).scale(&cb));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn image_respects_commutators(m in 1u32..=3, n in 0u32..=2) {
        // image([A,B]) = −[image A, image B]
        let a = Word::symmetric_monomial(m, n);
        let b = Word::symmetric_monomial(n + 1, m);
        let lhs = bopp_image(&a.commutator(&b));
        let rhs = bopp_image(&a).commutator(&bopp_image(&b)).neg();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn word_symbol_is_multiplicative(m in 0u32..=2, n in 0u32..=2) {
        // symbol(AB) = symbol(A) ⋆ symbol(B)
        let a = Word::symmetric_monomial(m, n + 1);
        let b = Word::p_hat().concat(&Word::q_pow(n));
        let lhs = symbol_of_word(&a.concat(&b));
        let rhs = star_poly(&symbol_of_word(&a), &symbol_of_word(&b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bidiff_terminates_at_min_degree(f in arb_poly(), g in arb_poly()) {
        let n = f.total_degree().min(g.total_degree()) + 1;
        prop_assert!(bidiff(&f, &g, n).is_zero());
    }
}

#[test]
fn image_action_matches_moyal_on_random_basis() {
    // dual-route identity for a mixed operator word
    let w = Word::symmetric_monomial(2, 2)
        .add(&Word::symmetric_monomial(1, 0).scale(&Exact::from_ratio(2, 3)));
    let v = bopp_image(&w);
    let sym = symbol_of_word(&w);
    for m in 0..4u32 {
        for n in 0..4u32 {
            let f = Sym::monomial(m, n);
            assert_eq!(v.apply(&f), moyal_bracket_poly(&f, &sym));
        }
    }
}
