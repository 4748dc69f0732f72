//! Canonical commutation checks for transformed coordinate pairs, plus the
//! image-algebra closure checks.

use super::bopp::{bopp_image, BoppOperator};
use super::hbar::HbarSeries;
use super::poly::{moyal_bracket_poly, poisson_bracket_poly, PolySymbol};
use super::word::OperatorWord;
use crate::error::Error;
use crate::scalar::Coeff;
use num_complex::Complex;

/// Exact bracket report for a polynomial coordinate pair (P, Q).
#[derive(Clone, Debug)]
pub struct ExactCcrReport {
    /// {P,Q} Poisson bracket; must be the constant −1.
    pub poisson_ok: bool,
    /// Moyal bracket equals −iħ at the coefficient level.
    pub moyal_ok: bool,
    /// Norm of each ħ^(2k+1) component with k ≥ 1 (must all be exactly zero).
    pub higher_order_norms: Vec<(u32, f64)>,
    pub poisson_deviation: f64,
    pub moyal_deviation: f64,
}

/// Exact mode: both brackets computed in the symbol algebra.
pub fn ccr_exact<C: Coeff>(p_new: &PolySymbol<C>, q_new: &PolySymbol<C>) -> ExactCcrReport {
    let poisson = poisson_bracket_poly(p_new, q_new);
    let want_poisson = PolySymbol::constant(C::from_int(-1));
    let poisson_ok = poisson == want_poisson;
    let poisson_deviation = poisson.sub(&want_poisson).norm_at(1.0);

    let moyal = moyal_bracket_poly(p_new, q_new);
    let mut want_moyal = PolySymbol::zero();
    want_moyal.add_term(0, 0, HbarSeries::term(1, -C::i()));
    let moyal_ok = moyal == want_moyal;
    let moyal_deviation = moyal.sub(&want_moyal).norm_at(1.0);

    let mut higher = Vec::new();
    let kmax = moyal.max_hbar_power();
    let mut k = 3;
    while k <= kmax.max(3) {
        higher.push((k, moyal.hbar_component(k).norm_at(1.0)));
        k += 2;
    }

    ExactCcrReport {
        poisson_ok,
        moyal_ok,
        higher_order_norms: higher,
        poisson_deviation,
        moyal_deviation,
    }
}

/// A complex-valued map evaluator; returns Err at singular points.
pub type MapEval<'a> = &'a dyn Fn(f64, f64) -> Result<Complex<f64>, Error>;

/// Pointwise Poisson bracket {P,Q} = ∂q P ∂p Q − ∂p P ∂q Q by fourth-order
/// central differences with step `h`. Complex-valued maps are allowed.
pub fn poisson_numeric(
    p_new: MapEval,
    q_new: MapEval,
    p: f64,
    q: f64,
    h: f64,
) -> Result<Complex<f64>, Error> {
    let dp = |f: MapEval, p0: f64, q0: f64| -> Result<Complex<f64>, Error> {
        Ok((-f(p0 + 2.0 * h, q0)? + f(p0 + h, q0)? * 8.0 - f(p0 - h, q0)? * 8.0
            + f(p0 - 2.0 * h, q0)?)
            / (12.0 * h))
    };
    let dq = |f: MapEval, p0: f64, q0: f64| -> Result<Complex<f64>, Error> {
        Ok((-f(p0, q0 + 2.0 * h)? + f(p0, q0 + h)? * 8.0 - f(p0, q0 - h)? * 8.0
            + f(p0, q0 - 2.0 * h)?)
            / (12.0 * h))
    };
    Ok(dq(p_new, p, q)? * dp(q_new, p, q)? - dp(p_new, p, q)? * dq(q_new, p, q)?)
}

/// Numeric lattice report: Poisson-bracket values on every lattice point.
#[derive(Clone, Debug)]
pub struct NumericCcrReport {
    pub values: Vec<(f64, f64, Complex<f64>)>,
    /// max |{P,Q} + 1| over the lattice
    pub max_deviation: f64,
}

pub fn ccr_numeric(
    p_new: MapEval,
    q_new: MapEval,
    lattice: &[(f64, f64)],
    h: f64,
) -> Result<NumericCcrReport, Error> {
    let mut values = Vec::with_capacity(lattice.len());
    let mut max_dev = 0.0f64;
    for &(p, q) in lattice {
        let v = poisson_numeric(p_new, q_new, p, q, h)?;
        max_dev = max_dev.max((v + Complex::new(1.0, 0.0)).norm());
        values.push((p, q, v));
    }
    Ok(NumericCcrReport {
        values,
        max_deviation: max_dev,
    })
}

/// Rectangular lattice helper: n×n points strictly inside the box.
pub fn regular_lattice(p_range: (f64, f64), q_range: (f64, f64), n: usize) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let fp = (i as f64 + 0.5) / n as f64;
            let fq = (j as f64 + 0.5) / n as f64;
            pts.push((
                p_range.0 + fp * (p_range.1 - p_range.0),
                q_range.0 + fq * (q_range.1 - q_range.0),
            ));
        }
    }
    pts
}

/// Result of the image-homomorphism check for a pair of words.
#[derive(Clone, Debug)]
pub struct ImageCommutatorReport {
    /// image([A,B]) + [image A, image B] applied to a monomial basis is zero.
    pub homomorphism_ok: bool,
    pub max_residual: f64,
    /// For gauge/contact pairs: coefficients of the polynomial G̃ with
    /// commutator = iħ·image(G̃(q̂)), and the exact-match residual.
    pub gauge_solution: Option<(Vec<Complex<f64>>, f64)>,
}

/// Verify image([A,B]) = −[image(A), image(B)] on all monomials of total
/// degree ≤ `degree`, exactly. Optionally solve for the gauge function G̃.
pub fn image_commutator_check<C: Coeff>(
    a: &OperatorWord<C>,
    b: &OperatorWord<C>,
    degree: u32,
    solve_gauge: bool,
) -> ImageCommutatorReport {
    let lhs = bopp_image(&a.commutator(b));
    let rhs = bopp_image(a).commutator(&bopp_image(b)).neg();

    let mut ok = true;
    let mut max_res = 0.0f64;
    for m in 0..=degree {
        for n in 0..=(degree - m) {
            let f = PolySymbol::monomial(m, n);
            let d = lhs.apply(&f).sub(&rhs.apply(&f));
            if !d.is_zero() {
                ok = false;
                max_res = max_res.max(d.norm_at(1.0));
            }
        }
    }

    let gauge_solution = if solve_gauge {
        let (coeffs, residual) = solve_gauge_function(&lhs, degree + 2);
        Some((coeffs.iter().map(|c| c.to_c64()).collect(), residual))
    } else {
        None
    };

    ImageCommutatorReport {
        homomorphism_ok: ok,
        max_residual: max_res,
        gauge_solution,
    }
}

/// Solve target = iħ·image(G̃(q̂)) for a polynomial G̃ = Σ cₖ qᵏ.
///
/// Each iħ·image(q̂ᵏ) has a unique ħ²·k·q^(k−1)∂p term, so the coefficients
/// can be read off directly; the residual is the size of whatever is left.
pub fn solve_gauge_function<C: Coeff>(target: &BoppOperator<C>, max_deg: u32) -> (Vec<C>, f64) {
    let i_hbar = HbarSeries::term(1, C::i());
    let mut coeffs = vec![C::zero(); (max_deg + 1) as usize];
    for k in 1..=max_deg {
        // coefficient of q^(k−1) ∂p at ħ²  in  iħ·image(q̂ᵏ)  is  k·cₖ
        let mut found = C::zero();
        for ((m, n, a, bb), s) in target.terms() {
            if m == 0 && n == k - 1 && a == 1 && bb == 0 {
                found = s.coeff(2);
            }
        }
        if !found.is_zero() {
            coeffs[k as usize] = found * C::from_ratio(1, k as i64);
        }
    }
    // assemble iħ·image(G̃) and measure the leftover
    let mut image = BoppOperator::zero();
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let vk = bopp_image(&OperatorWord::<C>::q_pow(k as u32)).scale(c);
            image = image.add(&vk);
        }
    }
    let residual_op = target.sub(&image.scale_series(&i_hbar));
    let residual: f64 = residual_op.terms().map(|(_, s)| s.abs_at(1.0)).sum();
    (coeffs, residual)
}
