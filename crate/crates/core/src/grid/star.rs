//! Truncated star products on grids with finite-difference derivatives.

use super::fd::{derivative_1d, stencil_band};
use super::symbol::GridSymbol;
use crate::error::Error;
use crate::scalar::Real;
use num_complex::Complex;
use std::collections::HashMap;

/// Result of a truncated grid star product.
#[derive(Clone, Debug)]
pub struct StarResult<R: Real> {
    pub value: GridSymbol<R>,
    /// Width of the boundary frame that must be excluded from comparisons.
    pub interior_band: usize,
    /// Interior max-norm of the highest-order term kept (a convergence
    /// indicator: small means the series was effectively converged).
    pub last_term_norm: f64,
}

fn binom(n: u32, k: u32) -> f64 {
    let mut acc = 1.0f64;
    for j in 0..k.min(n - k) {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// Accuracy order used for the m-th derivative, tapered from the base so
/// that stencil coefficient sums (and with them the round-off amplification
/// ~ε·Σ|w|/Δᵐ) stay bounded; the high series terms carry 1/m! weights and
/// tolerate the lower truncation order.
fn tapered_accuracy(m: u32, base: usize) -> usize {
    base.saturating_sub(2 * ((m.saturating_sub(1)) / 2) as usize).max(2)
}

/// All mixed partials ∂p^a ∂q^b f for a + b ≤ order, indexed by (a, b).
///
/// Each derivative order is taken with a single direct stencil rather than
/// by iterating first derivatives: iteration multiplies round-off by
/// ~(1/Δ)ⁿ and widens the contaminated frame n-fold, which destroys the
/// high orders on oscillatory symbols.
fn all_partials<R: Real>(
    f: &GridSymbol<R>,
    order: u32,
    accuracy: usize,
) -> HashMap<(u32, u32), Vec<Complex<R>>> {
    let np = f.spec.np;
    let nq = f.spec.nq;
    let dp = f.spec.dp();
    let dq = f.spec.dq();
    let mut out: HashMap<(u32, u32), Vec<Complex<R>>> = HashMap::new();
    out.insert((0, 0), f.values.clone());

    // direct p-derivatives of every order
    for a in 1..=order {
        let acc = tapered_accuracy(a, accuracy);
        let mut cur = vec![Complex::new(R::zero(), R::zero()); np * nq];
        let mut col = vec![Complex::new(R::zero(), R::zero()); np];
        for iq in 0..nq {
            for ip in 0..np {
                col[ip] = f.values[ip * nq + iq];
            }
            let d = derivative_1d(&col, dp, a as usize, acc);
            for ip in 0..np {
                cur[ip * nq + iq] = d[ip];
            }
        }
        out.insert((a, 0), cur);
    }
    // direct q-derivatives of each pure p-derivative
    for a in 0..=order {
        let base = out[&(a, 0)].clone();
        for b in 1..=(order - a) {
            let acc = tapered_accuracy(b, accuracy);
            let mut cur = vec![Complex::new(R::zero(), R::zero()); np * nq];
            for ip in 0..np {
                let row = &base[ip * nq..(ip + 1) * nq];
                let d = derivative_1d(row, dq, b as usize, acc);
                cur[ip * nq..(ip + 1) * nq].copy_from_slice(&d);
            }
            out.insert((a, b), cur);
        }
    }
    out
}

/// f ⋆ g truncated at order K: Σₙ₌₀ᴷ (iħ/2)ⁿ/n! Dⁿ(f,g), with
/// Dⁿ(f,g) = Σₖ C(n,k)(−1)ᵏ (∂q^{n−k}∂pᵏ f)(∂p^{n−k}∂qᵏ g).
///
/// Derivatives are centered finite differences of the given accuracy order
/// (default callers use 8). The returned interior band grows with K because
/// iterated first-derivative stencils widen the contaminated frame.
pub fn grid_star<R: Real>(
    f: &GridSymbol<R>,
    g: &GridSymbol<R>,
    order: u32,
    accuracy: usize,
) -> Result<StarResult<R>, Error> {
    if !f.spec.same_geometry(&g.spec) {
        return Err(Error::GridMismatch("star product on different grids".into()));
    }
    let spec = &f.spec;
    let fp = all_partials(f, order, accuracy);
    let gp = all_partials(g, order, accuracy);

    let mut value = GridSymbol::zeros(spec);
    let mut last = GridSymbol::zeros(spec);
    // (iħ/2)^n / n!
    let half_h = spec.hbar.to_f() / 2.0;
    let mut pref = Complex::new(1.0f64, 0.0);
    for n in 0..=order {
        if n > 0 {
            pref *= Complex::new(0.0, half_h) / n as f64;
        }
        let mut term = vec![Complex::new(R::zero(), R::zero()); spec.len()];
        for k in 0..=n {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let c = pref * binom(n, k) * sign;
            let cr = Complex::new(R::from_f(c.re), R::from_f(c.im));
            let fa = &fp[&(k, n - k)];
            let gb = &gp[&(n - k, k)];
            for (t, (a, b)) in term.iter_mut().zip(fa.iter().zip(gb.iter())) {
                *t = *t + *a * *b * cr;
            }
        }
        let term_grid = GridSymbol {
            spec: spec.clone(),
            values: term,
        };
        value = value.add(&term_grid)?;
        if n == order {
            last = term_grid;
        }
    }

    // direct stencils contaminate a frame of one stencil halfwidth
    let band = stencil_band(order.max(1) as usize, accuracy);
    let last_term_norm = last.interior_max_abs(band);
    Ok(StarResult {
        value,
        interior_band: band,
        last_term_norm,
    })
}

/// Grid Moyal bracket: f ⋆ g − g ⋆ f at truncation order K.
pub fn grid_moyal_bracket<R: Real>(
    f: &GridSymbol<R>,
    g: &GridSymbol<R>,
    order: u32,
    accuracy: usize,
) -> Result<StarResult<R>, Error> {
    let a = grid_star(f, g, order, accuracy)?;
    let b = grid_star(g, f, order, accuracy)?;
    Ok(StarResult {
        value: a.value.sub(&b.value)?,
        interior_band: a.interior_band,
        last_term_norm: a.last_term_norm + b.last_term_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::spec::GridSpec;
    use crate::scalar::ExactC;
    use crate::symbolic::PolySymbol;

    type Sym = PolySymbol<ExactC>;

    #[test]
    fn star_with_constant_one() {
        let spec = GridSpec::<f64>::square(3.0, 64, 1.0).unwrap();
        let f = GridSymbol::sample(&spec, |p, q| {
            Ok(Complex::new((-(p * p + q * q)).exp(), 0.0))
        })
        .unwrap();
        let one = GridSymbol::constant(&spec, Complex::new(1.0, 0.0));
        let r = grid_star(&f, &one, 4, 8).unwrap();
        let d = r.value.interior_max_diff(&f, r.interior_band).unwrap();
        // identically zero up to stencil round-off on the constant factor
        assert!(d < 1e-10, "{d}");
    }

    #[test]
    fn gaussian_star_p_closed_form() {
        // e^{−(p²+q²)} ⋆ p = e^{−(p²+q²)}(p − iħ q); series terminates at n=1
        let spec = GridSpec::<f64>::square(4.0, 128, 1.0).unwrap();
        let f = GridSymbol::sample(&spec, |p, q| {
            Ok(Complex::new((-(p * p + q * q)).exp(), 0.0))
        })
        .unwrap();
        let p = GridSymbol::sample_poly(&spec, &Sym::p());
        let want = GridSymbol::sample(&spec, |p, q| {
            let e = (-(p * p + q * q)).exp();
            Ok(Complex::new(p * e, -q * e))
        })
        .unwrap();
        let r = grid_star(&f, &p, 1, 8).unwrap();
        let d = r.value.interior_max_diff(&want, r.interior_band).unwrap();
        assert!(d < 1e-6, "{d}");
    }

    #[test]
    fn moyal_bracket_of_p_and_q_grids() {
        let spec = GridSpec::<f64>::square(2.0, 64, 0.5).unwrap();
        let p = GridSymbol::sample_poly(&spec, &Sym::p());
        let q = GridSymbol::sample_poly(&spec, &Sym::q());
        let r = grid_moyal_bracket(&p, &q, 2, 8).unwrap();
        let want = GridSymbol::constant(&spec, Complex::new(0.0, -0.5));
        let d = r.value.interior_max_diff(&want, r.interior_band).unwrap();
        assert!(d < 1e-9, "{d}");
    }

    #[test]
    fn moyal_bracket_with_itself_vanishes() {
        let spec = GridSpec::<f64>::square(3.0, 64, 1.0).unwrap();
        let f = GridSymbol::sample(&spec, |p, q| {
            Ok(Complex::new((-(p * p)).exp() * q, p))
        })
        .unwrap();
        let r = grid_moyal_bracket(&f, &f, 4, 8).unwrap();
        assert!(r.value.interior_max_abs(r.interior_band) < 1e-10);
    }
}
