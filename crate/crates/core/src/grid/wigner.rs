//! Wigner transforms of wavefunctions, in both representations.

use super::spec::GridSpec;
use super::symbol::GridSymbol;
use crate::error::Error;
use crate::hilbert::wavefunction::{MomentumWavefunction, Wavefunction};
use crate::scalar::Real;
use num_complex::Complex;

const EDGE_DECAY_LIMIT: f64 = 1e-10;

/// Position-representation Wigner transform
/// W(p,q) = ∫ dx e^{−ipx/ħ} ψ*(q−x/2) ψ(q+x/2),
/// by trapezoid quadrature on the doubled-resolution offset lattice
/// (x stepping by the ψ grid spacing, so q ± x/2 lands on the half-grid).
pub fn wigner_transform<R: Real>(
    psi: &Wavefunction<R>,
    spec: &GridSpec<R>,
) -> Result<GridSymbol<R>, Error> {
    let s = &psi.0;
    let tail = s.tail_magnitude(4);
    if tail > EDGE_DECAY_LIMIT {
        return Err(Error::EdgeDecay {
            tail,
            limit: EDGE_DECAY_LIMIT,
        });
    }
    let dx = s.dx();
    let half = dx / R::from_f(2.0);
    let hbar = spec.hbar;
    let m_max = (s.n - 1) as isize; // offsets x = m·dx, |m| ≤ m_max

    // per-q row of shifted products g_j(m) = ψ*(q−m·dx/2) ψ(q+m·dx/2)
    let mut out = GridSymbol::zeros(spec);
    for j in 0..spec.nq {
        let q = spec.q(j);
        let mut offsets: Vec<(R, Complex<R>)> = Vec::new();
        for m in -m_max..=m_max {
            let u = half * R::from_f(m as f64);
            let a = q - u;
            let b = q + u;
            if a < s.min || a > s.max || b < s.min || b > s.max {
                continue;
            }
            let va = s.interp(a)?;
            let vb = s.interp(b)?;
            let x = dx * R::from_f(m as f64);
            offsets.push((x, va.conj() * vb));
        }
        for i in 0..spec.np {
            let p = spec.p(i);
            let mut acc = Complex::new(R::zero(), R::zero());
            for (x, g) in &offsets {
                let phase = -p * *x / hbar;
                acc = acc + *g * Complex::new(phase.cos(), phase.sin());
            }
            *out.at_mut(i, j) = acc * dx;
        }
    }
    Ok(out)
}

/// Momentum-representation Wigner transform
/// W(p,q) = (1/2πħ) ∫ dk e^{−ikq/ħ} ψ̃*(p+k/2) ψ̃(p−k/2),
/// with ψ̃(p) = ∫ dx e^{−ipx/ħ} ψ(x). Mirrors the position route on the
/// momentum grid; the two must agree.
pub fn wigner_from_momentum<R: Real>(
    phi: &MomentumWavefunction<R>,
    spec: &GridSpec<R>,
) -> Result<GridSymbol<R>, Error> {
    let s = &phi.0;
    let tail = s.tail_magnitude(4);
    if tail > EDGE_DECAY_LIMIT {
        return Err(Error::EdgeDecay {
            tail,
            limit: EDGE_DECAY_LIMIT,
        });
    }
    let dk = s.dx();
    let half = dk / R::from_f(2.0);
    let hbar = spec.hbar;
    let two_pi_h = R::from_f(2.0 * std::f64::consts::PI) * hbar;
    let m_max = (s.n - 1) as isize;

    let mut out = GridSymbol::zeros(spec);
    for i in 0..spec.np {
        let p = spec.p(i);
        let mut offsets: Vec<(R, Complex<R>)> = Vec::new();
        for m in -m_max..=m_max {
            let u = half * R::from_f(m as f64);
            let a = p + u;
            let b = p - u;
            if a < s.min || a > s.max || b < s.min || b > s.max {
                continue;
            }
            let va = s.interp(a)?;
            let vb = s.interp(b)?;
            let k = dk * R::from_f(m as f64);
            offsets.push((k, va.conj() * vb));
        }
        for j in 0..spec.nq {
            let q = spec.q(j);
            let mut acc = Complex::new(R::zero(), R::zero());
            for (k, g) in &offsets {
                let phase = -*k * q / hbar;
                acc = acc + *g * Complex::new(phase.cos(), phase.sin());
            }
            *out.at_mut(i, j) = acc * dk / two_pi_h;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(hbar: f64) -> Wavefunction<f64> {
        Wavefunction::gaussian(-12.0, 12.0, 512, hbar, 0.0, 0.0)
    }

    #[test]
    fn ground_state_wigner_peak() {
        // W(p,q) = 2 e^{−(p²+q²)} at ħ = 1; W(0,0) = 2
        let spec = GridSpec::<f64>::square(4.0, 65, 1.0).unwrap();
        let w = wigner_transform(&gauss(1.0), &spec).unwrap();
        let mid = 32;
        assert!((spec.p(mid)).abs() < 1e-12);
        let got = w.at(mid, mid).re;
        assert!((got - 2.0).abs() < 1e-6, "{got}");
        // pointwise shape check
        for i in (0..spec.np).step_by(8) {
            for j in (0..spec.nq).step_by(8) {
                let want = 2.0 * (-(spec.p(i).powi(2) + spec.q(j).powi(2))).exp();
                assert!((w.at(i, j).re - want).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn wigner_is_real_and_normalized() {
        let spec = GridSpec::<f64>::square(6.0, 128, 1.0).unwrap();
        let w = wigner_transform(&gauss(1.0), &spec).unwrap();
        assert!(w.is_real_within(1e-10), "max imag {}", w.max_imag());
        let total = w.integral_dmu();
        assert!((total.re - 1.0).abs() < 1e-6, "{}", total.re);
    }

    #[test]
    fn dual_routes_agree_on_displaced_state() {
        // displaced Gaussian pins every sign convention in both routes
        let hbar = 0.5;
        let psi = Wavefunction::<f64>::gaussian(-12.0, 12.0, 512, hbar, 0.7, -0.4);
        let phi = psi.to_momentum(-12.0, 12.0, 512);
        let spec = GridSpec::<f64>::square(3.0, 48, hbar).unwrap();
        let w1 = wigner_transform(&psi, &spec).unwrap();
        let w2 = wigner_from_momentum(&phi, &spec).unwrap();
        let d = w1.interior_max_diff(&w2, 0).unwrap();
        assert!(d < 1e-8, "routes differ by {d}");
        // peak location must be at (p,q) ≈ (−0.4, 0.7): find max
        let mut best = (0, 0, -1.0);
        for i in 0..spec.np {
            for j in 0..spec.nq {
                if w1.at(i, j).re > best.2 {
                    best = (i, j, w1.at(i, j).re);
                }
            }
        }
        assert!((spec.p(best.0) + 0.4).abs() < 0.1, "p peak {}", spec.p(best.0));
        assert!((spec.q(best.1) - 0.7).abs() < 0.1, "q peak {}", spec.q(best.1));
    }

    #[test]
    fn translation_covariance() {
        // shifting ψ shifts W in q
        let spec = GridSpec::<f64>::square(3.0, 48, 1.0).unwrap();
        let shift = 0.5;
        let psi0 = gauss(1.0);
        let psi1 = Wavefunction::<f64>::gaussian(-12.0, 12.0, 512, 1.0, shift, 0.0);
        let w1 = wigner_transform(&psi1, &spec).unwrap();
        let shifted_spec = GridSpec::<f64>::new(
            spec.p_min, spec.p_max,
            spec.q_min - shift, spec.q_max - shift,
            spec.np, spec.nq, 1.0,
        )
        .unwrap();
        let w0 = wigner_transform(&psi0, &shifted_spec).unwrap();
        let mut max_d = 0.0f64;
        for i in 0..spec.np {
            for j in 0..spec.nq {
                max_d = max_d.max((w1.at(i, j) - w0.at(i, j)).norm());
            }
        }
        assert!(max_d < 1e-8, "{max_d}");
    }

    #[test]
    fn rejects_poorly_contained_state() {
        let psi = Wavefunction::<f64>::gaussian(-2.0, 2.0, 64, 1.0, 0.0, 0.0);
        let spec = GridSpec::<f64>::square(2.0, 16, 1.0).unwrap();
        assert!(wigner_transform(&psi, &spec).is_err());
    }
}
