//! Worked cubic-flow case: the quadratic-shear transformation applied to a
//! state, with the transformed Wigner function computed along two
//! independent routes plus an oscillatory-integral cross-check.

use super::airy::{cubic_phase_integral_closed, cubic_phase_integral_quadrature};
use crate::error::Error;
use crate::grid::{wigner_from_momentum, GridSpec, GridSymbol};
use crate::hilbert::{MomentumWavefunction, Wavefunction};
use num_complex::Complex;

type C64 = Complex<f64>;

#[derive(Clone, Debug)]
pub struct U30Report {
    pub w_route1: GridSymbol<f64>,
    pub w_route2: GridSymbol<f64>,
    pub max_route_difference: f64,
    /// (quadrature, closed-form) values of the cubic-phase integral at the
    /// reference point u = 0.
    pub airy_check: (f64, f64),
}

impl U30Report {
    /// Verification summary: route disagreement, drift of the total
    /// integral, and drift of the p marginal between the two routes.
    pub fn to_json(&self) -> serde_json::Value {
        let i1 = self.w_route1.integral_dmu();
        let i2 = self.w_route2.integral_dmu();
        let m1 = self.w_route1.q_marginal();
        let m2 = self.w_route2.q_marginal();
        let n = m1.len();
        let mut p_drift = 0.0f64;
        for i in n / 8..n - n / 8 {
            p_drift = p_drift.max((m1[i] - m2[i]).norm());
        }
        serde_json::json!({
            "route1_vs_route2_max_err": self.max_route_difference,
            "integral_drift": (i1 - i2).norm(),
            "p_marginal_drift": p_drift,
        })
    }
}

/// Transformed state in the momentum representation: Ψ̃ = e^{−iap³/(3ħ)} ψ̃.
pub fn u30_transform_momentum(
    phi: &MomentumWavefunction<f64>,
    a: f64,
) -> MomentumWavefunction<f64> {
    let mut out = phi.clone();
    for i in 0..out.0.n {
        let p = out.0.x(i);
        let phase = -a * p * p * p / (3.0 * out.0.hbar);
        out.0.values[i] *= C64::new(phase.cos(), phase.sin());
    }
    out
}

/// Both routes to the transformed Wigner function.
///
/// Route 1 keeps the original ψ̃ and pulls the cubic phases into the offset
/// integral:
///   W(p,q) = (1/2πħ) ∫ dk e^{−ik(q−ap²)/ħ} e^{iak³/(12ħ)}
///            ψ̃*(p+k/2) ψ̃(p−k/2),
/// which follows from expanding the phase difference of Ψ̃*Ψ̃ exactly
/// ((p+k/2)³ − (p−k/2)³ = 3p²k + k³/4).
///
/// Route 2 transforms the state first and then runs the ordinary
/// momentum-representation Wigner transform.
pub fn u30_case(
    psi: &Wavefunction<f64>,
    a: f64,
    spec: &GridSpec<f64>,
) -> Result<U30Report, Error> {
    let s = &psi.0;
    let tail = s.tail_magnitude(4);
    if tail > 1e-10 {
        return Err(Error::EdgeDecay {
            tail,
            limit: 1e-10,
        });
    }
    let hbar = spec.hbar;
    let phi = psi.to_momentum(s.min, s.max, s.n);

    // route 1: offset quadrature with explicit cubic phases
    let ps = &phi.0;
    let dk = ps.dx();
    let m_max = (ps.n - 1) as isize;
    let mut w1 = GridSymbol::zeros(spec);
    for i in 0..spec.np {
        let p = spec.p(i);
        let mut offsets: Vec<(f64, C64)> = Vec::new();
        for m in -m_max..=m_max {
            let u = dk / 2.0 * m as f64;
            let hi = p + u;
            let lo = p - u;
            if hi < ps.min || hi > ps.max || lo < ps.min || lo > ps.max {
                continue;
            }
            let va = ps.interp(hi)?;
            let vb = ps.interp(lo)?;
            let k = dk * m as f64;
            let cubic = a * k * k * k / (12.0 * hbar);
            offsets.push((k, va.conj() * vb * C64::new(cubic.cos(), cubic.sin())));
        }
        let shear = a * p * p;
        for j in 0..spec.nq {
            let q = spec.q(j);
            let mut acc = C64::new(0.0, 0.0);
            for (k, g) in &offsets {
                let phase = -k * (q - shear) / hbar;
                acc += *g * C64::new(phase.cos(), phase.sin());
            }
            *w1.at_mut(i, j) = acc * dk / (2.0 * std::f64::consts::PI * hbar);
        }
    }

    // route 2: transform the state, then the standard transform
    let psi2 = u30_transform_momentum(&phi, a);
    let w2 = wigner_from_momentum(&psi2, spec)?;

    let max_route_difference = w1.interior_max_diff(&w2, 0)?;
    let airy_check = (
        cubic_phase_integral_quadrature(0.0, a.abs().max(1e-6), hbar),
        cubic_phase_integral_closed(0.0, a.abs().max(1e-6), hbar),
    );

    Ok(U30Report {
        w_route1: w1,
        w_route2: w2,
        max_route_difference,
        airy_check,
    })
}
