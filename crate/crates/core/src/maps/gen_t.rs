//! Generating-function solver for ħ-uncorrected kernels u = e^{2iT/ħ}.
//!
//! For maps in the solvable class (linear symplectic, gauge and their
//! composites) the gradient of T is determined pointwise by the linear
//! system
//!   (∂pT, ∂qT)ᵀ = s⁻¹ · [[1+∂pP, ∂pQ], [∂qP, 1+∂qQ]] · (q−Q, P−p)ᵀ,
//!   s = 2 + ∂pP + ∂qQ,
//! where the inverse-map derivatives have been rewritten through the forward
//! Jacobian (unit determinant). T itself follows by path integration from
//! the grid origin, and the mixed-partial (curl) residual measures whether
//! the map actually lies in the solvable class.

use super::spec::MapSpec;
use crate::error::Error;
use crate::grid::{fd::derivative_1d, GridSpec, GridSymbol};
use num_complex::Complex;

type C64 = Complex<f64>;

#[derive(Clone, Debug)]
pub struct GeneratingT {
    pub grad_p: GridSymbol<f64>,
    pub grad_q: GridSymbol<f64>,
    /// T(p,q), path-integrated from the grid origin (T = 0 there).
    pub t: GridSymbol<f64>,
    /// Interior max |∂q(∂pT) − ∂p(∂qT)|.
    pub curl_residual: f64,
    /// u = e^{2iT/ħ}.
    pub u: GridSymbol<f64>,
}

pub fn generating_t(map: &MapSpec, spec: &GridSpec<f64>) -> Result<GeneratingT, Error> {
    let mut grad_p = GridSymbol::zeros(spec);
    let mut grad_q = GridSymbol::zeros(spec);
    for i in 0..spec.np {
        let p = spec.p(i);
        for j in 0..spec.nq {
            let q = spec.q(j);
            let (pp, qq) = map.eval(p, q)?;
            let jac = map.jacobian(p, q)?;
            let (dp_p, dq_p) = (jac[0][0], jac[0][1]); // ∂pP, ∂qP
            let (dp_q, dq_q) = (jac[1][0], jac[1][1]); // ∂pQ, ∂qQ
            let s = C64::new(2.0, 0.0) + dp_p + dq_q;
            if s.norm() < 1e-10 {
                return Err(Error::SingularPoint { p, q });
            }
            let rhs = (C64::new(q, 0.0) - qq, pp - C64::new(p, 0.0));
            let gp = ((C64::new(1.0, 0.0) + dp_p) * rhs.0 + dp_q * rhs.1) / s;
            let gq = (dq_p * rhs.0 + (C64::new(1.0, 0.0) + dq_q) * rhs.1) / s;
            *grad_p.at_mut(i, j) = gp;
            *grad_q.at_mut(i, j) = gq;
        }
    }

    // curl residual via the same centered differences the star module uses
    let curl;
    {
        // ∂q of grad_p along rows
        let mut dq_of_gp = GridSymbol::zeros(spec);
        for i in 0..spec.np {
            let row = &grad_p.values[i * spec.nq..(i + 1) * spec.nq];
            let d = derivative_1d(row, spec.dq(), 1, 8);
            dq_of_gp.values[i * spec.nq..(i + 1) * spec.nq].copy_from_slice(&d);
        }
        // ∂p of grad_q along columns
        let mut dp_of_gq = GridSymbol::zeros(spec);
        let mut col = vec![C64::new(0.0, 0.0); spec.np];
        for j in 0..spec.nq {
            for i in 0..spec.np {
                col[i] = grad_q.at(i, j);
            }
            let d = derivative_1d(&col, spec.dp(), 1, 8);
            for i in 0..spec.np {
                *dp_of_gq.at_mut(i, j) = d[i];
            }
        }
        curl = dq_of_gp.sub(&dp_of_gq)?;
    }
    let curl_residual = curl.interior_max_abs(5);
    if curl_residual > 1e-6 {
        return Err(Error::Unsupported(format!(
            "gradient field is not integrable (curl {curl_residual:.3e}); the map is \
             outside the ħ-uncorrected class"
        )));
    }

    // path integration: first along p at the first q node, then along q
    let mut t = GridSymbol::zeros(spec);
    let dp = spec.dp();
    let dq = spec.dq();
    for i in 1..spec.np {
        let v = t.at(i - 1, 0)
            + (grad_p.at(i - 1, 0) + grad_p.at(i, 0)) * C64::new(0.5 * dp, 0.0);
        *t.at_mut(i, 0) = v;
    }
    for i in 0..spec.np {
        for j in 1..spec.nq {
            let v = t.at(i, j - 1)
                + (grad_q.at(i, j - 1) + grad_q.at(i, j)) * C64::new(0.5 * dq, 0.0);
            *t.at_mut(i, j) = v;
        }
    }

    // anchor T(0,0) = 0 when the origin is on the grid (the integration
    // constant is free; this matches the closed forms)
    if spec.p_min <= 0.0 && spec.p_max >= 0.0 && spec.q_min <= 0.0 && spec.q_max >= 0.0 {
        let real_part = t.map(|z| C64::new(z.re, 0.0));
        let imag_part = t.map(|z| C64::new(z.im, 0.0));
        let origin = C64::new(
            crate::propagator::interp2(&real_part, 0.0, 0.0).re,
            crate::propagator::interp2(&imag_part, 0.0, 0.0).re,
        );
        t = t.map(|z| z - origin);
    }

    let hbar = spec.hbar;
    let u = t.map(|tv| (C64::new(0.0, 2.0 / hbar) * tv).exp());

    Ok(GeneratingT {
        grad_p,
        grad_q,
        t,
        curl_residual,
        u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::func::NamedFunc;
    use crate::maps::spec::MapFamily;

    #[test]
    fn identity_map_has_zero_t() {
        let spec = GridSpec::square(2.0, 32, 1.0).unwrap();
        let g = generating_t(&MapSpec::new(MapFamily::Identity), &spec).unwrap();
        assert!(g.t.max_abs() < 1e-14);
        assert!(g.curl_residual < 1e-14);
    }

    #[test]
    fn sl2_matches_family_exponent() {
        // T = [bq² − cp² + (a−d)pq]/(a+d+2)
        let (a, b, c, d) = (1.2, 0.3, 0.4, (1.0 + 0.3 * 0.4) / 1.2);
        let spec = GridSpec::square(2.0, 48, 1.0).unwrap();
        let m = MapSpec::new(MapFamily::Sl2 { a, b, c, d });
        let g = generating_t(&m, &spec).unwrap();
        let s = a + d + 2.0;
        let mut max_d = 0.0f64;
        for i in 0..spec.np {
            let p = spec.p(i);
            for j in 0..spec.nq {
                let q = spec.q(j);
                let want = (b * q * q - c * p * p + (a - d) * p * q) / s;
                max_d = max_d.max((g.t.at(i, j).re - want).abs());
                max_d = max_d.max(g.t.at(i, j).im.abs());
            }
        }
        assert!(max_d < 1e-10, "{max_d}");
        assert!(g.curl_residual < 1e-10);
    }

    #[test]
    fn gauge_t_is_half_tau_integral() {
        // T = (τ/2)∫₀^q A for A = 2x, τ = 0.8: T = 0.4 q²
        let spec = GridSpec::square(2.0, 48, 0.5).unwrap();
        let m = MapSpec::new(MapFamily::Gauge {
            a: NamedFunc::Poly {
                coeffs: vec![0.0, 2.0],
            },
            tau: 0.8,
        });
        let g = generating_t(&m, &spec).unwrap();
        let mut max_d = 0.0f64;
        for i in 0..spec.np {
            for j in 0..spec.nq {
                let q = spec.q(j);
                max_d = max_d.max((g.t.at(i, j).re - 0.4 * q * q).abs());
            }
        }
        assert!(max_d < 1e-10, "{max_d}");
    }

    #[test]
    fn contact_map_rejected_by_curl() {
        // point maps are not in the ħ-uncorrected class; the solver must say
        // so rather than return a bogus T
        let spec = GridSpec::square(1.5, 48, 1.0).unwrap();
        let m = MapSpec::new(MapFamily::Contact {
            q_func: NamedFunc::Exp,
        });
        assert!(generating_t(&m, &spec).is_err());
    }
}
