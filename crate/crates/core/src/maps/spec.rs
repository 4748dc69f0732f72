//! Canonical map families and their coordinate evaluators.

use super::func::NamedFunc;
use crate::error::Error;
use crate::symbolic::{characteristic_endpoint, flow_exact, monomial_image, FlowSymbol};
use crate::{Exact, Symbol};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

type C64 = Complex<f64>;

/// A canonical map family with parameters. The (P, Q) evaluators may be
/// complex-valued (the intertwiner family is).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum MapFamily {
    Identity,
    /// P = ap + bq, Q = cp + dq with ad − bc = 1.
    Sl2 { a: f64, b: f64, c: f64, d: f64 },
    /// p ↦ −q, q ↦ p.
    Fourier,
    /// P = p, Q = q + a p².
    LinearPotential { a: f64 },
    /// P = p + τ A(q), Q = q.
    Gauge { a: NamedFunc, tau: f64 },
    /// Point map: P = p / Q'(q), Q = Q(q); Q must be strictly monotone.
    Contact { q_func: NamedFunc },
    /// Non-unitary intertwiner: P = p − i[g(q) − g(q+α)], Q = q + α.
    Darboux { g: NamedFunc, alpha: f64 },
    /// Split form of the same map (identical coordinates, different kernel).
    DarbouxB { g: NamedFunc, alpha: f64 },
    /// Flow of the symmetrized monomial generator, parametrized by β = γħ.
    MonomialFlow { m: u32, n: u32, beta: f64 },
    /// Apply `first`, then `then` (kernel = u_then ⋆ u_first).
    Composed {
        first: Box<MapFamily>,
        then: Box<MapFamily>,
    },
}

/// Rectangular domain restriction for evaluators and grids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapDomain {
    pub p_range: (f64, f64),
    pub q_range: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    #[serde(flatten)]
    pub family: MapFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<MapDomain>,
}

impl MapSpec {
    pub fn new(family: MapFamily) -> Self {
        Self {
            family,
            domain: None,
        }
    }

    pub fn dec1(a: f64) -> Self {
        Self::new(MapFamily::Composed {
            first: Box::new(MapFamily::Fourier),
            then: Box::new(MapFamily::LinearPotential { a }),
        })
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.family.validate()
    }

    /// Evaluate (P, Q) at a phase-space point.
    pub fn eval(&self, p: f64, q: f64) -> Result<(C64, C64), Error> {
        self.family.eval(C64::new(p, 0.0), C64::new(q, 0.0))
    }

    /// Forward Jacobian [[∂pP, ∂qP], [∂pQ, ∂qQ]], analytic per family.
    pub fn jacobian(&self, p: f64, q: f64) -> Result<[[C64; 2]; 2], Error> {
        self.family.jacobian(p, q)
    }

    /// Coordinate symbols of the operator family the catalogue actually
    /// implements. For most families these equal the classical map; the
    /// point maps are realized as plain substitution operators whose
    /// momentum image is the ordered product (1/Q')(q̂)·p̂, so their P symbol
    /// carries an exact ħ/2 ordering term:
    /// P = p/Q'(q) + (iħ/2)·d/dq[1/Q'(q)].
    pub fn symbol_coords(&self, p: f64, q: f64, hbar: f64) -> Result<(C64, C64), Error> {
        let (mut pp, qq) = self.eval(p, q)?;
        if let MapFamily::Contact { q_func } = &self.family {
            let d1 = q_func.deriv(q)?;
            let d2 = q_func.deriv2(q)?;
            // d/dq [1/Q'] = −Q''/Q'²
            pp += C64::new(0.0, hbar / 2.0) * (-d2 / (d1 * d1));
        }
        Ok((pp, qq))
    }

    /// True if (P, Q) are polynomial in (p, q); those maps admit exact
    /// bracket checks and terminating star products.
    pub fn is_polynomial(&self) -> bool {
        self.family.is_polynomial()
    }

    /// Exact polynomial coordinates, when `is_polynomial`.
    pub fn poly_coords(&self) -> Option<(Symbol, Symbol)> {
        self.family.poly_coords()
    }

    /// Largest total degree of the polynomial coordinates (star truncation
    /// order needed for exactness).
    pub fn poly_degree(&self) -> Option<u32> {
        self.poly_coords()
            .map(|(p, q)| p.total_degree().max(q.total_degree()))
    }
}

impl MapFamily {
    pub fn validate(&self) -> Result<(), Error> {
        match self {
            MapFamily::Sl2 { a, b, c, d } => {
                if (a * d - b * c - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "sl2 determinant is {}, need 1",
                        a * d - b * c
                    )));
                }
                Ok(())
            }
            MapFamily::Contact { q_func } => {
                if !q_func.is_monotone_on(-6.0, 6.0) {
                    return Err(Error::NotMonotone(
                        "contact profile must be strictly monotone".into(),
                    ));
                }
                Ok(())
            }
            MapFamily::Composed { first, then } => {
                first.validate()?;
                then.validate()
            }
            _ => Ok(()),
        }
    }

    fn eval(&self, p: C64, q: C64) -> Result<(C64, C64), Error> {
        match self {
            MapFamily::Identity => Ok((p, q)),
            MapFamily::Sl2 { a, b, c, d } => Ok((p * *a + q * *b, p * *c + q * *d)),
            MapFamily::Fourier => Ok((-q, p)),
            MapFamily::LinearPotential { a } => Ok((p, q + p * p * *a)),
            MapFamily::Gauge { a, tau } => {
                // evaluators are only called on the real section
                let av = a.eval(q.re)?;
                Ok((p + C64::new(tau * av, 0.0), q))
            }
            MapFamily::Contact { q_func } => {
                let qp = q_func.deriv(q.re)?;
                if qp.abs() < 1e-13 {
                    return Err(Error::SingularPoint { p: p.re, q: q.re });
                }
                Ok((p / qp, C64::new(q_func.eval(q.re)?, 0.0)))
            }
            MapFamily::Darboux { g, alpha } | MapFamily::DarbouxB { g, alpha } => {
                let big_g = g.eval(q.re)? - g.eval(q.re + alpha)?;
                Ok((p - C64::new(0.0, big_g), q + alpha))
            }
            MapFamily::MonomialFlow { m, n, beta } => monomial_flow_eval(*m, *n, *beta, p, q),
            MapFamily::Composed { first, then } => {
                let (p1, q1) = first.eval(p, q)?;
                then.eval(p1, q1)
            }
        }
    }

    fn jacobian(&self, p: f64, q: f64) -> Result<[[C64; 2]; 2], Error> {
        let r = |x: f64| C64::new(x, 0.0);
        match self {
            MapFamily::Identity => Ok([[r(1.0), r(0.0)], [r(0.0), r(1.0)]]),
            MapFamily::Sl2 { a, b, c, d } => Ok([[r(*a), r(*b)], [r(*c), r(*d)]]),
            MapFamily::Fourier => Ok([[r(0.0), r(-1.0)], [r(1.0), r(0.0)]]),
            MapFamily::LinearPotential { a } => {
                Ok([[r(1.0), r(0.0)], [r(2.0 * a * p), r(1.0)]])
            }
            MapFamily::Gauge { a, tau } => {
                Ok([[r(1.0), r(tau * a.deriv(q)?)], [r(0.0), r(1.0)]])
            }
            MapFamily::Contact { q_func } => {
                let d1 = q_func.deriv(q)?;
                if d1.abs() < 1e-13 {
                    return Err(Error::SingularPoint { p, q });
                }
                // second derivative by a centered difference of deriv
                let h = 1e-5;
                let d2 = (q_func.deriv(q + h)? - q_func.deriv(q - h)?) / (2.0 * h);
                Ok([[r(1.0 / d1), r(-p * d2 / (d1 * d1))], [r(0.0), r(d1)]])
            }
            MapFamily::Darboux { g, alpha } | MapFamily::DarbouxB { g, alpha } => {
                let dg = g.deriv(q)? - g.deriv(q + alpha)?;
                Ok([[r(1.0), C64::new(0.0, -dg)], [r(0.0), r(1.0)]])
            }
            MapFamily::MonomialFlow { .. } | MapFamily::Composed { .. } => {
                // numeric Jacobian via fourth-order differences
                let h = 1e-4;
                let ev = |pp: f64, qq: f64| self.eval(C64::new(pp, 0.0), C64::new(qq, 0.0));
                let d = |f: &dyn Fn(f64) -> Result<(C64, C64), Error>| -> Result<(C64, C64), Error> {
                    let (a2, b2) = f(2.0 * h)?;
                    let (a1, b1) = f(h)?;
                    let (m1, n1) = f(-h)?;
                    let (m2, n2) = f(-2.0 * h)?;
                    Ok((
                        (-a2 + a1 * 8.0 - m1 * 8.0 + m2) / (12.0 * h),
                        (-b2 + b1 * 8.0 - n1 * 8.0 + n2) / (12.0 * h),
                    ))
                };
                let (dp_p, dp_q) = d(&|e| ev(p + e, q))?;
                let (dq_p, dq_q) = d(&|e| ev(p, q + e))?;
                Ok([[dp_p, dq_p], [dp_q, dq_q]])
            }
        }
    }

    fn is_polynomial(&self) -> bool {
        match self {
            MapFamily::Identity
            | MapFamily::Sl2 { .. }
            | MapFamily::Fourier
            | MapFamily::LinearPotential { .. } => true,
            MapFamily::Gauge { a, .. } => {
                matches!(a, NamedFunc::Const { .. } | NamedFunc::Poly { .. })
            }
            MapFamily::Composed { first, then } => first.is_polynomial() && then.is_polynomial(),
            _ => false,
        }
    }

    fn poly_coords(&self) -> Option<(Symbol, Symbol)> {
        use crate::scalar::Coeff;
        let from_f = |x: f64| -> Exact {
            // map parameters arrive as floats; carry them as exact dyadics
            let scaled = (x * (1u64 << 32) as f64).round() as i64;
            Exact::from_ratio(scaled, 1i64 << 32)
        };
        match self {
            MapFamily::Identity => Some((Symbol::p(), Symbol::q())),
            MapFamily::Sl2 { a, b, c, d } => {
                let pp = Symbol::p().scale(&from_f(*a)).add(&Symbol::q().scale(&from_f(*b)));
                let qq = Symbol::p().scale(&from_f(*c)).add(&Symbol::q().scale(&from_f(*d)));
                Some((pp, qq))
            }
            MapFamily::Fourier => Some((Symbol::q().neg(), Symbol::p())),
            MapFamily::LinearPotential { a } => Some((
                Symbol::p(),
                Symbol::q().add(&Symbol::monomial(2, 0).scale(&from_f(*a))),
            )),
            MapFamily::Gauge { a, tau } => {
                let coeffs: &[f64] = match a {
                    NamedFunc::Const { value } => std::slice::from_ref(value),
                    NamedFunc::Poly { coeffs } => coeffs,
                    _ => return None,
                };
                let mut p_new = Symbol::p();
                for (k, c) in coeffs.iter().enumerate() {
                    p_new.add_term(
                        0,
                        k as u32,
                        crate::symbolic::HbarSeries::constant(from_f(tau * c)),
                    );
                }
                Some((p_new, Symbol::q()))
            }
            MapFamily::Composed { first, then } => {
                let (p1, q1) = first.poly_coords()?;
                let (p2, q2) = then.poly_coords()?;
                Some((substitute_poly(&p2, &p1, &q1), substitute_poly(&q2, &p1, &q1)))
            }
            _ => None,
        }
    }
}

fn substitute_poly(f: &Symbol, p_image: &Symbol, q_image: &Symbol) -> Symbol {
    let mut out = Symbol::zero();
    for ((m, n), s) in f.iter() {
        let mut term = Symbol::one();
        for _ in 0..m {
            term = term.mul(p_image);
        }
        for _ in 0..n {
            term = term.mul(q_image);
        }
        out = out.add(&term.scale_series(s));
    }
    out
}

/// Coordinates of the monomial-generator flow e^{−iγ t̂ₘₙ-image} with
/// β = γħ. The solvable patterns use the exact characteristic solution from
/// the symbol layer; everything else integrates the characteristic system
/// numerically at tolerance 1e−10.
fn monomial_flow_eval(m: u32, n: u32, beta: f64, p: C64, q: C64) -> Result<(C64, C64), Error> {
    use crate::scalar::Coeff;
    // fast path: the Riccati pair (2,1)/(1,2) and the shift family, solved
    // in closed form to keep the map exactly evaluable near its pole
    match (m, n) {
        (2, 1) => {
            let d = C64::new(1.0, 0.0) + p * beta;
            if d.norm() < 1e-13 {
                return Err(Error::SingularPoint { p: p.re, q: q.re });
            }
            return Ok((p / d, q * d * d));
        }
        (1, 2) => {
            let d = C64::new(1.0, 0.0) - q * beta;
            if d.norm() < 1e-13 {
                return Err(Error::SingularPoint { p: p.re, q: q.re });
            }
            return Ok((p * d * d, q / d));
        }
        (1, 0) => return Ok((p, q + beta)),
        (0, 1) => return Ok((p - beta, q)),
        (2, 0) => return Ok((p, q + p * (2.0 * beta))),
        (0, 2) => return Ok((p - q * (2.0 * beta), q)),
        _ => {}
    }
    // symbolic closed form at ħ = 1 with γ = −β (β = γħ scales out)
    let gamma = -beta;
    let v = monomial_image::<Exact>(m, n);
    let g_exact = {
        let r = (gamma * (1u64 << 32) as f64).round() as i64;
        Exact::from_ratio(r, 1i64 << 32)
    };
    let sym_p = flow_exact(&v, &g_exact, &Symbol::p());
    let sym_q = flow_exact(&v, &g_exact, &Symbol::q());
    if let (Ok(fp), Ok(fq)) = (sym_p, sym_q) {
        if p.im == 0.0 && q.im == 0.0 {
            let pv = eval_flow(&fp, p.re, q.re)?;
            let qv = eval_flow(&fq, p.re, q.re)?;
            return Ok((pv, qv));
        }
    }
    // numeric characteristics of the first-order part:
    // (ṗ, q̇) = (−β ∂qH, β ∂pH) with H = p^m q^n
    let field = move |pp: C64, qq: C64| -> (C64, C64) {
        let h_q = if n > 0 {
            pp.powu(m) * qq.powu(n - 1) * n as f64
        } else {
            C64::new(0.0, 0.0)
        };
        let h_p = if m > 0 {
            pp.powu(m - 1) * qq.powu(n) * m as f64
        } else {
            C64::new(0.0, 0.0)
        };
        (-h_q * beta, h_p * beta)
    };
    characteristic_endpoint(&field, p.re, q.re)
}

fn eval_flow(f: &FlowSymbol<Exact>, p: f64, q: f64) -> Result<C64, Error> {
    f.eval(p, q, 1.0)
}
