//! Exponential flows e^{iγV} of phase-space generators applied to symbols.

use super::bopp::BoppOperator;
use super::poly::PolySymbol;
use crate::error::Error;
use crate::scalar::Coeff;
use num_complex::Complex;

/// Ratio of two polynomial symbols. Closed-form flow results that leave the
/// polynomial ring (e.g. Riccati-type flows) live here.
#[derive(Clone, Debug)]
pub struct RationalSymbol<C: Coeff> {
    pub num: PolySymbol<C>,
    pub den: PolySymbol<C>,
}

impl<C: Coeff> RationalSymbol<C> {
    pub fn from_poly(p: PolySymbol<C>) -> Self {
        Self {
            num: p,
            den: PolySymbol::one(),
        }
    }

    /// Equality as rational functions (cross multiplication; denominators are
    /// nowhere identically zero by construction).
    pub fn equivalent(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    pub fn d_p(&self) -> Self {
        Self {
            num: self.num.d_p().mul(&self.den).sub(&self.num.mul(&self.den.d_p())),
            den: self.den.mul(&self.den),
        }
    }

    pub fn d_q(&self) -> Self {
        Self {
            num: self.num.d_q().mul(&self.den).sub(&self.num.mul(&self.den.d_q())),
            den: self.den.mul(&self.den),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, p: f64, q: f64, hbar: f64) -> Result<Complex<f64>, Error> {
        let d = self.den.eval(p, q, hbar);
        if d.norm() < 1e-14 {
            return Err(Error::SingularPoint { p, q });
        }
        Ok(self.num.eval(p, q, hbar) / d)
    }
}

/// Apply one normal-ordered Bopp term pattern to a rational symbol.
fn apply_bopp_rational<C: Coeff>(
    op: &BoppOperator<C>,
    f: &RationalSymbol<C>,
) -> RationalSymbol<C> {
    // Work term by term over a common accumulation: sum of rationals.
    let mut acc: Option<RationalSymbol<C>> = None;
    for ((m, n, a, b), s) in op.terms() {
        let mut g = f.clone();
        for _ in 0..a {
            g = g.d_p();
        }
        for _ in 0..b {
            g = g.d_q();
        }
        let num = g
            .num
            .mul(&PolySymbol::monomial(m, n))
            .scale_series(s);
        let term = RationalSymbol { num, den: g.den };
        acc = Some(match acc {
            None => term,
            Some(prev) => RationalSymbol {
                num: prev.num.mul(&term.den).add(&term.num.mul(&prev.den)),
                den: prev.den.mul(&term.den),
            },
        });
    }
    acc.unwrap_or_else(|| RationalSymbol::from_poly(PolySymbol::zero()))
}

/// Result of a flow application.
#[derive(Clone, Debug)]
pub enum FlowSymbol<C: Coeff> {
    Poly(PolySymbol<C>),
    Rational(RationalSymbol<C>),
}

impl<C: Coeff> FlowSymbol<C> {
    pub fn as_rational(&self) -> RationalSymbol<C> {
        match self {
            FlowSymbol::Poly(p) => RationalSymbol::from_poly(p.clone()),
            FlowSymbol::Rational(r) => r.clone(),
        }
    }

    pub fn eval(&self, p: f64, q: f64, hbar: f64) -> Result<Complex<f64>, Error> {
        self.as_rational().eval(p, q, hbar)
    }
}

/// How to apply an exponential flow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowMode {
    /// Closed-form characteristics; rejects generators whose
    /// higher-derivative part acts on the transported symbol.
    ExactCharacteristics,
    /// Truncated series of the given order with a reported remainder.
    Series(u32),
}

/// Flow result plus the truncation report for the series mode.
#[derive(Clone, Debug)]
pub struct FlowOutcome<C: Coeff> {
    pub symbol: FlowSymbol<C>,
    /// Size of the first omitted series term (None in exact mode).
    pub series_remainder: Option<f64>,
}

/// e^{iγV} f in the requested mode.
pub fn flow_apply<C: Coeff>(
    v: &BoppOperator<C>,
    gamma: &C,
    f: &PolySymbol<C>,
    mode: FlowMode,
) -> Result<FlowOutcome<C>, Error> {
    match mode {
        FlowMode::ExactCharacteristics => Ok(FlowOutcome {
            symbol: flow_exact(v, gamma, f)?,
            series_remainder: None,
        }),
        FlowMode::Series(order) => {
            let (poly, remainder) = flow_series(v, gamma, f, order);
            Ok(FlowOutcome {
                symbol: FlowSymbol::Poly(poly),
                series_remainder: Some(remainder),
            })
        }
    }
}

/// Truncated series Σₙ (iγ)ⁿ Vⁿ f / n! together with the size of the first
/// omitted term (coefficient magnitudes at ħ = 1). The remainder is always
/// reported, never silently dropped.
pub fn flow_series<C: Coeff>(
    v: &BoppOperator<C>,
    gamma: &C,
    f: &PolySymbol<C>,
    order: u32,
) -> (PolySymbol<C>, f64) {
    let i_gamma = C::i() * gamma.clone();
    let mut term = f.clone();
    let mut acc = f.clone();
    for n in 1..=order {
        term = v
            .apply(&term)
            .scale(&i_gamma)
            .scale(&C::from_ratio(1, n as i64));
        if term.is_zero() {
            return (acc, 0.0);
        }
        acc = acc.add(&term);
    }
    let omitted = v
        .apply(&term)
        .scale(&i_gamma)
        .scale(&C::from_ratio(1, (order + 1) as i64));
    (acc, omitted.norm_at(1.0))
}

/// Exact flow by characteristics for generators whose first-order part falls
/// in the solvable catalogue (coordinate shifts keyed by one variable, and the
/// two Riccati patterns). The higher-derivative remainder of the generator
/// must annihilate the transported symbol at every order of the flow
/// parameter; this is checked exactly and the call is rejected otherwise.
pub fn flow_exact<C: Coeff>(
    v: &BoppOperator<C>,
    gamma: &C,
    f: &PolySymbol<C>,
) -> Result<FlowSymbol<C>, Error> {
    let (low, high) = v.split_first_order();
    let (c0, a, b) = low.first_order_coefficients();
    if !c0.is_zero() {
        return Err(Error::UnsupportedGenerator(
            "generator has a zeroth-order part".into(),
        ));
    }

    if gamma.is_zero() {
        return Ok(FlowSymbol::Poly(f.clone()));
    }

    let i_gamma = C::i() * gamma.clone();
    // Effective vector field (ṗ, q̇) = (wa, wb) over unit time.
    let wa = a.scale(&i_gamma);
    let wb = b.scale(&i_gamma);

    let result: FlowSymbol<C> = if wa.is_zero() && wb.is_zero() {
        FlowSymbol::Poly(f.clone())
    } else if wa.is_zero() && wb.q_degree() == 0 {
        // pure q-shift by wb(p): substitute q -> q + wb(p)
        FlowSymbol::Poly(substitute(f, &PolySymbol::p(), &PolySymbol::q().add(&wb)))
    } else if wb.is_zero() && wa.p_degree() == 0 {
        // pure p-shift by wa(q)
        FlowSymbol::Poly(substitute(f, &PolySymbol::p().add(&wa), &PolySymbol::q()))
    } else if let Some(w) = riccati_p(&wa, &wb) {
        // ṗ = w p², q̇ = −2w pq  =>  P = p/(1−wp), Q = q(1−wp)²
        let den = PolySymbol::one().sub(&PolySymbol::p().scale_series(&w));
        rational_substitute_p_riccati(f, &den)?
    } else if let Some(w) = riccati_q(&wa, &wb) {
        let den = PolySymbol::one().sub(&PolySymbol::q().scale_series(&w));
        rational_substitute_q_riccati(f, &den)?
    } else {
        return Err(Error::UnsupportedGenerator(
            "first-order part outside the closed-form catalogue; use the series \
             mode or a numeric characteristic flow"
                .into(),
        ));
    };

    // The remainder must vanish on the orbit: check it on f, on the Taylor
    // germ of the orbit, and on the final symbol.
    if !high.is_zero() {
        let depth = f.total_degree() + 5;
        let mut g = f.clone();
        for _ in 0..=depth {
            if !high.apply(&g).is_zero() {
                return Err(Error::UnsupportedGenerator(
                    "higher-derivative part of the generator acts on the orbit"
                        .into(),
                ));
            }
            g = low.apply(&g);
            if g.is_zero() {
                break;
            }
        }
        if !apply_bopp_rational(&high, &result.as_rational()).is_zero() {
            return Err(Error::UnsupportedGenerator(
                "higher-derivative part of the generator acts on the result".into(),
            ));
        }
    }

    Ok(result)
}

/// Match (wa, wb) = (w p², −2w pq); returns the scalar ħ-series w.
fn riccati_p<C: Coeff>(
    wa: &PolySymbol<C>,
    wb: &PolySymbol<C>,
) -> Option<super::hbar::HbarSeries<C>> {
    if wa.num_terms() != 1 || wb.num_terms() != 1 {
        return None;
    }
    let w = wa.coeff(2, 0);
    if w.is_zero() {
        return None;
    }
    let expect = w.scale(&C::from_int(-2));
    if wb.coeff(1, 1) == expect {
        Some(w)
    } else {
        None
    }
}

fn riccati_q<C: Coeff>(
    wa: &PolySymbol<C>,
    wb: &PolySymbol<C>,
) -> Option<super::hbar::HbarSeries<C>> {
    if wa.num_terms() != 1 || wb.num_terms() != 1 {
        return None;
    }
    let w = wb.coeff(0, 2);
    if w.is_zero() {
        return None;
    }
    let expect = w.scale(&C::from_int(-2));
    if wa.coeff(1, 1) == expect {
        Some(w)
    } else {
        None
    }
}

/// Substitute polynomial images of the coordinates into f.
fn substitute<C: Coeff>(
    f: &PolySymbol<C>,
    p_image: &PolySymbol<C>,
    q_image: &PolySymbol<C>,
) -> PolySymbol<C> {
    let mut out = PolySymbol::zero();
    for ((m, n), s) in f.iter() {
        let mut term = PolySymbol::one();
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

/// Substitute P = p/den, Q = q·den² (den = 1 − w p) into f; the result has
/// denominator den^(max p-degree).
fn rational_substitute_p_riccati<C: Coeff>(
    f: &PolySymbol<C>,
    den: &PolySymbol<C>,
) -> Result<FlowSymbol<C>, Error> {
    let dmax = f.p_degree();
    let mut num = PolySymbol::zero();
    for ((m, n), s) in f.iter() {
        // p^m q^n -> p^m den^(2n) q^n / den^m ; bring to common den^dmax
        let mut t = PolySymbol::monomial(m, n);
        for _ in 0..(2 * n + (dmax - m)) {
            t = t.mul(den);
        }
        num = num.add(&t.scale_series(s));
    }
    let mut d = PolySymbol::one();
    for _ in 0..dmax {
        d = d.mul(den);
    }
    Ok(FlowSymbol::Rational(RationalSymbol { num, den: d }))
}

fn rational_substitute_q_riccati<C: Coeff>(
    f: &PolySymbol<C>,
    den: &PolySymbol<C>,
) -> Result<FlowSymbol<C>, Error> {
    let dmax = f.q_degree();
    let mut num = PolySymbol::zero();
    for ((m, n), s) in f.iter() {
        let mut t = PolySymbol::monomial(m, n);
        for _ in 0..(2 * m + (dmax - n)) {
            t = t.mul(den);
        }
        num = num.add(&t.scale_series(s));
    }
    let mut d = PolySymbol::one();
    for _ in 0..dmax {
        d = d.mul(den);
    }
    Ok(FlowSymbol::Rational(RationalSymbol { num, den: d }))
}

/// Numerically integrate the characteristic system of a first-order generator
/// and report the endpoint of the trajectory through (p, q).
///
/// Adaptive embedded Runge-Kutta with local tolerance 1e-10; trajectories
/// that approach a singularity of the field are rejected.
pub fn characteristic_endpoint(
    field: &dyn Fn(Complex<f64>, Complex<f64>) -> (Complex<f64>, Complex<f64>),
    p0: f64,
    q0: f64,
) -> Result<(Complex<f64>, Complex<f64>), Error> {
    let tol = 1e-10;
    let mut t = 0.0f64;
    let mut h = 0.1f64;
    let mut y = (Complex::new(p0, 0.0), Complex::new(q0, 0.0));
    let f = |y: (Complex<f64>, Complex<f64>)| field(y.0, y.1);
    let mut steps = 0usize;
    while t < 1.0 {
        if steps > 100_000 {
            return Err(Error::SingularPoint { p: p0, q: q0 });
        }
        steps += 1;
        if t + h > 1.0 {
            h = 1.0 - t;
        }
        // one RK4 step against two half steps for the error estimate
        let big = rk4_step(&f, y, h);
        let half = rk4_step(&f, rk4_step(&f, y, h / 2.0), h / 2.0);
        let err = (big.0 - half.0).norm() + (big.1 - half.1).norm();
        if err < tol * h.max(1e-3) {
            t += h;
            y = half;
            if err < tol * h * 0.01 {
                h *= 2.0;
            }
            if y.0.norm() > 1e10 || y.1.norm() > 1e10 {
                return Err(Error::SingularPoint { p: p0, q: q0 });
            }
        } else {
            h /= 2.0;
            if h < 1e-13 {
                return Err(Error::SingularPoint { p: p0, q: q0 });
            }
        }
    }
    Ok(y)
}

fn rk4_step<F>(
    f: &F,
    y: (Complex<f64>, Complex<f64>),
    h: f64,
) -> (Complex<f64>, Complex<f64>)
where
    F: Fn((Complex<f64>, Complex<f64>)) -> (Complex<f64>, Complex<f64>),
{
    let hc = Complex::new(h, 0.0);
    let k1 = f(y);
    let k2 = f((y.0 + hc * k1.0 * 0.5, y.1 + hc * k1.1 * 0.5));
    let k3 = f((y.0 + hc * k2.0 * 0.5, y.1 + hc * k2.1 * 0.5));
    let k4 = f((y.0 + hc * k3.0, y.1 + hc * k3.1));
    (
        y.0 + hc * (k1.0 + k2.0 * 2.0 + k3.0 * 2.0 + k4.0) / 6.0,
        y.1 + hc * (k1.1 + k2.1 * 2.0 + k3.1 * 2.0 + k4.1) / 6.0,
    )
}
