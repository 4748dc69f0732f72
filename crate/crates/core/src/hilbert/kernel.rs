//! Integral kernels of invertible transformations in the four
//! position/momentum representations, with a first-class delta-type form.
//!
//! Delta-type kernels are applied analytically (interpolation at the mapped
//! coordinate); rasterizing them onto a dense table is the main numerical
//! hazard of this whole construction and is never done.

use crate::error::Error;
use crate::grid::fd::derivative_1d;
use crate::grid::GridSymbol;
use crate::hilbert::wavefunction::{MomentumWavefunction, Samples1D, Wavefunction};
use crate::scalar::Real;
use num_complex::Complex;
use std::io::Write;

/// Which representation a two-argument kernel lives in.
///
/// * `F(y, x)` — position in, position out
/// * `K(y, p_x)` — momentum in, position out
/// * `H(p_y, p_x)` — momentum in, momentum out
/// * `L(p_y, x)` — position in, momentum out
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelVariant {
    F,
    K,
    H,
    L,
}

/// Uniform 1-D grid descriptor.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid1<R: Real> {
    pub min: R,
    pub max: R,
    pub n: usize,
}

impl<R: Real> Grid1<R> {
    pub fn new(min: R, max: R, n: usize) -> Self {
        Self { min, max, n }
    }
    pub fn dx(&self) -> R {
        (self.max - self.min) / R::from_usize(self.n - 1).unwrap()
    }
    pub fn x(&self, i: usize) -> R {
        self.min + self.dx() * R::from_usize(i).unwrap()
    }
}

#[derive(Clone, Debug)]
pub enum IntegralKernel<R: Real> {
    /// Dense sample table, out-major: values[iy * in.n + ix].
    Dense {
        variant: KernelVariant,
        out_grid: Grid1<R>,
        in_grid: Grid1<R>,
        hbar: R,
        values: Vec<Complex<R>>,
    },
    /// Point-map kernel: (Ûφ)(y) = w(y)·[φ(x₀(y)) + i·curvature·φ″(x₀(y))].
    /// The curvature term is the first stationary-phase correction used by
    /// near-identity quadratic kernels; it is zero for true point maps.
    Delta {
        variant: KernelVariant,
        out_grid: Grid1<R>,
        hbar: R,
        x0: Vec<R>,
        weight: Vec<Complex<R>>,
        curvature: Option<R>,
    },
}

impl<R: Real> IntegralKernel<R> {
    pub fn variant(&self) -> KernelVariant {
        match self {
            IntegralKernel::Dense { variant, .. } => *variant,
            IntegralKernel::Delta { variant, .. } => *variant,
        }
    }

    /// Identity kernel on a grid (delta-type, F representation).
    pub fn identity(out_grid: Grid1<R>, hbar: R) -> Self {
        let x0 = (0..out_grid.n).map(|i| out_grid.x(i)).collect();
        let weight = vec![Complex::new(R::one(), R::zero()); out_grid.n];
        IntegralKernel::Delta {
            variant: KernelVariant::F,
            out_grid,
            hbar,
            x0,
            weight,
            curvature: None,
        }
    }

    /// Apply to a position-space wavefunction (F or L variants).
    pub fn apply_position(&self, phi: &Wavefunction<R>) -> Result<TransformedField<R>, Error> {
        match self.variant() {
            KernelVariant::F => Ok(TransformedField::Position(Wavefunction(
                self.apply_samples(&phi.0, false)?,
            ))),
            KernelVariant::L => Ok(TransformedField::Momentum(MomentumWavefunction(
                self.apply_samples(&phi.0, false)?,
            ))),
            _ => Err(Error::Unsupported(
                "kernel expects a momentum-representation input".into(),
            )),
        }
    }

    /// Apply to a momentum-space wavefunction (K or H variants).
    pub fn apply_momentum(
        &self,
        phi: &MomentumWavefunction<R>,
    ) -> Result<TransformedField<R>, Error> {
        match self.variant() {
            KernelVariant::K => Ok(TransformedField::Position(Wavefunction(
                self.apply_samples(&phi.0, true)?,
            ))),
            KernelVariant::H => Ok(TransformedField::Momentum(MomentumWavefunction(
                self.apply_samples(&phi.0, true)?,
            ))),
            _ => Err(Error::Unsupported(
                "kernel expects a position-representation input".into(),
            )),
        }
    }

    /// Quadrature (dense) or interpolation (delta) against input samples.
    /// Momentum-side integrals carry the dμ = dp/(2πħ) measure.
    fn apply_samples(
        &self,
        phi: &Samples1D<R>,
        momentum_measure: bool,
    ) -> Result<Samples1D<R>, Error> {
        match self {
            IntegralKernel::Dense {
                out_grid,
                in_grid,
                hbar,
                values,
                ..
            } => {
                if phi.n != in_grid.n
                    || (phi.min - in_grid.min).abs().to_f() > 1e-10
                    || (phi.max - in_grid.max).abs().to_f() > 1e-10
                {
                    return Err(Error::GridMismatch(
                        "kernel input grid vs wavefunction grid".into(),
                    ));
                }
                let mut measure = in_grid.dx();
                if momentum_measure {
                    measure = measure / (R::from_f(2.0 * std::f64::consts::PI) * *hbar);
                }
                let mut out = Samples1D {
                    min: out_grid.min,
                    max: out_grid.max,
                    n: out_grid.n,
                    hbar: *hbar,
                    values: Vec::with_capacity(out_grid.n),
                };
                for i in 0..out_grid.n {
                    let mut acc = Complex::new(R::zero(), R::zero());
                    for j in 0..in_grid.n {
                        let w = if j == 0 || j + 1 == in_grid.n { 0.5 } else { 1.0 };
                        acc = acc + values[i * in_grid.n + j] * phi.values[j] * R::from_f(w);
                    }
                    out.values.push(acc * measure);
                }
                Ok(out)
            }
            IntegralKernel::Delta {
                out_grid,
                hbar,
                x0,
                weight,
                curvature,
                ..
            } => {
                let second = if curvature.is_some() {
                    Some(derivative_1d(&phi.values, phi.dx(), 2, 8))
                } else {
                    None
                };
                let mut out = Samples1D {
                    min: out_grid.min,
                    max: out_grid.max,
                    n: out_grid.n,
                    hbar: *hbar,
                    values: Vec::with_capacity(out_grid.n),
                };
                for i in 0..out_grid.n {
                    let mut v = phi.interp_cubic(x0[i])?;
                    if let (Some(c), Some(d2)) = (curvature, &second) {
                        let d2v = crate::hilbert::wavefunction::interp_uniform(
                            d2,
                            phi.min,
                            phi.dx(),
                            x0[i],
                            4,
                        )?;
                        v = v + Complex::new(R::zero(), *c) * d2v;
                    }
                    out.values.push(weight[i] * v);
                }
                Ok(out)
            }
        }
    }

    /// Dense kernels export as CSV `y,x,re,im`; delta kernels as JSON with
    /// map and weight samples.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        match self {
            IntegralKernel::Dense {
                out_grid,
                in_grid,
                values,
                ..
            } => {
                writeln!(w, "y,x,re,im")?;
                for i in 0..out_grid.n {
                    for j in 0..in_grid.n {
                        let v = values[i * in_grid.n + j];
                        writeln!(w, "{},{},{},{}", out_grid.x(i), in_grid.x(j), v.re, v.im)?;
                    }
                }
                Ok(())
            }
            IntegralKernel::Delta { .. } => {
                let json = self.delta_json().expect("delta kernel");
                write!(w, "{}", serde_json::to_string_pretty(&json).unwrap())
            }
        }
    }

    pub fn delta_json(&self) -> Option<serde_json::Value> {
        if let IntegralKernel::Delta {
            out_grid,
            x0,
            weight,
            ..
        } = self
        {
            let map_samples: Vec<serde_json::Value> = (0..out_grid.n)
                .map(|i| serde_json::json!({"y": out_grid.x(i).to_f(), "x0": x0[i].to_f()}))
                .collect();
            let weight_samples: Vec<serde_json::Value> = (0..out_grid.n)
                .map(|i| {
                    serde_json::json!({
                        "y": out_grid.x(i).to_f(),
                        "re": weight[i].re.to_f(),
                        "im": weight[i].im.to_f(),
                    })
                })
                .collect();
            Some(serde_json::json!({
                "map_samples": map_samples,
                "weight_samples": weight_samples,
            }))
        } else {
            None
        }
    }
}

/// Output of a kernel application: whichever representation the variant maps
/// into.
#[derive(Clone, Debug)]
pub enum TransformedField<R: Real> {
    Position(Wavefunction<R>),
    Momentum(MomentumWavefunction<R>),
}

impl<R: Real> TransformedField<R> {
    pub fn expect_position(self) -> Wavefunction<R> {
        match self {
            TransformedField::Position(w) => w,
            _ => panic!("expected a position-space result"),
        }
    }
    pub fn expect_momentum(self) -> MomentumWavefunction<R> {
        match self {
            TransformedField::Momentum(w) => w,
            _ => panic!("expected a momentum-space result"),
        }
    }
}

/// Smooth cosine edge taper over the outer `frac` of a symmetric window;
/// suppresses the truncation ringing of oscillatory integrands.
fn taper(i: usize, n: usize, frac: f64) -> f64 {
    let edge = (n as f64 * frac).ceil() as usize;
    let d = i.min(n - 1 - i);
    if d >= edge {
        1.0
    } else {
        let t = d as f64 / edge as f64;
        0.5 * (1.0 - (std::f64::consts::PI * t).cos())
    }
}

/// Position-representation kernel from a phase-space symbol:
/// e^{iF(y,x)} = ∫ dp/(2πħ) e^{−ip(x−y)/ħ} u(p, (x+y)/2).
///
/// If the symbol's p-dependence is a pure linear phase e^{icp/ħ} the p
/// integral is a delta and the kernel is emitted in delta form with the map
/// x₀(y) = y + c; otherwise the integral is done by tapered trapezoid
/// quadrature and the result is checked for aliasing at the grid edge.
pub fn kernel_from_u<R: Real>(
    u: &GridSymbol<R>,
    out_grid: Grid1<R>,
    in_grid: Grid1<R>,
) -> Result<IntegralKernel<R>, Error> {
    let hbar = u.spec.hbar;
    if let Some((shift, row)) = linear_phase_in_p(u) {
        // u(p,q) = e^{i·shift·p/ħ} v(q): point map y ↦ y + shift with weight
        // v evaluated at the midpoint (y + shift/2)
        let mut x0 = Vec::with_capacity(out_grid.n);
        let mut weight = Vec::with_capacity(out_grid.n);
        for i in 0..out_grid.n {
            let y = out_grid.x(i);
            x0.push(y + shift);
            let mid = y + shift / R::from_f(2.0);
            let v = crate::hilbert::wavefunction::interp_uniform(
                &row,
                u.spec.q_min,
                u.spec.dq(),
                mid,
                8,
            )?;
            weight.push(v);
        }
        return Ok(IntegralKernel::Delta {
            variant: KernelVariant::F,
            out_grid,
            hbar,
            x0,
            weight,
            curvature: None,
        });
    }

    // undersampling guard: the p quadrature must resolve both the symbol's
    // own phase and the transform phase e^{−ip(x−y)/ħ}
    let max_sep = (out_grid.max - in_grid.min)
        .abs()
        .max((in_grid.max - out_grid.min).abs());
    let u_phase_step = max_phase_step_along_p(u);
    let dp_f = u.spec.dp();
    let step = u_phase_step + (max_sep * dp_f / hbar).to_f();
    if step > 2.8 {
        return Err(Error::Aliasing {
            edge: step,
            limit: 2.8,
        });
    }

    let np = u.spec.np;
    let dp = u.spec.dp();
    let two_pi_h = R::from_f(2.0 * std::f64::consts::PI) * hbar;
    let mut values = vec![Complex::new(R::zero(), R::zero()); out_grid.n * in_grid.n];
    for iy in 0..out_grid.n {
        let y = out_grid.x(iy);
        for jx in 0..in_grid.n {
            let x = in_grid.x(jx);
            let mid = (x + y) / R::from_f(2.0);
            if mid < u.spec.q_min || mid > u.spec.q_max {
                return Err(Error::OutOfRange {
                    x: mid.to_f(),
                    lo: u.spec.q_min.to_f(),
                    hi: u.spec.q_max.to_f(),
                });
            }
            let sep = x - y;
            let mut acc = Complex::new(R::zero(), R::zero());
            for l in 0..np {
                let p = u.spec.p(l);
                let row = &u.values[l * u.spec.nq..(l + 1) * u.spec.nq];
                let uv = crate::hilbert::wavefunction::interp_uniform(
                    row,
                    u.spec.q_min,
                    u.spec.dq(),
                    mid,
                    8,
                )?;
                let phase = -p * sep / hbar;
                let w = R::from_f(taper(l, np, 0.15));
                acc = acc + uv * Complex::new(phase.cos(), phase.sin()) * w;
            }
            values[iy * in_grid.n + jx] = acc * dp / two_pi_h;
        }
    }
    Ok(IntegralKernel::Dense {
        variant: KernelVariant::F,
        out_grid,
        in_grid,
        hbar,
        values,
    })
}

/// Largest phase increment (radians) between consecutive p samples of the
/// symbol, over nodes with non-negligible magnitude.
fn max_phase_step_along_p<R: Real>(u: &GridSymbol<R>) -> f64 {
    let mut worst = 0.0f64;
    let peak = u.values.iter().map(|v| v.norm().to_f()).fold(0.0, f64::max);
    for l in 0..u.spec.np - 1 {
        for j in 0..u.spec.nq {
            let a = u.at(l, j);
            let b = u.at(l + 1, j);
            if a.norm().to_f() < 1e-6 * peak || b.norm().to_f() < 1e-6 * peak {
                continue;
            }
            let r = b / a;
            worst = worst.max(r.im.to_f().atan2(r.re.to_f()).abs());
        }
    }
    worst
}

/// Momentum-representation kernel
/// e^{iH(p_y,p_x)} = ∫ dq e^{iq(p_x−p_y)/ħ} u((p_y+p_x)/2, q).
/// A q-independent symbol gives the delta form p₀(p_y) = p_y with weight
/// u(p_y); otherwise dense tapered quadrature.
pub fn kernel_from_u_momentum<R: Real>(
    u: &GridSymbol<R>,
    out_grid: Grid1<R>,
    in_grid: Grid1<R>,
) -> Result<IntegralKernel<R>, Error> {
    let hbar = u.spec.hbar;
    if q_independent(u) {
        let mut x0 = Vec::with_capacity(out_grid.n);
        let mut weight = Vec::with_capacity(out_grid.n);
        // column of u at the first q node, as a function of p
        let col: Vec<Complex<R>> = (0..u.spec.np).map(|l| u.at(l, 0)).collect();
        for i in 0..out_grid.n {
            let py = out_grid.x(i);
            x0.push(py);
            let v = crate::hilbert::wavefunction::interp_uniform(
                &col,
                u.spec.p_min,
                u.spec.dp(),
                py,
                8,
            )?;
            weight.push(v);
        }
        return Ok(IntegralKernel::Delta {
            variant: KernelVariant::H,
            out_grid,
            hbar,
            x0,
            weight,
            curvature: None,
        });
    }

    let nq = u.spec.nq;
    let dq = u.spec.dq();
    let mut values = vec![Complex::new(R::zero(), R::zero()); out_grid.n * in_grid.n];
    for iy in 0..out_grid.n {
        let py = out_grid.x(iy);
        for jx in 0..in_grid.n {
            let px = in_grid.x(jx);
            let mid = (px + py) / R::from_f(2.0);
            if mid < u.spec.p_min || mid > u.spec.p_max {
                return Err(Error::OutOfRange {
                    x: mid.to_f(),
                    lo: u.spec.p_min.to_f(),
                    hi: u.spec.p_max.to_f(),
                });
            }
            let mut acc = Complex::new(R::zero(), R::zero());
            for j in 0..nq {
                let q = u.spec.q(j);
                // u at (mid, q_j): interpolate along p
                let col: Vec<Complex<R>> =
                    (0..u.spec.np).map(|l| u.at(l, j)).collect();
                let uv = crate::hilbert::wavefunction::interp_uniform(
                    &col,
                    u.spec.p_min,
                    u.spec.dp(),
                    mid,
                    8,
                )?;
                let phase = q * (px - py) / hbar;
                let w = R::from_f(taper(j, nq, 0.15));
                acc = acc + uv * Complex::new(phase.cos(), phase.sin()) * w;
            }
            values[iy * in_grid.n + jx] = acc * dq;
        }
    }
    Ok(IntegralKernel::Dense {
        variant: KernelVariant::H,
        out_grid,
        in_grid,
        hbar,
        values,
    })
}

/// Mixed kernel K(y, p_x): built from the momentum-representation kernel by
/// the inverse transform on the output leg. For a delta-type H with the
/// trivial map this collapses to K(y,p_x) = e^{iyp_x/ħ} w(p_x).
pub fn kernel_from_u_mixed<R: Real>(
    u: &GridSymbol<R>,
    out_grid: Grid1<R>,
    in_grid: Grid1<R>,
) -> Result<IntegralKernel<R>, Error> {
    let hbar = u.spec.hbar;
    let h = kernel_from_u_momentum(u, in_grid.clone(), in_grid.clone())?;
    match &h {
        IntegralKernel::Delta {
            x0, weight, ..
        } => {
            // trivial map: (Ũφ)(p) = w(p) φ̃(p)
            let trivial = x0
                .iter()
                .enumerate()
                .all(|(i, &v)| (v - in_grid.x(i)).abs().to_f() < 1e-10);
            if !trivial {
                return Err(Error::Unsupported(
                    "mixed kernel needs a trivial momentum map".into(),
                ));
            }
            let mut values = vec![Complex::new(R::zero(), R::zero()); out_grid.n * in_grid.n];
            for iy in 0..out_grid.n {
                let y = out_grid.x(iy);
                for jx in 0..in_grid.n {
                    let px = in_grid.x(jx);
                    let phase = y * px / hbar;
                    values[iy * in_grid.n + jx] =
                        Complex::new(phase.cos(), phase.sin()) * weight[jx];
                }
            }
            Ok(IntegralKernel::Dense {
                variant: KernelVariant::K,
                out_grid,
                in_grid,
                hbar,
                values,
            })
        }
        IntegralKernel::Dense {
            in_grid: h_in,
            out_grid: h_out,
            values: hv,
            ..
        } => {
            // K(y,p_x) = ∫ dp_y/(2πħ) e^{iyp_y/ħ} H(p_y, p_x)
            let dpy = h_out.dx();
            let two_pi_h = R::from_f(2.0 * std::f64::consts::PI) * hbar;
            let mut values =
                vec![Complex::new(R::zero(), R::zero()); out_grid.n * in_grid.n];
            for iy in 0..out_grid.n {
                let y = out_grid.x(iy);
                for jx in 0..h_in.n {
                    let mut acc = Complex::new(R::zero(), R::zero());
                    for l in 0..h_out.n {
                        let py = h_out.x(l);
                        let phase = y * py / hbar;
                        let w = R::from_f(taper(l, h_out.n, 0.15));
                        acc = acc
                            + hv[l * h_in.n + jx] * Complex::new(phase.cos(), phase.sin()) * w;
                    }
                    values[iy * in_grid.n + jx] = acc * dpy / two_pi_h;
                }
            }
            Ok(IntegralKernel::Dense {
                variant: KernelVariant::K,
                out_grid,
                in_grid,
                hbar,
                values,
            })
        }
    }
}

/// Momentum-out kernel L(p_y, x): built from the position kernel by a
/// transform on the output leg, (Ũφ)(p_y) = ∫dy e^{−ip_y y/ħ}(Ûφ)(y).
/// An affine point kernel collapses analytically; dense kernels chain
/// through tapered quadrature.
pub fn kernel_from_u_momentum_out<R: Real>(
    u: &GridSymbol<R>,
    out_grid: Grid1<R>,
    in_grid: Grid1<R>,
) -> Result<IntegralKernel<R>, Error> {
    let hbar = u.spec.hbar;
    let f = kernel_from_u(u, in_grid.clone(), in_grid.clone())?;
    match &f {
        IntegralKernel::Delta {
            out_grid: fg,
            x0,
            weight,
            ..
        } => {
            // affine map x0(y) = y + c
            let c = x0[0] - fg.x(0);
            for (i, &v) in x0.iter().enumerate() {
                if (v - fg.x(i) - c).abs().to_f() > 1e-9 {
                    return Err(Error::Unsupported(
                        "momentum-out synthesis needs an affine point map".into(),
                    ));
                }
            }
            let mut values = vec![Complex::new(R::zero(), R::zero()); out_grid.n * in_grid.n];
            for iy in 0..out_grid.n {
                let py = out_grid.x(iy);
                for jx in 0..in_grid.n {
                    let x = in_grid.x(jx);
                    let y = x - c;
                    if y < fg.min || y > fg.max {
                        continue; // weight unknown outside; kernel is zero there
                    }
                    let w = crate::hilbert::wavefunction::interp_uniform(
                        weight,
                        fg.min,
                        fg.dx(),
                        y,
                        8,
                    )?;
                    let phase = -py * y / hbar;
                    values[iy * in_grid.n + jx] =
                        w * Complex::new(phase.cos(), phase.sin());
                }
            }
            Ok(IntegralKernel::Dense {
                variant: KernelVariant::L,
                out_grid,
                in_grid,
                hbar,
                values,
            })
        }
        IntegralKernel::Dense {
            out_grid: fo,
            in_grid: fi,
            values: fv,
            ..
        } => {
            let dy = fo.dx();
            let mut values = vec![Complex::new(R::zero(), R::zero()); out_grid.n * in_grid.n];
            for iy in 0..out_grid.n {
                let py = out_grid.x(iy);
                for jx in 0..fi.n {
                    let mut acc = Complex::new(R::zero(), R::zero());
                    for l in 0..fo.n {
                        let y = fo.x(l);
                        let phase = -py * y / hbar;
                        let w = R::from_f(taper(l, fo.n, 0.15));
                        acc = acc
                            + fv[l * fi.n + jx] * Complex::new(phase.cos(), phase.sin()) * w;
                    }
                    values[iy * in_grid.n + jx] = acc * dy;
                }
            }
            Ok(IntegralKernel::Dense {
                variant: KernelVariant::L,
                out_grid,
                in_grid,
                hbar,
                values,
            })
        }
    }
}

/// Detect u(p,q) = e^{i·c·p/ħ}·v(q); returns (c, v sampled on the q grid).
fn linear_phase_in_p<R: Real>(u: &GridSymbol<R>) -> Option<(R, Vec<Complex<R>>)> {
    let np = u.spec.np;
    let nq = u.spec.nq;
    // ratio between consecutive p rows must be a constant unit phase; the
    // tolerance admits symbols assembled by truncated star products, whose
    // coefficients are only good to ~1e−6
    const TOL: f64 = 3e-5;
    let mut ratio: Option<Complex<R>> = None;
    for l in 0..np - 1 {
        for j in 0..nq {
            let a = u.at(l, j);
            let b = u.at(l + 1, j);
            if a.norm().to_f() < 1e-13 {
                return None;
            }
            let r = b / a;
            if (r.norm().to_f() - 1.0).abs() > TOL {
                return None;
            }
            match &ratio {
                None => ratio = Some(r),
                Some(r0) => {
                    if (r - *r0).norm().to_f() > TOL {
                        return None;
                    }
                }
            }
        }
    }
    let r = ratio?;
    let c = u.spec.hbar * R::from_f(r.im.to_f().atan2(r.re.to_f())) / u.spec.dp();
    // v(q) = u(p,q) e^{−icp/ħ} read off the first row
    let p0 = u.spec.p(0);
    let phase = -c * p0 / u.spec.hbar;
    let e = Complex::new(phase.cos(), phase.sin());
    let v: Vec<Complex<R>> = (0..nq).map(|j| u.at(0, j) * e).collect();
    // validate the factorization everywhere
    for l in 0..np {
        let p = u.spec.p(l);
        let ph = c * p / u.spec.hbar;
        let el = Complex::new(ph.cos(), ph.sin());
        for j in 0..nq {
            if (u.at(l, j) - v[j] * el).norm().to_f()
                > TOL * (1.0 + u.at(l, j).norm().to_f())
            {
                return None;
            }
        }
    }
    Some((c, v))
}

fn q_independent<R: Real>(u: &GridSymbol<R>) -> bool {
    let mut max_var = 0.0f64;
    let mut max_abs = 0.0f64;
    for l in 0..u.spec.np {
        let first = u.at(l, 0);
        for j in 0..u.spec.nq {
            max_var = max_var.max((u.at(l, j) - first).norm().to_f());
            max_abs = max_abs.max(u.at(l, j).norm().to_f());
        }
    }
    max_var <= 1e-10 * max_abs.max(1.0)
}

/// Interior max-norm of conj(u) ⋆ u − 1: zero for star-unitary symbols.
pub fn unitarity_residual<R: Real>(u: &GridSymbol<R>) -> Result<f64, Error> {
    let star = crate::grid::grid_star(&u.conj(), u, 8, 8)?;
    let one = GridSymbol::constant(&u.spec, Complex::new(R::one(), R::zero()));
    star.value.interior_max_diff(&one, star.interior_band)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    #[test]
    fn identity_kernel_is_identity() {
        let psi = Wavefunction::<f64>::gaussian(-8.0, 8.0, 256, 1.0, 0.3, 0.5);
        let k = IntegralKernel::identity(Grid1::new(-8.0, 8.0, 256), 1.0);
        let out = k.apply_position(&psi).unwrap().expect_position();
        let d = psi.0.l2_distance(&out.0);
        assert!(d < 1e-10, "{d}");
    }

    #[test]
    fn kernel_from_constant_u_is_identity_delta() {
        let spec = GridSpec::<f64>::square(6.0, 64, 1.0).unwrap();
        let u = GridSymbol::constant(&spec, Complex::new(1.0, 0.0));
        let k = kernel_from_u(&u, Grid1::new(-5.0, 5.0, 128), Grid1::new(-5.0, 5.0, 128))
            .unwrap();
        match &k {
            IntegralKernel::Delta { x0, weight, .. } => {
                for (i, &x) in x0.iter().enumerate() {
                    assert!((x - (-5.0 + 10.0 * i as f64 / 127.0)).abs() < 1e-10);
                }
                assert!(weight
                    .iter()
                    .all(|w| (w - Complex::new(1.0, 0.0)).norm() < 1e-10));
            }
            _ => panic!("expected a delta kernel"),
        }
    }

    #[test]
    fn translation_u_gives_shift_kernel() {
        // u = e^{iαp/ħ} acts as φ(y) ↦ φ(y + α)
        let alpha = 0.75;
        let spec = GridSpec::<f64>::square(10.0, 64, 1.0).unwrap();
        let u = GridSymbol::sample(&spec, |p, _| {
            Ok(Complex::new(0.0, alpha * p).exp())
        })
        .unwrap();
        let k = kernel_from_u(&u, Grid1::new(-6.0, 6.0, 224), Grid1::new(-8.0, 8.0, 256))
            .unwrap();
        let psi = Wavefunction::<f64>::gaussian(-8.0, 8.0, 256, 1.0, 0.0, 0.0);
        let out = k.apply_position(&psi).unwrap().expect_position();
        let mut max_d = 0.0f64;
        for i in 0..out.0.n {
            let y = out.0.x(i);
            let want = std::f64::consts::PI.powf(-0.25)
                * (-(y + alpha) * (y + alpha) / 2.0).exp();
            max_d = max_d.max((out.0.values[i] - Complex::new(want, 0.0)).norm());
        }
        assert!(max_d < 1e-6, "{max_d}");
    }

    #[test]
    fn unitarity_residual_of_one_is_zero() {
        let spec = GridSpec::<f64>::square(3.0, 64, 1.0).unwrap();
        let u = GridSymbol::constant(&spec, Complex::new(1.0, 0.0));
        assert!(unitarity_residual(&u).unwrap() < 1e-14);
    }
}
