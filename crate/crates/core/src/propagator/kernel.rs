//! Propagator kernels G(p,q;s,t) built from phase-space transformation
//! kernels, and their application to grid symbols.

use super::airy::airy_ai;
use crate::error::Error;
use crate::grid::{grid_star, GridSpec, GridSymbol};
use num_complex::Complex;

type C64 = Complex<f64>;
type Grid = GridSymbol<f64>;
type Spec = GridSpec<f64>;

/// A propagator in one of three realizations.
#[derive(Clone, Debug)]
pub enum PropagatorKernel {
    /// G = (2πħ) u⁻¹ ⋆ δδ ⋆ u, applied as the star sandwich u⁻¹ ⋆ f ⋆ u.
    StarSandwich {
        u: Grid,
        u_inv: Grid,
        order: u32,
        /// interior residual of u ⋆ u⁻¹ − 1 after the inversion iteration
        inverse_residual: f64,
    },
    /// Dense table over (p,q) × (s,t); memory-quartic, so only built at
    /// reduced resolution.
    Dense {
        spec: Spec,
        values: Vec<C64>, // [(ip*nq+iq) * len + (is*nt+it)]
    },
    /// δ(p−s)-separable cubic-flow kernel: a 1-D Airy convolution along q,
    /// parametrized by p.
    CubicSeparable { a: f64 },
}

/// Star inverse of u by the quadratically convergent iteration
/// v ← v ⋆ (2 − u ⋆ v), seeded with the pointwise inverse.
pub fn star_inverse(u: &Grid, order: u32) -> Result<(Grid, f64), Error> {
    let one = GridSymbol::constant(&u.spec, C64::new(1.0, 0.0));
    let mut v = u.map(|z| {
        if z.norm() < 1e-300 {
            C64::new(0.0, 0.0)
        } else {
            1.0 / z
        }
    });
    let mut residual = f64::INFINITY;
    for _ in 0..12 {
        let uv = grid_star(u, &v, order, 8)?;
        let r = uv.value.interior_max_diff(&one, uv.interior_band)?;
        residual = r;
        if r < 1e-9 {
            break;
        }
        let two_minus = one.sub(&uv.value)?.add(&one)?;
        v = grid_star(&v, &two_minus, order, 8)?.value;
    }
    if residual > 1e-8 {
        return Err(Error::NoConvergence(format!(
            "star inverse stalled at residual {residual:.3e}"
        )));
    }
    Ok((v, residual))
}

/// Propagator from a transformation kernel (the route that never needs the
/// operator itself).
pub fn propagator_from_kernel(u: &Grid, order: u32) -> Result<PropagatorKernel, Error> {
    let (u_inv, inverse_residual) = star_inverse(u, order)?;
    Ok(PropagatorKernel::StarSandwich {
        u: u.clone(),
        u_inv,
        order,
        inverse_residual,
    })
}

/// Materialize the star sandwich as a dense table on a coarse grid by
/// pushing discrete delta columns through it.
pub fn dense_from_star(u: &Grid, u_inv: &Grid, order: u32) -> Result<PropagatorKernel, Error> {
    let spec = &u.spec;
    let len = spec.len();
    if len > 40 * 40 {
        return Err(Error::InvalidGrid(
            "dense propagators are only built at reduced resolution".into(),
        ));
    }
    let two_pi_h = 2.0 * std::f64::consts::PI * spec.hbar;
    let spike_mass = two_pi_h / (spec.dp() * spec.dq());
    let mut values = vec![C64::new(0.0, 0.0); len * len];
    for is in 0..spec.np {
        for it in 0..spec.nq {
            let mut delta = GridSymbol::zeros(spec);
            *delta.at_mut(is, it) = C64::new(spike_mass, 0.0);
            let mid = grid_star(u_inv, &delta, order, 8)?.value;
            let col = grid_star(&mid, u, order, 8)?.value;
            let sc = is * spec.nq + it;
            for idx in 0..len {
                values[idx * len + sc] = col.values[idx];
            }
        }
    }
    Ok(PropagatorKernel::Dense {
        spec: spec.clone(),
        values,
    })
}

/// Apply a propagator to a grid symbol.
pub fn apply_propagator(g: &PropagatorKernel, f: &Grid) -> Result<Grid, Error> {
    match g {
        PropagatorKernel::StarSandwich {
            u, u_inv, order, ..
        } => {
            if !u.spec.same_geometry(&f.spec) {
                return Err(Error::GridMismatch("propagator vs symbol".into()));
            }
            let mid = grid_star(u_inv, f, *order, 8)?.value;
            Ok(grid_star(&mid, u, *order, 8)?.value)
        }
        PropagatorKernel::Dense { spec, values } => {
            if !spec.same_geometry(&f.spec) {
                return Err(Error::GridMismatch("propagator vs symbol".into()));
            }
            let len = spec.len();
            let measure =
                spec.dp() * spec.dq() / (2.0 * std::f64::consts::PI * spec.hbar);
            let mut out = GridSymbol::zeros(spec);
            for idx in 0..len {
                let mut acc = C64::new(0.0, 0.0);
                for sc in 0..len {
                    acc += values[idx * len + sc] * f.values[sc];
                }
                out.values[idx] = acc * measure;
            }
            Ok(out)
        }
        PropagatorKernel::CubicSeparable { a } => apply_cubic_separable(*a, f),
    }
}

/// f'(p,q) = (1/2πħ) ∫ dt K_a(t − q + a p²) f(p,t) with the Airy-resummed
/// cubic-phase kernel K_a(u) = (4ħ/a)^{1/3} 2π Ai(u (4/(aħ²))^{1/3}).
///
/// The p marginal is untouched: each p row is convolved independently.
fn apply_cubic_separable(a: f64, f: &Grid) -> Result<Grid, Error> {
    if a <= 0.0 {
        return Err(Error::InvalidParameter(
            "cubic separable propagator needs a > 0".into(),
        ));
    }
    let spec = &f.spec;
    let hbar = spec.hbar;
    let scale = (4.0 * hbar / a).powf(1.0 / 3.0);
    let arg_scale = (4.0 / (a * hbar * hbar)).powf(1.0 / 3.0);
    let pref = scale / hbar; // (1/2πħ)·(4ħ/a)^{1/3}·2π
    let dt = spec.dq();
    let mut out = GridSymbol::zeros(spec);
    for i in 0..spec.np {
        let p = spec.p(i);
        let shear = a * p * p;
        for j in 0..spec.nq {
            let q = spec.q(j);
            let mut acc = C64::new(0.0, 0.0);
            for jt in 0..spec.nq {
                let t = spec.q(jt);
                let w = if jt == 0 || jt + 1 == spec.nq { 0.5 } else { 1.0 };
                let kernel = airy_ai(arg_scale * (t - q + shear));
                acc += f.at(i, jt) * (kernel * w);
            }
            *out.at_mut(i, j) = acc * (pref * dt);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::u_linear_potential;
    use crate::scalar::ExactC;
    use crate::symbolic::PolySymbol;

    #[test]
    fn identity_propagator() {
        let spec = Spec::square(4.0, 48, 1.0).unwrap();
        let u = GridSymbol::constant(&spec, C64::new(1.0, 0.0));
        let g = propagator_from_kernel(&u, 4).unwrap();
        let f = GridSymbol::sample(&spec, |p, q| {
            Ok(C64::new((-(p * p + q * q)).exp(), 0.1 * p))
        })
        .unwrap();
        let out = apply_propagator(&g, &f).unwrap();
        let d = out.interior_max_diff(&f, 8).unwrap();
        assert!(d < 1e-9, "{d}");
    }

    #[test]
    fn translation_kernel_shifts_q_argument() {
        // u = e^{iαp/ħ}: the sandwich sends f(p,q) to f(p, q−α)
        let alpha = 0.5;
        let spec = Spec::square(4.0, 96, 1.0).unwrap();
        let u = GridSymbol::sample(&spec, |p, _| Ok(C64::new(0.0, alpha * p).exp())).unwrap();
        let g = propagator_from_kernel(&u, 6).unwrap();
        if let PropagatorKernel::StarSandwich {
            inverse_residual, ..
        } = &g
        {
            assert!(*inverse_residual < 1e-9);
        }
        let f = GridSymbol::sample_poly(&spec, &PolySymbol::<ExactC>::monomial(1, 1));
        let out = apply_propagator(&g, &f).unwrap();
        let want = GridSymbol::sample(&spec, |p, q| Ok(C64::new(p * (q - alpha), 0.0))).unwrap();
        let d = out.interior_max_diff(&want, 14).unwrap();
        assert!(d < 1e-6, "{d}");
    }

    #[test]
    fn lp_sandwich_preserves_p_marginal() {
        let spec = Spec::square(5.0, 96, 1.0).unwrap();
        let u = u_linear_potential(0.1, &spec);
        let g = propagator_from_kernel(&u, 8).unwrap();
        let f = GridSymbol::sample(&spec, |p, q| {
            Ok(C64::new(2.0 * (-(p * p + q * q)).exp(), 0.0))
        })
        .unwrap();
        let out = apply_propagator(&g, &f).unwrap();
        let m0 = f.q_marginal();
        let m1 = out.q_marginal();
        let mut max_d = 0.0f64;
        for i in 10..spec.np - 10 {
            max_d = max_d.max((m0[i] - m1[i]).norm());
        }
        // limited by order-8 stencil round-off in the two star products
        assert!(max_d < 2e-5, "{max_d}");
    }

    #[test]
    fn dense_route_matches_sandwich() {
        let spec = Spec::square(3.0, 24, 1.0).unwrap();
        let alpha = 0.4;
        let u = GridSymbol::sample(&spec, |p, _| Ok(C64::new(0.0, alpha * p).exp())).unwrap();
        let (u_inv, _) = star_inverse(&u, 4).unwrap();
        let dense = dense_from_star(&u, &u_inv, 4).unwrap();
        let sandwich = PropagatorKernel::StarSandwich {
            u: u.clone(),
            u_inv,
            order: 4,
            inverse_residual: 0.0,
        };
        let f = GridSymbol::sample(&spec, |p, q| {
            Ok(C64::new((-(p * p + q * q) / 2.0).exp(), 0.0))
        })
        .unwrap();
        let a = apply_propagator(&sandwich, &f).unwrap();
        let b = apply_propagator(&dense, &f).unwrap();
        let d = a.interior_max_diff(&b, 8).unwrap();
        assert!(d < 1e-8, "{d}");
    }
}
