//! Residuals of the kernel equations
//!   u ⋆ Q = (q + iħ/2 ∂p) u,   u ⋆ P = (p − iħ/2 ∂q) u,
//! and star composition of kernels.

use super::spec::MapSpec;
use crate::error::Error;
use crate::grid::{fd::derivative_1d, grid_star, GridSpec, GridSymbol, StarResult};
use num_complex::Complex;

type C64 = Complex<f64>;

/// Interior max-norms (r_Q, r_P) of the two kernel equations. The star
/// truncation covers the polynomial families exactly and uses order 8
/// otherwise.
///
/// `input_band`: width of the boundary frame of `u` that is already
/// contaminated (nonzero when u came out of a star composition); it is added
/// to the mask of this comparison.
pub fn kernel_residual(
    u: &GridSymbol<f64>,
    map: &MapSpec,
    input_band: usize,
) -> Result<(f64, f64), Error> {
    let spec = &u.spec;
    let order = map.poly_degree().unwrap_or(8).max(2);
    let hb = spec.hbar;
    let q_new = GridSymbol::sample(spec, |p, q| map.symbol_coords(p, q, hb).map(|(_, qq)| qq))?;
    let p_new = GridSymbol::sample(spec, |p, q| map.symbol_coords(p, q, hb).map(|(pp, _)| pp))?;

    let half_h = spec.hbar / 2.0;
    let du_dp = d_along_p(u);
    let du_dq = d_along_q(u);

    // rhs_Q = (q + iħ/2 ∂p) u
    let mut rhs_q = GridSymbol::zeros(spec);
    let mut rhs_p = GridSymbol::zeros(spec);
    for i in 0..spec.np {
        let p = spec.p(i);
        for j in 0..spec.nq {
            let q = spec.q(j);
            *rhs_q.at_mut(i, j) =
                u.at(i, j) * q + C64::new(0.0, half_h) * du_dp.at(i, j);
            *rhs_p.at_mut(i, j) =
                u.at(i, j) * p - C64::new(0.0, half_h) * du_dq.at(i, j);
        }
    }

    let lhs_q = grid_star(u, &q_new, order, 8)?;
    let lhs_p = grid_star(u, &p_new, order, 8)?;
    let band = lhs_q.interior_band.max(lhs_p.interior_band) + input_band;
    let r_q = lhs_q.value.interior_max_diff(&rhs_q, band)?;
    let r_p = lhs_p.value.interior_max_diff(&rhs_p, band)?;
    Ok((r_q, r_p))
}

fn d_along_p(u: &GridSymbol<f64>) -> GridSymbol<f64> {
    let spec = &u.spec;
    let mut out = GridSymbol::zeros(spec);
    let mut col = vec![C64::new(0.0, 0.0); spec.np];
    for j in 0..spec.nq {
        for i in 0..spec.np {
            col[i] = u.at(i, j);
        }
        let d = derivative_1d(&col, spec.dp(), 1, 8);
        for i in 0..spec.np {
            *out.at_mut(i, j) = d[i];
        }
    }
    out
}

fn d_along_q(u: &GridSymbol<f64>) -> GridSymbol<f64> {
    let spec = &u.spec;
    let mut out = GridSymbol::zeros(spec);
    for i in 0..spec.np {
        let row = &u.values[i * spec.nq..(i + 1) * spec.nq];
        let d = derivative_1d(row, spec.dq(), 1, 8);
        out.values[i * spec.nq..(i + 1) * spec.nq].copy_from_slice(&d);
    }
    out
}

/// Star composition u₁ ⋆ u₂ of two kernels on the same grid, with the
/// truncation report. The composite applies u₂'s map first.
pub fn compose_u(
    u1: &GridSymbol<f64>,
    u2: &GridSymbol<f64>,
    order: u32,
) -> Result<StarResult<f64>, Error> {
    grid_star(u1, u2, order, 8)
}

/// A grid sized so that the interior of the kernel-residual comparison is
/// meaningful at the default truncation.
pub fn default_residual_spec(half_width: f64, n: usize, hbar: f64) -> GridSpec<f64> {
    GridSpec::square(half_width, n, hbar).expect("valid grid")
}
