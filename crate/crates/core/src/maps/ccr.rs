//! Canonical-bracket report for a whole map family: exact brackets for the
//! polynomial families, lattice finite differences otherwise.

use super::spec::MapSpec;
use crate::error::Error;
use crate::symbolic::{
    ccr_exact, ccr_numeric, regular_lattice, ExactCcrReport, NumericCcrReport,
};

#[derive(Clone, Debug)]
pub enum CcrReport {
    /// Coefficient-level brackets: Poisson exactly −1, Moyal exactly −iħ,
    /// every higher odd ħ order identically zero.
    Exact(ExactCcrReport),
    /// Pointwise Poisson values on a lattice of regular points.
    Numeric(NumericCcrReport),
}

impl CcrReport {
    /// Worst deviation from the canonical value (0 for a clean exact pass).
    pub fn max_deviation(&self) -> f64 {
        match self {
            CcrReport::Exact(r) => {
                let mut d = r.poisson_deviation + r.moyal_deviation;
                for (_, n) in &r.higher_order_norms {
                    d += n;
                }
                d
            }
            CcrReport::Numeric(r) => r.max_deviation,
        }
    }

    pub fn is_canonical(&self, numeric_tol: f64) -> bool {
        match self {
            CcrReport::Exact(r) => {
                r.poisson_ok && r.moyal_ok && r.higher_order_norms.iter().all(|(_, n)| *n == 0.0)
            }
            CcrReport::Numeric(r) => r.max_deviation <= numeric_tol,
        }
    }
}

/// Bracket check for a map family. Polynomial families are checked exactly;
/// the rest by fourth-order finite differences on `lattice` (a regular
/// 10×10 set over [−1,1]² when none is given). Singular lattice points
/// propagate as errors.
pub fn ccr_report(
    map: &MapSpec,
    lattice: Option<&[(f64, f64)]>,
    fd_step: f64,
) -> Result<CcrReport, Error> {
    if let Some((p_new, q_new)) = map.poly_coords() {
        return Ok(CcrReport::Exact(ccr_exact(&p_new, &q_new)));
    }
    let default_lattice;
    let pts = match lattice {
        Some(l) => l,
        None => {
            default_lattice = regular_lattice((-1.0, 1.0), (-1.0, 1.0), 10);
            &default_lattice
        }
    };
    let p_eval = |p: f64, q: f64| map.eval(p, q).map(|(pp, _)| pp);
    let q_eval = |p: f64, q: f64| map.eval(p, q).map(|(_, qq)| qq);
    Ok(CcrReport::Numeric(ccr_numeric(
        &p_eval, &q_eval, pts, fd_step,
    )?))
}
