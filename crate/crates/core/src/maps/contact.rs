//! Implicit solver for point-map (contact) kernels.
//!
//! For a monotone profile Q the kernel data are two functions A(q), B(q)
//! solving Q(A) = 2q − A and B = ln[Q'(A)/(1 + Q'(A))], found per lattice
//! node by bracketing bisection with a secant polish.

use super::func::NamedFunc;
use crate::error::Error;
use std::io::Write;

#[derive(Clone, Debug)]
pub struct ContactSolution {
    pub q: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub residual: Vec<f64>,
}

impl ContactSolution {
    pub fn max_residual(&self) -> f64 {
        self.residual.iter().cloned().fold(0.0, f64::max)
    }

    /// A is monotone wherever Q is; violated tables are solver bugs or
    /// non-monotone inputs.
    pub fn a_is_monotone(&self) -> bool {
        let mut dir = 0.0f64;
        for w in self.a.windows(2) {
            let d = w[1] - w[0];
            if d * dir < 0.0 {
                return false;
            }
            if d != 0.0 {
                dir = d.signum();
            }
        }
        true
    }

    pub fn interp_a(&self, q: f64) -> Result<f64, Error> {
        interp_table(&self.q, &self.a, q)
    }

    pub fn interp_b(&self, q: f64) -> Result<f64, Error> {
        interp_table(&self.q, &self.b, q)
    }

    /// CSV export `q,A,B,residual`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "q,A,B,residual")?;
        for i in 0..self.q.len() {
            writeln!(
                w,
                "{},{},{},{}",
                self.q[i], self.a[i], self.b[i], self.residual[i]
            )?;
        }
        Ok(())
    }
}

fn interp_table(xs: &[f64], ys: &[f64], x: f64) -> Result<f64, Error> {
    if x < xs[0] || x > *xs.last().unwrap() {
        return Err(Error::OutOfRange {
            x,
            lo: xs[0],
            hi: *xs.last().unwrap(),
        });
    }
    let i = xs
        .partition_point(|&v| v <= x)
        .clamp(1, xs.len() - 1);
    let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    Ok(ys[i - 1] * (1.0 - t) + ys[i] * t)
}

/// Solve the implicit kernel equations on a q-lattice.
///
/// Per node, the root of h(A) = Q(A) + A − 2q is found by expanding-bracket
/// bisection followed by secant polish until |h| < 1e−12; h is strictly
/// increasing whenever Q is, so the root is unique.
pub fn contact_solve(q_func: &NamedFunc, lattice: &[f64]) -> Result<ContactSolution, Error> {
    if lattice.is_empty() {
        return Err(Error::InvalidParameter("empty lattice".into()));
    }
    let mut out = ContactSolution {
        q: lattice.to_vec(),
        a: Vec::with_capacity(lattice.len()),
        b: Vec::with_capacity(lattice.len()),
        residual: Vec::with_capacity(lattice.len()),
    };
    let mut guess = lattice[0];
    for &q in lattice {
        let h = |x: f64| -> Result<f64, Error> { Ok(q_func.eval(x)? + x - 2.0 * q) };
        // expanding bracket around the previous solution
        let mut lo = guess - 1.0;
        let mut hi = guess + 1.0;
        let mut found = false;
        for _ in 0..100 {
            match (h(lo), h(hi)) {
                (Ok(a), Ok(b)) if a <= 0.0 && b >= 0.0 => {
                    found = true;
                    break;
                }
                (Ok(a), Ok(b)) if a > 0.0 && b > 0.0 => {
                    lo -= 2.0 * (hi - lo);
                }
                (Ok(a), Ok(b)) if a < 0.0 && b < 0.0 => {
                    hi += 2.0 * (hi - lo);
                }
                _ => {
                    // eval failure (domain): shrink toward the defined side
                    lo = 0.5 * (lo + hi) - 0.25 * (hi - lo);
                    hi = lo + 0.5 * (hi - lo);
                }
            }
            if hi - lo > 1e14 {
                break;
            }
        }
        if !found {
            return Err(Error::RootBracket {
                node: q,
                detail: "no sign change for the implicit kernel equation".into(),
            });
        }
        let mut a = lo;
        let mut b_hi = hi;
        for _ in 0..100 {
            let m = 0.5 * (a + b_hi);
            if h(m)? <= 0.0 {
                a = m;
            } else {
                b_hi = m;
            }
        }
        let mut root = 0.5 * (a + b_hi);
        // secant polish
        for _ in 0..8 {
            let f0 = h(root)?;
            if f0.abs() < 1e-13 {
                break;
            }
            let d = 1.0 + q_func.deriv(root)?;
            if d.abs() < 1e-13 {
                break;
            }
            root -= f0 / d;
        }
        let resid = h(root)?.abs();
        if resid > 1e-12 {
            return Err(Error::NoConvergence(format!(
                "implicit solve stalled at node {q} with residual {resid:.3e}"
            )));
        }
        let qp = q_func.deriv(root)?;
        out.a.push(root);
        out.b.push((qp / (1.0 + qp)).ln());
        out.residual.push(resid);
        guess = root;
    }
    if !out.a_is_monotone() {
        return Err(Error::NotMonotone(
            "solved A(q) is not monotone; profile is outside the invertible range".into(),
        ));
    }
    Ok(out)
}

/// The explicitly solvable rational point map, in the swapped coordinates
/// where the Riccati flow becomes a contact map Q(x) = x/(1+γx).
///
/// Returns per-sample residuals of the implicit equation for (a) the closed
/// form A(p) = [(p−1) + √(1/γ² + p²)]/γ quoted for this case, and (b) the
/// branch A(p) = (p − 1/γ) + √(1/γ² + p²) obtained by solving the quadratic
/// directly. The first is reported, not assumed.
pub fn rational_contact_residuals(gamma: f64, samples: &[f64]) -> (f64, f64) {
    let q_of = |x: f64| x / (1.0 + gamma * x);
    let resid = |a: f64, p: f64| (q_of(a) - (2.0 * p - a)).abs();
    let mut quoted: f64 = 0.0;
    let mut derived: f64 = 0.0;
    for &p in samples {
        let root = (1.0 / (gamma * gamma) + p * p).sqrt();
        let a_quoted = ((p - 1.0) + root) / gamma;
        let a_derived = (p - 1.0 / gamma) + root;
        quoted = quoted.max(resid(a_quoted, p));
        derived = derived.max(resid(a_derived, p));
    }
    (quoted, derived)
}
