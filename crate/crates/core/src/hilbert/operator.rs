//! Operator matrices over the position grid and the symbol/operator
//! transform pair.

use crate::error::Error;
use crate::grid::{GridSpec, GridSymbol};
use crate::hilbert::wavefunction::{interp_uniform, Wavefunction};
use crate::scalar::Real;
use num_complex::Complex;
use std::io::Write;

/// Dense N×N kernel table over a uniform position grid: entry (i, j) holds
/// the kernel density ⟨x_i|M̂|x_j⟩, so application to a wavefunction carries
/// a Δx measure factor.
///
/// Diagonal (delta-type) operators are discretized with mass 1/(2Δx) on the
/// diagonal: the symbol transform below integrates over offsets of step 2Δx,
/// and that is the delta normalization this lattice resolves.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<R: Real> {
    pub x_min: R,
    pub x_max: R,
    pub n: usize,
    pub hbar: R,
    pub values: Vec<Complex<R>>,
}

impl<R: Real> OperatorMatrix<R> {
    pub fn dx(&self) -> R {
        (self.x_max - self.x_min) / R::from_usize(self.n - 1).unwrap()
    }

    pub fn x(&self, i: usize) -> R {
        self.x_min + self.dx() * R::from_usize(i).unwrap()
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex<R> {
        self.values[i * self.n + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex<R> {
        &mut self.values[i * self.n + j]
    }

    pub fn zeros(x_min: R, x_max: R, n: usize, hbar: R) -> Self {
        Self {
            x_min,
            x_max,
            n,
            hbar,
            values: vec![Complex::new(R::zero(), R::zero()); n * n],
        }
    }

    /// Identity in the delta scaling of this transform pair.
    pub fn identity_delta(x_min: R, x_max: R, n: usize, hbar: R) -> Self {
        Self::delta_diag(x_min, x_max, n, hbar, |_| Complex::new(R::one(), R::zero()))
    }

    /// Diagonal operator g(x̂) in the delta scaling: entries g(x_i)/(2Δx).
    pub fn delta_diag<F>(x_min: R, x_max: R, n: usize, hbar: R, g: F) -> Self
    where
        F: Fn(R) -> Complex<R>,
    {
        let mut m = Self::zeros(x_min, x_max, n, hbar);
        let w = (R::from_f(2.0) * m.dx()).recip();
        for i in 0..n {
            let x = m.x(i);
            *m.at_mut(i, i) = g(x) * w;
        }
        m
    }

    /// Rank-one projector |ψ⟩⟨ψ| as a smooth kernel ψ(x_i)ψ*(x_j).
    pub fn rank_one(psi: &Wavefunction<R>) -> Self {
        let s = &psi.0;
        let mut m = Self::zeros(s.min, s.max, s.n, s.hbar);
        for i in 0..s.n {
            for j in 0..s.n {
                *m.at_mut(i, j) = s.values[i] * s.values[j].conj();
            }
        }
        m
    }

    /// Apply to a wavefunction on the same grid: (Mψ)_i = Δx Σ_j M_ij ψ_j.
    pub fn apply(&self, psi: &Wavefunction<R>) -> Result<Wavefunction<R>, Error> {
        let s = &psi.0;
        if s.n != self.n || (s.min - self.x_min).abs().to_f() > 1e-12 {
            return Err(Error::GridMismatch("operator grid vs wavefunction grid".into()));
        }
        let dx = self.dx();
        let mut out = s.clone();
        for i in 0..self.n {
            let mut acc = Complex::new(R::zero(), R::zero());
            for j in 0..self.n {
                acc = acc + self.at(i, j) * s.values[j];
            }
            out.values[i] = acc * dx;
        }
        Ok(Wavefunction(out))
    }

    /// Kernel composition (AB)(x,y) = ∫ dz A(x,z)B(z,y).
    pub fn compose(&self, other: &Self) -> Result<Self, Error> {
        if self.n != other.n {
            return Err(Error::GridMismatch("operator composition".into()));
        }
        let dx = self.dx();
        let mut out = Self::zeros(self.x_min, self.x_max, self.n, self.hbar);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = Complex::new(R::zero(), R::zero());
                for k in 0..self.n {
                    acc = acc + self.at(i, k) * other.at(k, j);
                }
                *out.at_mut(i, j) = acc * dx;
            }
        }
        Ok(out)
    }

    pub fn map_values<F>(&self, f: F) -> Self
    where
        F: Fn(Complex<R>) -> Complex<R>,
    {
        Self {
            x_min: self.x_min,
            x_max: self.x_max,
            n: self.n,
            hbar: self.hbar,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.x_min, self.x_max, self.n, self.hbar);
        for i in 0..self.n {
            for j in 0..self.n {
                *out.at_mut(i, j) = self.at(j, i).conj();
            }
        }
        out
    }

    /// Tr M̂ = Δx Σ M_ii.
    pub fn trace(&self) -> Complex<R> {
        let mut acc = Complex::new(R::zero(), R::zero());
        for i in 0..self.n {
            acc = acc + self.at(i, i);
        }
        acc * self.dx()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                m = m.max((self.at(i, j) - self.at(j, i).conj()).norm().to_f());
            }
        }
        m
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// Max-norm of M†M − 1 against the identity in the wavefunction scaling
    /// (delta mass 1/Δx), measured entrywise scaled by Δx.
    pub fn unitarity_residual_matrix(&self) -> f64 {
        let prod = self.adjoint().compose(self).expect("same grid");
        let dx = self.dx().to_f();
        let mut m = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                let want = if i == j { 1.0 / dx } else { 0.0 };
                m = m.max(((prod.at(i, j).to_f_complex()) - Complex::new(want, 0.0)).norm() * dx);
            }
        }
        m
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual_matrix() <= tol
    }

    /// CSV export `i,j,re,im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "i,j,re,im")?;
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.at(i, j);
                writeln!(w, "{},{},{},{}", i, j, v.re, v.im)?;
            }
        }
        Ok(())
    }
}

trait ToF64Complex {
    fn to_f_complex(&self) -> Complex<f64>;
}
impl<R: Real> ToF64Complex for Complex<R> {
    fn to_f_complex(&self) -> Complex<f64> {
        Complex::new(self.re.to_f(), self.im.to_f())
    }
}

/// The symbol grid on which the transform pair below is exactly invertible:
/// q runs over the matrix position grid and p over one Brillouin zone of the
/// even-offset lattice, Δp = πħ/(NΔx).
pub fn canonical_symbol_spec<R: Real>(m: &OperatorMatrix<R>) -> GridSpec<R> {
    let n = m.n;
    let dx = m.dx();
    let p_half = R::from_f(std::f64::consts::PI) * m.hbar / (R::from_f(2.0) * dx);
    let dp = R::from_f(std::f64::consts::PI) * m.hbar / (R::from_usize(n).unwrap() * dx);
    GridSpec {
        p_min: -p_half,
        p_max: -p_half + dp * R::from_usize(n - 1).unwrap(),
        q_min: m.x_min,
        q_max: m.x_max,
        np: n,
        nq: n,
        hbar: m.hbar,
    }
}

/// Discrete Weyl transform of an operator matrix:
/// f(p, q_k) = 2Δx Σ_m e^{−ip·(2mΔx)/ħ} M(q_k + mΔx, q_k − mΔx).
///
/// The offset sum runs over even multiples of Δx so both arguments stay on
/// the matrix grid; the q axis of `spec` must coincide with that grid.
pub fn symbol_of_operator<R: Real>(
    m: &OperatorMatrix<R>,
    spec: &GridSpec<R>,
) -> Result<GridSymbol<R>, Error> {
    check_q_axis(m, spec)?;
    let dx = m.dx();
    let hbar = spec.hbar;
    let two_dx = R::from_f(2.0) * dx;
    let mut out = GridSymbol::zeros(spec);
    for k in 0..m.n {
        let reach = k.min(m.n - 1 - k) as isize;
        for i in 0..spec.np {
            let p = spec.p(i);
            let mut acc = Complex::new(R::zero(), R::zero());
            for off in -reach..=reach {
                let a = (k as isize + off) as usize;
                let b = (k as isize - off) as usize;
                let phase = -p * two_dx * R::from_f(off as f64) / hbar;
                acc = acc + m.at(a, b) * Complex::new(phase.cos(), phase.sin());
            }
            *out.at_mut(i, k) = acc * two_dx;
        }
    }
    Ok(out)
}

/// Inverse transform: M(x_i, x_j) = (Δp/2πħ) Σ_l e^{+ip_l(x_i−x_j)/ħ}
/// f(p_l, (x_i+x_j)/2). Exact inverse of `symbol_of_operator` on the
/// canonical grid; odd-midpoint values of f are interpolated along q.
pub fn operator_of_symbol<R: Real>(f: &GridSymbol<R>) -> Result<OperatorMatrix<R>, Error> {
    let spec = &f.spec;
    let n = spec.nq;
    let dx = spec.dq();
    let hbar = spec.hbar;
    let mut m = OperatorMatrix::zeros(spec.q_min, spec.q_max, n, hbar);
    let dp = spec.dp();
    let two_pi_h = R::from_f(2.0 * std::f64::consts::PI) * hbar;
    let weight = dp / two_pi_h;

    // column cache of f values per p index: f is stored p-major already
    for i in 0..n {
        for j in 0..n {
            let mid = (spec.q(i) + spec.q(j)) / R::from_f(2.0);
            let sep = spec.q(i) - spec.q(j);
            let mut acc = Complex::new(R::zero(), R::zero());
            for l in 0..spec.np {
                let row = &f.values[l * spec.nq..(l + 1) * spec.nq];
                let fv = if (i + j) % 2 == 0 {
                    row[(i + j) / 2]
                } else {
                    interp_uniform(row, spec.q_min, dx, mid, 8)?
                };
                let phase = spec.p(l) * sep / hbar;
                acc = acc + fv * Complex::new(phase.cos(), phase.sin());
            }
            *m.at_mut(i, j) = acc * weight;
        }
    }
    Ok(m)
}

fn check_q_axis<R: Real>(m: &OperatorMatrix<R>, spec: &GridSpec<R>) -> Result<(), Error> {
    let ok = spec.nq == m.n
        && (spec.q_min - m.x_min).abs().to_f() < 1e-10
        && (spec.q_max - m.x_max).abs().to_f() < 1e-10
        && (spec.hbar - m.hbar).abs().to_f() < 1e-14;
    if ok {
        Ok(())
    } else {
        Err(Error::GridMismatch(
            "symbol grid q-axis must coincide with the matrix position grid".into(),
        ))
    }
}

/// Momentum operator matrix built from the canonical p grid:
/// P(x_i, x_j) = (Δp/2πħ) Σ_l p_l e^{ip_l(x_i−x_j)/ħ}.
///
/// This is the spectral-difference momentum operator in the same delta
/// scaling as `identity_delta` (the constant symbol reproduces exactly the
/// 1/(2Δx) diagonal), so it can serve as an oracle for symbols of mixed
/// monomials through `operator_of_symbol`.
pub fn momentum_operator<R: Real>(
    x_min: R,
    x_max: R,
    n: usize,
    hbar: R,
) -> OperatorMatrix<R> {
    let mut m = OperatorMatrix::zeros(x_min, x_max, n, hbar);
    let spec = canonical_symbol_spec(&m);
    let dp = spec.dp();
    let two_pi_h = R::from_f(2.0 * std::f64::consts::PI) * hbar;
    let weight = dp / two_pi_h;
    for i in 0..n {
        for j in 0..n {
            let sep = m.x(i) - m.x(j);
            let mut acc = Complex::new(R::zero(), R::zero());
            for l in 0..spec.np {
                let p = spec.p(l);
                let phase = p * sep / hbar;
                acc = acc + Complex::new(phase.cos(), phase.sin()) * p;
            }
            *m.at_mut(i, j) = acc * weight;
        }
    }
    m
}
