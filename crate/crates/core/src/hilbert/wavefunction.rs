//! Wavefunctions on uniform position and momentum grids.

use crate::error::Error;
use crate::scalar::Real;
use num_complex::Complex;
use std::io::{BufRead, Write};

/// Complex samples on a uniform 1-D grid with an attached ħ.
#[derive(Clone, Debug, PartialEq)]
pub struct Samples1D<R: Real> {
    pub min: R,
    pub max: R,
    pub n: usize,
    pub hbar: R,
    pub values: Vec<Complex<R>>,
}

impl<R: Real> Samples1D<R> {
    pub fn dx(&self) -> R {
        (self.max - self.min) / R::from_usize(self.n - 1).unwrap()
    }

    pub fn x(&self, i: usize) -> R {
        self.min + self.dx() * R::from_usize(i).unwrap()
    }

    pub fn from_fn<F>(min: R, max: R, n: usize, hbar: R, f: F) -> Self
    where
        F: Fn(R) -> Complex<R>,
    {
        let mut s = Self {
            min,
            max,
            n,
            hbar,
            values: Vec::with_capacity(n),
        };
        for i in 0..n {
            let x = min + (max - min) * R::from_usize(i).unwrap() / R::from_usize(n - 1).unwrap();
            s.values.push(f(x));
        }
        s
    }

    /// Trapezoid L² norm.
    pub fn norm_l2(&self) -> R {
        let mut acc = R::zero();
        for (i, v) in self.values.iter().enumerate() {
            let w = if i == 0 || i + 1 == self.n { 0.5 } else { 1.0 };
            acc = acc + v.norm_sqr() * R::from_f(w);
        }
        (acc * self.dx()).sqrt()
    }

    /// Largest |ψ| within `band` points of either edge, relative to max |ψ|.
    pub fn tail_magnitude(&self, band: usize) -> f64 {
        let peak = self
            .values
            .iter()
            .map(|v| v.norm().to_f())
            .fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let mut tail = 0.0f64;
        for i in 0..self.n {
            if i < band || i + band >= self.n {
                tail = tail.max(self.values[i].norm().to_f());
            }
        }
        tail / peak
    }

    /// 8-point Lagrange interpolation at an arbitrary point inside the grid.
    pub fn interp(&self, x: R) -> Result<Complex<R>, Error> {
        interp_uniform(&self.values, self.min, self.dx(), x, 8)
    }

    /// Cubic (4-point) interpolation, used for delta-kernel application.
    pub fn interp_cubic(&self, x: R) -> Result<Complex<R>, Error> {
        interp_uniform(&self.values, self.min, self.dx(), x, 4)
    }

    pub fn l2_distance(&self, other: &Self) -> R {
        let mut acc = R::zero();
        for (i, (a, b)) in self.values.iter().zip(other.values.iter()).enumerate() {
            let w = if i == 0 || i + 1 == self.n { 0.5 } else { 1.0 };
            acc = acc + (*a - *b).norm_sqr() * R::from_f(w);
        }
        (acc * self.dx()).sqrt()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,re,im")?;
        for i in 0..self.n {
            let v = self.values[i];
            writeln!(w, "{},{},{}", self.x(i), v.re, v.im)?;
        }
        Ok(())
    }

    pub fn read_csv<Rd: BufRead>(reader: Rd, hbar: R) -> Result<Self, Error> {
        let mut xs: Vec<f64> = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::InvalidParameter(e.to_string()))?;
            if lineno == 0 || line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::InvalidParameter(format!(
                    "csv line {} malformed",
                    lineno + 1
                )));
            }
            let x: f64 = parts[0].trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("bad x at line {}", lineno + 1))
            })?;
            let re: f64 = parts[1].trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("bad re at line {}", lineno + 1))
            })?;
            let im: f64 = parts[2].trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("bad im at line {}", lineno + 1))
            })?;
            xs.push(x);
            values.push(Complex::new(R::from_f(re), R::from_f(im)));
        }
        if xs.len() < 8 {
            return Err(Error::InvalidGrid("need at least 8 samples".into()));
        }
        Ok(Self {
            min: R::from_f(xs[0]),
            max: R::from_f(*xs.last().unwrap()),
            n: xs.len(),
            hbar,
            values,
        })
    }
}

/// Lagrange interpolation on a uniform grid with an `order`-point window.
pub fn interp_uniform<R: Real>(
    values: &[Complex<R>],
    min: R,
    dx: R,
    x: R,
    order: usize,
) -> Result<Complex<R>, Error> {
    let n = values.len();
    let t = ((x - min) / dx).to_f();
    if t < -1e-9 || t > (n - 1) as f64 + 1e-9 {
        return Err(Error::OutOfRange {
            x: x.to_f(),
            lo: min.to_f(),
            hi: (min + dx * R::from_usize(n - 1).unwrap()).to_f(),
        });
    }
    let i0 = (t.floor() as isize - (order as isize / 2 - 1))
        .clamp(0, (n - order) as isize) as usize;
    // Lagrange basis over the window
    let mut acc = Complex::new(R::zero(), R::zero());
    for k in 0..order {
        let xk = (i0 + k) as f64;
        let mut w = 1.0f64;
        for j in 0..order {
            if j != k {
                let xj = (i0 + j) as f64;
                w *= (t - xj) / (xk - xj);
            }
        }
        acc = acc + values[i0 + k] * R::from_f(w);
    }
    Ok(acc)
}

/// Position-space wavefunction ψ(x).
#[derive(Clone, Debug, PartialEq)]
pub struct Wavefunction<R: Real>(pub Samples1D<R>);

/// Momentum-space wavefunction ψ̃(p), with the convention
/// ψ̃(p) = ∫ dx e^{−ipx/ħ} ψ(x) and ψ(x) = ∫ dp/(2πħ) e^{+ipx/ħ} ψ̃(p).
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumWavefunction<R: Real>(pub Samples1D<R>);

impl<R: Real> Wavefunction<R> {
    /// Normalized Gaussian π^{−1/4} e^{−(x−x₀)²/2} e^{i p₀ x/ħ}.
    pub fn gaussian(min: R, max: R, n: usize, hbar: R, x0: R, p0: R) -> Self {
        let norm = R::from_f(std::f64::consts::PI.powf(-0.25));
        Wavefunction(Samples1D::from_fn(min, max, n, hbar, |x| {
            let d = x - x0;
            let mag = norm * (-d * d / R::from_f(2.0)).exp();
            let phase = p0 * x / hbar;
            Complex::new(mag * phase.cos(), mag * phase.sin())
        }))
    }

    /// ψ̃ on the given momentum grid by direct trapezoid quadrature.
    pub fn to_momentum(&self, p_min: R, p_max: R, np: usize) -> MomentumWavefunction<R> {
        let s = &self.0;
        let dx = s.dx();
        let out = Samples1D::from_fn(p_min, p_max, np, s.hbar, |p| {
            let mut acc = Complex::new(R::zero(), R::zero());
            for i in 0..s.n {
                let w = if i == 0 || i + 1 == s.n { 0.5 } else { 1.0 };
                let phase = -p * s.x(i) / s.hbar;
                let e = Complex::new(phase.cos(), phase.sin());
                acc = acc + s.values[i] * e * R::from_f(w);
            }
            acc * dx
        });
        MomentumWavefunction(out)
    }
}

impl<R: Real> MomentumWavefunction<R> {
    /// ψ(x) on the given position grid by the inverse transform.
    pub fn to_position(&self, x_min: R, x_max: R, nx: usize) -> Wavefunction<R> {
        let s = &self.0;
        let dp = s.dx();
        let two_pi_h = R::from_f(2.0 * std::f64::consts::PI) * s.hbar;
        let out = Samples1D::from_fn(x_min, x_max, nx, s.hbar, |x| {
            let mut acc = Complex::new(R::zero(), R::zero());
            for i in 0..s.n {
                let w = if i == 0 || i + 1 == s.n { 0.5 } else { 1.0 };
                let phase = s.x(i) * x / s.hbar;
                let e = Complex::new(phase.cos(), phase.sin());
                acc = acc + s.values[i] * e * R::from_f(w);
            }
            acc * dp / two_pi_h
        });
        Wavefunction(out)
    }
}
