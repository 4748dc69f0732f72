//! Complex samples on a phase-space grid.

use super::spec::GridSpec;
use crate::error::Error;
use crate::scalar::{Coeff, Real};
use crate::symbolic::PolySymbol;
use num_complex::Complex;
use std::io::{BufRead, Write};

/// Np×Nq complex samples, row-major in p then q (index = ip·nq + iq).
#[derive(Clone, Debug, PartialEq)]
pub struct GridSymbol<R: Real> {
    pub spec: GridSpec<R>,
    pub values: Vec<Complex<R>>,
}

impl<R: Real> GridSymbol<R> {
    pub fn zeros(spec: &GridSpec<R>) -> Self {
        Self {
            spec: spec.clone(),
            values: vec![Complex::new(R::zero(), R::zero()); spec.len()],
        }
    }

    pub fn constant(spec: &GridSpec<R>, value: Complex<R>) -> Self {
        Self {
            spec: spec.clone(),
            values: vec![value; spec.len()],
        }
    }

    /// Pointwise evaluation of a closure; singular nodes abort with an error
    /// naming the offending point.
    pub fn sample<F>(spec: &GridSpec<R>, f: F) -> Result<Self, Error>
    where
        F: Fn(R, R) -> Result<Complex<R>, Error>,
    {
        let mut values = Vec::with_capacity(spec.len());
        for i in 0..spec.np {
            let p = spec.p(i);
            for j in 0..spec.nq {
                values.push(f(p, spec.q(j))?);
            }
        }
        Ok(Self {
            spec: spec.clone(),
            values,
        })
    }

    /// Sample an exact polynomial symbol with ħ = spec.hbar.
    pub fn sample_poly<C: Coeff>(spec: &GridSpec<R>, sym: &PolySymbol<C>) -> Self {
        let hbar = spec.hbar.to_f();
        let mut values = Vec::with_capacity(spec.len());
        for i in 0..spec.np {
            let p = spec.p(i).to_f();
            for j in 0..spec.nq {
                let z = sym.eval(p, spec.q(j).to_f(), hbar);
                values.push(Complex::new(R::from_f(z.re), R::from_f(z.im)));
            }
        }
        Self {
            spec: spec.clone(),
            values,
        }
    }

    #[inline]
    pub fn at(&self, ip: usize, iq: usize) -> Complex<R> {
        self.values[ip * self.spec.nq + iq]
    }

    #[inline]
    pub fn at_mut(&mut self, ip: usize, iq: usize) -> &mut Complex<R> {
        &mut self.values[ip * self.spec.nq + iq]
    }

    pub fn map<F>(&self, f: F) -> Self
    where
        F: Fn(Complex<R>) -> Complex<R>,
    {
        Self {
            spec: self.spec.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip<F>(&self, other: &Self, f: F) -> Result<Self, Error>
    where
        F: Fn(Complex<R>, Complex<R>) -> Complex<R>,
    {
        if !self.spec.same_geometry(&other.spec) {
            return Err(Error::GridMismatch("zip on different grids".into()));
        }
        Ok(Self {
            spec: self.spec.clone(),
            values: self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul_pointwise(&self, other: &Self) -> Result<Self, Error> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex<R>) -> Self {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.norm().to_f())
            .fold(0.0, f64::max)
    }

    /// Max |Im| over all nodes; the reality predicate compares this to a
    /// tolerance.
    pub fn max_imag(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.im.abs().to_f())
            .fold(0.0, f64::max)
    }

    pub fn is_real_within(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    /// Max |self − other| over the interior (a `band`-wide frame excluded).
    pub fn interior_max_diff(&self, other: &Self, band: usize) -> Result<f64, Error> {
        if !self.spec.same_geometry(&other.spec) {
            return Err(Error::GridMismatch("interior comparison".into()));
        }
        Ok(self.sub(other)?.interior_max_abs(band))
    }

    pub fn interior_max_abs(&self, band: usize) -> f64 {
        let mut m = 0.0f64;
        for ip in band..self.spec.np.saturating_sub(band) {
            for iq in band..self.spec.nq.saturating_sub(band) {
                m = m.max(self.at(ip, iq).norm().to_f());
            }
        }
        m
    }

    /// Drop a frame of `band` nodes from every edge (used to shed the
    /// contaminated border after stencil-based operations).
    pub fn crop(&self, band: usize) -> Result<Self, Error> {
        if self.spec.np <= 2 * band + 8 || self.spec.nq <= 2 * band + 8 {
            return Err(Error::InvalidGrid(
                "crop would leave fewer than 8 points per axis".into(),
            ));
        }
        let spec = GridSpec {
            p_min: self.spec.p(band),
            p_max: self.spec.p(self.spec.np - 1 - band),
            q_min: self.spec.q(band),
            q_max: self.spec.q(self.spec.nq - 1 - band),
            np: self.spec.np - 2 * band,
            nq: self.spec.nq - 2 * band,
            hbar: self.spec.hbar,
        };
        let mut values = Vec::with_capacity(spec.len());
        for ip in band..self.spec.np - band {
            for iq in band..self.spec.nq - band {
                values.push(self.at(ip, iq));
            }
        }
        Ok(Self { spec, values })
    }

    /// Trapezoid ∫∫ f dp dq / (2πħ).
    pub fn integral_dmu(&self) -> Complex<R> {
        let mut acc = Complex::new(R::zero(), R::zero());
        for ip in 0..self.spec.np {
            let wp = trapezoid_weight(ip, self.spec.np);
            for iq in 0..self.spec.nq {
                let w = wp * trapezoid_weight(iq, self.spec.nq);
                acc = acc + self.at(ip, iq) * R::from_f(w);
            }
        }
        let two_pi_h = R::from_f(2.0 * std::f64::consts::PI) * self.spec.hbar;
        acc * self.spec.dp() * self.spec.dq() / two_pi_h
    }

    /// Marginal along q: g(p_i) = ∫ f(p_i, q) dq (trapezoid).
    pub fn q_marginal(&self) -> Vec<Complex<R>> {
        (0..self.spec.np)
            .map(|ip| {
                let mut acc = Complex::new(R::zero(), R::zero());
                for iq in 0..self.spec.nq {
                    acc = acc + self.at(ip, iq) * R::from_f(trapezoid_weight(iq, self.spec.nq));
                }
                acc * self.spec.dq()
            })
            .collect()
    }

    /// CSV export: header `p,q,re,im`, one row per node, p-major order.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "p,q,re,im")?;
        for ip in 0..self.spec.np {
            for iq in 0..self.spec.nq {
                let v = self.at(ip, iq);
                writeln!(
                    w,
                    "{},{},{},{}",
                    self.spec.p(ip),
                    self.spec.q(iq),
                    v.re,
                    v.im
                )?;
            }
        }
        Ok(())
    }

    pub fn read_csv<Rd: BufRead>(reader: Rd, spec: &GridSpec<R>) -> Result<Self, Error> {
        let mut values = Vec::with_capacity(spec.len());
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::InvalidParameter(e.to_string()))?;
            if lineno == 0 {
                continue; // header
            }
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 4 {
                return Err(Error::InvalidParameter(format!(
                    "csv line {} malformed",
                    lineno + 1
                )));
            }
            let re: f64 = parts[2]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad re at line {}", lineno + 1)))?;
            let im: f64 = parts[3]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad im at line {}", lineno + 1)))?;
            values.push(Complex::new(R::from_f(re), R::from_f(im)));
        }
        if values.len() != spec.len() {
            return Err(Error::GridMismatch(format!(
                "csv has {} values, grid needs {}",
                values.len(),
                spec.len()
            )));
        }
        Ok(Self {
            spec: spec.clone(),
            values,
        })
    }
}

pub(crate) fn trapezoid_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i + 1 == n {
        0.5
    } else {
        1.0
    }
}
