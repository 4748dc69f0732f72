//! Named 1-D real functions used as map parameters (gauge fields, point-map
//! profiles, intertwiner potentials), with exact derivatives and
//! antiderivatives where the form allows it.

use crate::error::Error;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NamedFunc {
    Const { value: f64 },
    /// Σ coeffs[k] x^k
    Poly { coeffs: Vec<f64> },
    Exp,
    Log,
    /// sinh(αx)/α; α = 0 degenerates to the identity function x
    SinhScaled { alpha: f64 },
    /// x/(1 + γx), the explicitly solvable rational point map
    RationalShear { gamma: f64 },
    /// user-supplied monotone table with linear interpolation
    Tabulated { xs: Vec<f64>, ys: Vec<f64> },
}

impl NamedFunc {
    /// Resolve a CLI-style spec "const:2", "linear:0.5", "poly:1,0,3",
    /// "exp", "log", "sinh:0.4", "rational:0.7".
    pub fn parse(s: &str) -> Result<Self, Error> {
        let mut it = s.splitn(2, ':');
        let head = it.next().unwrap_or("");
        let args = it.next().unwrap_or("");
        let parse_f = |v: &str| -> Result<f64, Error> {
            v.trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad number `{v}`")))
        };
        match head {
            "const" => Ok(NamedFunc::Const {
                value: parse_f(args)?,
            }),
            "linear" => Ok(NamedFunc::Poly {
                coeffs: vec![0.0, parse_f(args)?],
            }),
            "poly" => {
                let coeffs = args
                    .split(',')
                    .map(parse_f)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(NamedFunc::Poly { coeffs })
            }
            "exp" => Ok(NamedFunc::Exp),
            "log" => Ok(NamedFunc::Log),
            "sinh" => Ok(NamedFunc::SinhScaled {
                alpha: parse_f(args)?,
            }),
            "rational" => Ok(NamedFunc::RationalShear {
                gamma: parse_f(args)?,
            }),
            "identity" | "x" => Ok(NamedFunc::Poly {
                coeffs: vec![0.0, 1.0],
            }),
            _ => Err(Error::InvalidParameter(format!("unknown function `{s}`"))),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64, Error> {
        match self {
            NamedFunc::Const { value } => Ok(*value),
            NamedFunc::Poly { coeffs } => {
                Ok(coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c))
            }
            NamedFunc::Exp => Ok(x.exp()),
            NamedFunc::Log => {
                if x <= 0.0 {
                    Err(Error::OutOfRange {
                        x,
                        lo: 0.0,
                        hi: f64::INFINITY,
                    })
                } else {
                    Ok(x.ln())
                }
            }
            NamedFunc::SinhScaled { alpha } => {
                if alpha.abs() < 1e-14 {
                    Ok(x)
                } else {
                    Ok((alpha * x).sinh() / alpha)
                }
            }
            NamedFunc::RationalShear { gamma } => {
                let d = 1.0 + gamma * x;
                if d.abs() < 1e-13 {
                    Err(Error::SingularPoint { p: x, q: 0.0 })
                } else {
                    Ok(x / d)
                }
            }
            NamedFunc::Tabulated { xs, ys } => {
                if xs.len() < 2 {
                    return Err(Error::InvalidParameter("table too short".into()));
                }
                if x < xs[0] || x > *xs.last().unwrap() {
                    return Err(Error::OutOfRange {
                        x,
                        lo: xs[0],
                        hi: *xs.last().unwrap(),
                    });
                }
                let i = match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
                    Ok(i) => return Ok(ys[i]),
                    Err(i) => i.clamp(1, xs.len() - 1),
                };
                let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
                Ok(ys[i - 1] * (1.0 - t) + ys[i] * t)
            }
        }
    }

    pub fn deriv(&self, x: f64) -> Result<f64, Error> {
        match self {
            NamedFunc::Const { .. } => Ok(0.0),
            NamedFunc::Poly { coeffs } => {
                let mut acc = 0.0;
                for (k, c) in coeffs.iter().enumerate().skip(1) {
                    acc += k as f64 * c * x.powi(k as i32 - 1);
                }
                Ok(acc)
            }
            NamedFunc::Exp => Ok(x.exp()),
            NamedFunc::Log => {
                if x <= 0.0 {
                    Err(Error::OutOfRange {
                        x,
                        lo: 0.0,
                        hi: f64::INFINITY,
                    })
                } else {
                    Ok(1.0 / x)
                }
            }
            NamedFunc::SinhScaled { alpha } => {
                if alpha.abs() < 1e-14 {
                    Ok(1.0)
                } else {
                    Ok((alpha * x).cosh())
                }
            }
            NamedFunc::RationalShear { gamma } => {
                let d = 1.0 + gamma * x;
                if d.abs() < 1e-13 {
                    Err(Error::SingularPoint { p: x, q: 0.0 })
                } else {
                    Ok(1.0 / (d * d))
                }
            }
            NamedFunc::Tabulated { xs, .. } => {
                // centered difference on the table spacing
                let h = (xs[1] - xs[0]).abs().max(1e-6);
                Ok((self.eval(x + h)? - self.eval(x - h)?) / (2.0 * h))
            }
        }
    }

    pub fn deriv2(&self, x: f64) -> Result<f64, Error> {
        match self {
            NamedFunc::Const { .. } => Ok(0.0),
            NamedFunc::Poly { coeffs } => {
                let mut acc = 0.0;
                for (k, c) in coeffs.iter().enumerate().skip(2) {
                    acc += (k * (k - 1)) as f64 * c * x.powi(k as i32 - 2);
                }
                Ok(acc)
            }
            NamedFunc::Exp => Ok(x.exp()),
            NamedFunc::Log => {
                if x <= 0.0 {
                    Err(Error::OutOfRange {
                        x,
                        lo: 0.0,
                        hi: f64::INFINITY,
                    })
                } else {
                    Ok(-1.0 / (x * x))
                }
            }
            NamedFunc::SinhScaled { alpha } => {
                if alpha.abs() < 1e-14 {
                    Ok(0.0)
                } else {
                    Ok(alpha * (alpha * x).sinh())
                }
            }
            NamedFunc::RationalShear { gamma } => {
                let d = 1.0 + gamma * x;
                if d.abs() < 1e-13 {
                    Err(Error::SingularPoint { p: x, q: 0.0 })
                } else {
                    Ok(-2.0 * gamma / (d * d * d))
                }
            }
            NamedFunc::Tabulated { xs, .. } => {
                let h = (xs[1] - xs[0]).abs().max(1e-5);
                Ok((self.eval(x + h)? - 2.0 * self.eval(x)? + self.eval(x - h)?) / (h * h))
            }
        }
    }

    /// ∫₀^x f(t) dt; exact for the closed forms.
    pub fn antideriv(&self, x: f64) -> Result<f64, Error> {
        match self {
            NamedFunc::Const { value } => Ok(value * x),
            NamedFunc::Poly { coeffs } => {
                let mut acc = 0.0;
                for (k, c) in coeffs.iter().enumerate() {
                    acc += c / (k as f64 + 1.0) * x.powi(k as i32 + 1);
                }
                Ok(acc)
            }
            NamedFunc::Exp => Ok(x.exp() - 1.0),
            NamedFunc::SinhScaled { alpha } => {
                if alpha.abs() < 1e-14 {
                    Ok(x * x / 2.0)
                } else {
                    Ok(((alpha * x).cosh() - 1.0) / (alpha * alpha))
                }
            }
            NamedFunc::RationalShear { gamma } => {
                let d = 1.0 + gamma * x;
                if d <= 0.0 {
                    return Err(Error::SingularPoint { p: x, q: 0.0 });
                }
                Ok((x - d.ln() / gamma) / gamma)
            }
            NamedFunc::Log | NamedFunc::Tabulated { .. } => {
                // Simpson quadrature fallback
                let n = 200;
                let h = x / n as f64;
                let mut acc = self.eval(0.0).unwrap_or(0.0) + self.eval(x)?;
                for i in 1..n {
                    let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                    acc += w * self.eval(h * i as f64)?;
                }
                Ok(acc * h / 3.0)
            }
        }
    }

    /// Inverse of a strictly monotone function; closed form where known,
    /// expanding-bracket bisection otherwise.
    pub fn inverse(&self, y: f64) -> Result<f64, Error> {
        match self {
            NamedFunc::Exp => {
                if y <= 0.0 {
                    Err(Error::OutOfRange {
                        x: y,
                        lo: 0.0,
                        hi: f64::INFINITY,
                    })
                } else {
                    Ok(y.ln())
                }
            }
            NamedFunc::Log => Ok(y.exp()),
            NamedFunc::SinhScaled { alpha } => {
                if alpha.abs() < 1e-14 {
                    Ok(y)
                } else {
                    Ok((alpha * y).asinh() / alpha)
                }
            }
            NamedFunc::RationalShear { gamma } => {
                let d = 1.0 - gamma * y;
                if d.abs() < 1e-13 {
                    Err(Error::SingularPoint { p: y, q: 0.0 })
                } else {
                    Ok(y / d)
                }
            }
            NamedFunc::Poly { coeffs } if coeffs.len() == 2 && coeffs[0] == 0.0 => {
                Ok(y / coeffs[1])
            }
            _ => invert_by_bisection(self, y),
        }
    }

    /// Check monotonicity on a sample of the given interval.
    pub fn is_monotone_on(&self, lo: f64, hi: f64) -> bool {
        let n = 256;
        let mut prev: Option<f64> = None;
        let mut dir = 0.0f64;
        for i in 0..=n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            match self.eval(x) {
                Ok(v) => {
                    if let Some(pv) = prev {
                        let d = v - pv;
                        if d * dir < 0.0 {
                            return false;
                        }
                        if d != 0.0 {
                            dir = d.signum();
                        }
                    }
                    prev = Some(v);
                }
                Err(_) => prev = None,
            }
        }
        true
    }
}

fn invert_by_bisection(f: &NamedFunc, y: f64) -> Result<f64, Error> {
    let mut lo = -1.0f64;
    let mut hi = 1.0f64;
    let increasing = f.eval(hi).unwrap_or(f64::MAX) >= f.eval(lo).unwrap_or(f64::MIN);
    for _ in 0..200 {
        let flo = f.eval(lo);
        let fhi = f.eval(hi);
        match (flo, fhi) {
            (Ok(a), Ok(b)) => {
                let (a, b) = if increasing { (a, b) } else { (b, a) };
                if a <= y && y <= b {
                    break;
                }
            }
            _ => {}
        }
        lo *= 2.0;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::RootBracket {
                node: y,
                detail: "no bracket for inverse".into(),
            });
        }
    }
    let mut a = lo;
    let mut b = hi;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f.eval(m)?;
        let cond = if increasing { fm < y } else { fm > y };
        if cond {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}
