//! Rectangular phase-space grid description.

use crate::error::Error;
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Uniform Np×Nq grid over [p_min, p_max] × [q_min, q_max] with a fixed ħ.
///
/// The spacing convention is `dp = (p_max − p_min)/(np − 1)`: both endpoints
/// are grid nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Real", deserialize = "R: Real"))]
pub struct GridSpec<R: Real> {
    pub p_min: R,
    pub p_max: R,
    pub q_min: R,
    pub q_max: R,
    pub np: usize,
    pub nq: usize,
    pub hbar: R,
}

impl<R: Real> GridSpec<R> {
    pub fn new(
        p_min: R,
        p_max: R,
        q_min: R,
        q_max: R,
        np: usize,
        nq: usize,
        hbar: R,
    ) -> Result<Self, Error> {
        let s = Self {
            p_min,
            p_max,
            q_min,
            q_max,
            np,
            nq,
            hbar,
        };
        s.validate()?;
        Ok(s)
    }

    /// Square grid helper.
    pub fn square(half_width: f64, n: usize, hbar: f64) -> Result<Self, Error> {
        let w = R::from_f(half_width);
        Self::new(-w, w, -w, w, n, n, R::from_f(hbar))
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.p_max > self.p_min) || !(self.q_max > self.q_min) {
            return Err(Error::InvalidGrid("empty coordinate range".into()));
        }
        if self.np < 8 || self.nq < 8 {
            return Err(Error::InvalidGrid("need at least 8 points per axis".into()));
        }
        if !(self.hbar > R::zero()) {
            return Err(Error::InvalidGrid("hbar must be positive".into()));
        }
        Ok(())
    }

    pub fn dp(&self) -> R {
        (self.p_max - self.p_min) / R::from_usize(self.np - 1).unwrap()
    }

    pub fn dq(&self) -> R {
        (self.q_max - self.q_min) / R::from_usize(self.nq - 1).unwrap()
    }

    pub fn p(&self, i: usize) -> R {
        self.p_min + self.dp() * R::from_usize(i).unwrap()
    }

    pub fn q(&self, j: usize) -> R {
        self.q_min + self.dq() * R::from_usize(j).unwrap()
    }

    pub fn len(&self) -> usize {
        self.np * self.nq
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn same_geometry(&self, other: &Self) -> bool {
        self == other
    }
}
