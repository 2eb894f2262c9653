//! Orthonormal basis of the control space `L^2([0, T]; R^m)`.
//!
//! Elements are shifted Legendre polynomials in time tensored with the
//! standard input directions: element `i = k * m + c` is
//! `phi_k(t) * e_c` with `phi_k(t) = sqrt((2k + 1) / T) * P_k(2 t / T - 1)`.
//! Enumeration is degree-major, channel-minor, and the family is
//! orthonormal in the `L^2` inner product.

use crate::{Error, Result};

/// Truncated orthonormal basis: `degrees` polynomial degrees per channel,
/// `degrees * channels` elements in total.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OrthonormalBasis {
    horizon: f64,
    channels: usize,
    degrees: usize,
}

/// Build the basis for horizon `t`, `m` input channels and `d` polynomial
/// degrees per channel.
pub fn build_basis(t: f64, m: usize, d: usize) -> Result<OrthonormalBasis> {
    OrthonormalBasis::new(t, m, d)
}

impl OrthonormalBasis {
    pub fn new(horizon: f64, channels: usize, degrees: usize) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::Value(format!(
                "basis horizon must be positive and finite, got {horizon}"
            )));
        }
        if channels == 0 || degrees == 0 {
            return Err(Error::Value(
                "basis needs at least one channel and one degree".into(),
            ));
        }
        Ok(Self {
            horizon,
            channels,
            degrees,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn degrees(&self) -> usize {
        self.degrees
    }

    /// Number of basis elements, `degrees * channels`.
    pub fn len(&self) -> usize {
        self.degrees * self.channels
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree_of(&self, index: usize) -> usize {
        index / self.channels
    }

    pub fn channel_of(&self, index: usize) -> usize {
        index % self.channels
    }

    /// A copy with a different degree count (used when growing a projection).
    pub fn with_degrees(&self, degrees: usize) -> Result<Self> {
        Self::new(self.horizon, self.channels, degrees)
    }

    /// All normalized polynomial factors `phi_0(t), ..., phi_{D-1}(t)`.
    ///
    /// One pass of the Legendre recurrence; this is the hot path when
    /// assembling frame vectors by quadrature.
    pub fn eval_degrees(&self, t: f64) -> Vec<f64> {
        let x = 2.0 * t / self.horizon - 1.0;
        let mut values = Vec::with_capacity(self.degrees);
        let mut p_prev = 1.0;
        let mut p = x;
        for k in 0..self.degrees {
            let pk = match k {
                0 => 1.0,
                1 => x,
                _ => {
                    let jf = (k - 1) as f64;
                    let p_next = ((2.0 * jf + 1.0) * x * p - jf * p_prev) / (jf + 1.0);
                    p_prev = p;
                    p = p_next;
                    p
                }
            };
            values.push(((2 * k + 1) as f64 / self.horizon).sqrt() * pk);
        }
        values
    }

    /// Scalar factor `phi_k(t)` of basis element `k * channels + c`.
    pub fn eval_poly(&self, degree: usize, t: f64) -> f64 {
        self.eval_degrees(t)[degree]
    }
}
