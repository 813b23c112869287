use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::step::wrap_phase;
use crate::error::{Error, Result};

/// Steps between forced Gram–Schmidt renormalizations of the tangent frame.
pub const RENORM_INTERVAL: u32 = 10;

/// Norm range outside of which the frame is renormalized immediately.
pub const RENORM_BOUNDS: (f64, f64) = (1e-6, 1e6);

/// Orthonormalized tangent frame `(v, w)` with accumulated growth.
///
/// `v` follows the top exponent; the parallelogram spanned by `v` and `w`
/// follows `lambda_1 + lambda_2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tangent {
    /// Components `(v_y, v_theta)`.
    pub v: [f64; 2],
    pub w: [f64; 2],
    /// `sum log ||v||` over past renormalizations.
    pub log_norm: f64,
    /// `sum log |det(v, w)|` over past renormalizations.
    pub area_log: f64,
    pub(crate) since_renorm: u32,
}

impl Tangent {
    /// Starts a frame along `v`; the initial norm is divided out.
    pub fn new(v: [f64; 2]) -> Result<Self> {
        let n = v[0].hypot(v[1]);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "tangent vector must be nonzero and finite, got {v:?}"
            )));
        }
        let v = [v[0] / n, v[1] / n];
        Ok(Self {
            v,
            w: [-v[1], v[0]],
            log_norm: 0.0,
            area_log: 0.0,
            since_renorm: 0,
        })
    }

    /// Gram–Schmidt on `(v, w)`, folding the removed scale into the accumulators.
    pub fn renormalize(&mut self) {
        let r11 = self.v[0].hypot(self.v[1]);
        self.v = [self.v[0] / r11, self.v[1] / r11];
        let proj = self.w[0] * self.v[0] + self.w[1] * self.v[1];
        let w = [self.w[0] - proj * self.v[0], self.w[1] - proj * self.v[1]];
        let r22 = w[0].hypot(w[1]);
        self.w = [w[0] / r22, w[1] / r22];
        self.log_norm += r11.ln();
        self.area_log += r11.ln() + r22.ln();
        self.since_renorm = 0;
    }

    pub(crate) fn needs_renorm(&self) -> bool {
        let (lo, hi) = RENORM_BOUNDS;
        let nv = self.v[0].hypot(self.v[1]);
        let nw = self.w[0].hypot(self.w[1]);
        self.since_renorm >= RENORM_INTERVAL || !(lo..=hi).contains(&nv) || !(lo..=hi).contains(&nw)
    }

    /// `log ||v_t|| / ||v_0||` including growth since the last renormalization.
    pub fn total_log_norm(&self) -> f64 {
        self.log_norm + self.v[0].hypot(self.v[1]).ln()
    }

    /// Log area growth of the frame including the current parallelogram.
    pub fn total_area_log(&self) -> f64 {
        let det = self.v[0] * self.w[1] - self.v[1] * self.w[0];
        self.area_log + det.abs().ln()
    }

    /// Projective angle of `v` in `[0, pi)`, measured from the amplitude axis.
    pub fn angle(&self) -> f64 {
        let a = self.v[1].atan2(self.v[0]).rem_euclid(PI);
        if a >= PI {
            0.0
        } else {
            a
        }
    }
}

/// A point `(y, theta)` on the cylinder `R x [0, 1)`, optionally with a tangent frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderState {
    pub y: f64,
    pub theta: f64,
    pub tangent: Option<Tangent>,
}

impl CylinderState {
    pub fn new(y: f64, theta: f64) -> Result<Self> {
        if !(y.is_finite() && theta.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite state ({y}, {theta})"
            )));
        }
        Ok(Self {
            y,
            theta: wrap_phase(theta),
            tangent: None,
        })
    }

    pub fn with_tangent(mut self, v: [f64; 2]) -> Result<Self> {
        self.tangent = Some(Tangent::new(v)?);
        Ok(self)
    }

    /// Distance in the flat cylinder metric, phases compared around the circle.
    pub fn distance(&self, other: &CylinderState) -> f64 {
        cylinder_distance((self.y, self.theta), (other.y, other.theta))
    }
}

pub(crate) fn cylinder_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let dy = a.0 - b.0;
    let d = (a.1 - b.1).abs();
    let dtheta = d.min(1.0 - d);
    dy.hypot(dtheta)
}
