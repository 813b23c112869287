use std::f64::consts::PI;

use super::coupling::PhaseCoupling;
use super::noise::Increments;
use super::state::CylinderState;
use crate::analytic::Parameters;
use crate::error::{Error, Result};

/// Coordinates for the reduced linear tangent system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearCoordinates {
    /// `dv = [[-a, 0], [b, 0]] v dt + [[0, s], [0, 0]] v o dW`.
    Original,
    /// After `v -> (v_2, v_1 / s)`:
    /// `dv = [[0, s b], [0, -a]] v dt + [[0, 0], [1, 0]] v o dW`.
    Transformed,
}

impl LinearCoordinates {
    /// Maps an `Original` vector into `Transformed` coordinates.
    pub fn to_transformed(v: [f64; 2], sigma: f64) -> [f64; 2] {
        [v[1], v[0] / sigma]
    }

    pub fn from_transformed(v: [f64; 2], sigma: f64) -> [f64; 2] {
        [sigma * v[1], v[0]]
    }
}

/// Phase reduced to `[0, 1)`.
#[inline]
pub fn wrap_phase(theta: f64) -> f64 {
    let t = theta - theta.floor();
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

/// Projective angle reduced to `[0, pi)`.
#[inline]
pub fn wrap_projective(phi: f64) -> f64 {
    let p = phi.rem_euclid(PI);
    if p >= PI {
        0.0
    } else {
        p
    }
}

/// Wrapped midpoint of a phase and its (unwrapped) predictor.
#[inline]
pub fn phase_midpoint(theta: f64, theta_pred: f64) -> f64 {
    wrap_phase(0.5 * (theta + theta_pred))
}

/// `exp(M) v` for a 2x2 `M` frozen over the step.
///
/// Splitting `M = s I + N` with `N` traceless gives `N^2 = delta I`, so the
/// exponential is `e^s (C(delta) I + S(delta) N)` in closed form. Unlike the
/// truncated series, `det exp(M) = exp(tr M)` holds to rounding, which keeps
/// the exponent sum free of step-size bias.
#[inline]
fn exp_linear(m: &[[f64; 2]; 2], v: [f64; 2]) -> [f64; 2] {
    let s = 0.5 * (m[0][0] + m[1][1]);
    let p = m[0][0] - s;
    let delta = p * p + m[0][1] * m[1][0];
    let (c, sh) = if delta.abs() < 1e-8 {
        (
            1.0 + delta / 2.0 + delta * delta / 24.0,
            1.0 + delta / 6.0 + delta * delta / 120.0,
        )
    } else if delta > 0.0 {
        let r = delta.sqrt();
        (r.cosh(), r.sinh() / r)
    } else {
        let r = (-delta).sqrt();
        (r.cos(), r.sin() / r)
    };
    let e = s.exp();
    let nv = [p * v[0] + m[0][1] * v[1], m[1][0] * v[0] - p * v[1]];
    [e * (c * v[0] + sh * nv[0]), e * (c * v[1] + sh * nv[1])]
}

#[inline]
fn weighted_sum(coeffs: &[f64; 2], dw: &Increments, drivers: usize) -> f64 {
    coeffs
        .iter()
        .zip(dw.iter())
        .take(drivers)
        .map(|(c, w)| c * w)
        .sum()
}

fn non_finite(what: &str, value: impl std::fmt::Debug) -> Error {
    Error::NonFiniteState(format!("{what} = {value:?}; reduce dt"))
}

/// One stochastic Heun step of the cylinder SDE and, if present, its tangent frame.
///
/// The tangent update exponentiates the step matrix with the Jacobian frozen at
/// the predictor midpoint phase.
/// The frame is renormalized every [`super::RENORM_INTERVAL`] steps or when a
/// norm leaves [`super::RENORM_BOUNDS`].
pub fn step_system(
    s: &CylinderState,
    p: &Parameters,
    c: &PhaseCoupling,
    dw: &Increments,
    dt: f64,
) -> Result<CylinderState> {
    let m = c.drivers();
    let here = c.eval(s.theta);

    let drift_y = -p.alpha * s.y;
    let speed = 1.0 + p.b * s.y;
    let y_pred = s.y + drift_y * dt + p.sigma * weighted_sum(&here.values, dw, m);
    let theta_pred = s.theta + speed * dt;
    let there = c.eval(wrap_phase(theta_pred));

    // entries past the driver count are zero on both sides
    let forcing: [f64; 2] = std::array::from_fn(|i| here.values[i] + there.values[i]);
    let y = s.y
        + 0.5 * (drift_y - p.alpha * y_pred) * dt
        + 0.5 * p.sigma * weighted_sum(&forcing, dw, m);
    let theta = s.theta + 0.5 * (speed + 1.0 + p.b * y_pred) * dt;
    if !(y.is_finite() && theta.is_finite()) {
        return Err(non_finite("(y, theta)", (y, theta)));
    }

    let tangent = match s.tangent {
        None => None,
        Some(mut t) => {
            let mid = c.eval(phase_midpoint(s.theta, theta_pred));
            let g = p.sigma * weighted_sum(&mid.derivatives, dw, m);
            let jac = [[-p.alpha * dt, g], [p.b * dt, 0.0]];
            t.v = exp_linear(&jac, t.v);
            t.w = exp_linear(&jac, t.w);
            if !(t.v.iter().chain(t.w.iter()).all(|x| x.is_finite())) {
                return Err(non_finite("tangent", t.v));
            }
            t.since_renorm += 1;
            if t.needs_renorm() {
                t.renormalize();
            }
            Some(t)
        }
    };

    Ok(CylinderState {
        y,
        theta: wrap_phase(theta),
        tangent,
    })
}

/// One step of the phase-independent linear tangent system (exact exponential of
/// the frozen step matrix).
pub fn step_reduced_linear(
    v: [f64; 2],
    p: &Parameters,
    dw: f64,
    dt: f64,
    coords: LinearCoordinates,
) -> Result<[f64; 2]> {
    let m = match coords {
        LinearCoordinates::Original => [[-p.alpha * dt, p.sigma * dw], [p.b * dt, 0.0]],
        LinearCoordinates::Transformed => [[0.0, p.sigma * p.b * dt], [dw, -p.alpha * dt]],
    };
    let out = exp_linear(&m, v);
    if !(out[0].is_finite() && out[1].is_finite()) {
        return Err(non_finite("v", out));
    }
    Ok(out)
}

/// Drift `d(phi) = alpha cos(phi) sin(phi) + b cos(phi)^2` of the angle process.
#[inline]
pub(crate) fn angle_drift(phi: f64, p: &Parameters) -> f64 {
    let (s, c) = phi.sin_cos();
    c * (p.alpha * s + p.b * c)
}

/// One stochastic Heun step of
/// `dphi = d(phi) dt - sum_i sigma f_i'(theta) sin(phi)^2 o dW^i`, wrapped mod `pi`.
///
/// `theta` is held fixed over the step; pass the midpoint phase for consistency
/// with [`step_system`].
pub fn step_phi(
    phi: f64,
    theta: f64,
    p: &Parameters,
    c: &PhaseCoupling,
    dw: &Increments,
    dt: f64,
) -> Result<f64> {
    let g = p.sigma * weighted_sum(&c.eval(theta).derivatives, dw, c.drivers());
    let s0 = phi.sin();
    let d0 = angle_drift(phi, p);
    let pred = phi + d0 * dt - s0 * s0 * g;
    let s1 = pred.sin();
    let next = phi + 0.5 * (d0 + angle_drift(pred, p)) * dt - 0.5 * (s0 * s0 + s1 * s1) * g;
    if !next.is_finite() {
        return Err(non_finite("phi", next));
    }
    Ok(wrap_projective(next))
}
