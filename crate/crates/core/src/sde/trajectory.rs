use serde::{Deserialize, Serialize};

use super::coupling::PhaseCoupling;
use super::noise::NoiseStream;
use super::state::CylinderState;
use super::step::step_system;
use crate::analytic::Parameters;
use crate::error::{Error, Result};

/// CSV header of a trajectory dump.
pub const TRAJECTORY_HEADER: &str = "t,y,theta,v_y,v_theta,log_norm";

/// One sample of a trajectory; `(v_y, v_theta)` is the unit tangent direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub y: f64,
    pub theta: f64,
    pub v_y: f64,
    pub v_theta: f64,
    pub log_norm: f64,
}

impl TrajectoryRecord {
    fn of(t: f64, s: &CylinderState) -> Self {
        let (v, log_norm) = match s.tangent {
            Some(tan) => {
                let n = tan.v[0].hypot(tan.v[1]);
                ([tan.v[0] / n, tan.v[1] / n], tan.total_log_norm())
            }
            None => ([f64::NAN, f64::NAN], f64::NAN),
        };
        Self {
            t,
            y: s.y,
            theta: s.theta,
            v_y: v[0],
            v_theta: v[1],
            log_norm,
        }
    }
}

/// Integrates one trajectory, recording every `sample_every`-th step (and the start).
pub fn simulate_trajectory(
    p: &Parameters,
    c: &PhaseCoupling,
    start: CylinderState,
    horizon: f64,
    noise: &mut NoiseStream,
    sample_every: usize,
) -> Result<Vec<TrajectoryRecord>> {
    p.validate()?;
    if !(horizon > 0.0) || sample_every == 0 {
        return Err(Error::InvalidInput(format!(
            "need horizon > 0 and sample_every >= 1, got {horizon}, {sample_every}"
        )));
    }
    let dt = noise.dt();
    let steps = (horizon / dt).round() as usize;
    let mut out = Vec::with_capacity(steps / sample_every + 2);
    let mut s = start;
    out.push(TrajectoryRecord::of(0.0, &s));
    for i in 1..=steps {
        let dw = noise.increments(c.drivers());
        s = step_system(&s, p, c, &dw, dt)?;
        if i % sample_every == 0 || i == steps {
            out.push(TrajectoryRecord::of(i as f64 * dt, &s));
        }
    }
    Ok(out)
}
