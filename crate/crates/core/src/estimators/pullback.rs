use serde::{Deserialize, Serialize};

use crate::analytic::Parameters;
use crate::error::{Error, Result};
use crate::sde::state::cylinder_distance;
use crate::sde::{step_system, CylinderState, NoiseStream, PhaseCoupling};

/// CSV header for a diameter series.
pub const DIAMETER_HEADER: &str = "t,diameter";

/// Stream reserved for drawing the initial cloud, apart from the driving noise.
const INIT_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PullbackConfig {
    pub n_points: usize,
    pub horizon: f64,
    pub dt: f64,
    pub seed: u64,
    /// Record the diameter every this many steps.
    pub sample_every: usize,
}

impl PullbackConfig {
    fn validate(&self) -> Result<()> {
        if self.n_points == 0 {
            return Err(Error::InvalidInput("need at least one point".into()));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidInput(format!("bad horizon {}", self.horizon)));
        }
        if self.sample_every == 0 {
            return Err(Error::InvalidInput("sample_every must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiameterSample {
    pub t: f64,
    pub diameter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PullbackResult {
    pub points: Vec<CylinderState>,
    pub diameters: Vec<DiameterSample>,
}

/// Largest pairwise cylinder distance in the cloud.
pub fn diameter(points: &[CylinderState]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(cylinder_distance((a.y, a.theta), (b.y, b.theta)));
        }
    }
    best
}

/// Push a cloud of initial conditions through one shared noise realization.
///
/// Points start uniform in `theta` and in `y` within two stationary standard
/// deviations `sigma / sqrt(2 alpha)`. With `lambda_1 < 0` the cloud collapses
/// onto a random point; with `lambda_1 > 0` it spreads over a fractal set.
pub fn pullback_sample(
    p: &Parameters,
    c: &PhaseCoupling,
    cfg: &PullbackConfig,
) -> Result<PullbackResult> {
    p.validate()?;
    cfg.validate()?;
    let mut init = NoiseStream::new(cfg.seed, INIT_STREAM, cfg.dt)?;
    let spread = 2.0 * p.sigma / (2.0 * p.alpha).sqrt();
    let mut points = (0..cfg.n_points)
        .map(|_| {
            let y = spread * (2.0 * init.uniform() - 1.0);
            CylinderState::new(y, init.uniform())
        })
        .collect::<Result<Vec<_>>>()?;

    let mut noise = NoiseStream::new(cfg.seed, 0, cfg.dt)?;
    let steps = (cfg.horizon / cfg.dt).round() as usize;
    let mut diameters = vec![DiameterSample {
        t: 0.0,
        diameter: diameter(&points),
    }];
    for i in 1..=steps {
        let dw = noise.increments(c.drivers());
        for s in points.iter_mut() {
            *s = step_system(s, p, c, &dw, cfg.dt)?;
        }
        if i % cfg.sample_every == 0 || i == steps {
            diameters.push(DiameterSample {
                t: i as f64 * cfg.dt,
                diameter: diameter(&points),
            });
        }
    }
    Ok(PullbackResult { points, diameters })
}
