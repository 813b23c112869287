use rayon::prelude::*;
use std::f64::consts::PI;

use super::stats::Estimate;
use crate::analytic::{q_integrand, Parameters};
use crate::error::{Error, Result};
use crate::sde::{
    phase_midpoint, step_phi, step_system, CylinderState, NoiseStream, PhaseCoupling,
};

/// Ensemble settings shared by the sampling estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    /// Simulated time per trajectory, burn-in included.
    pub horizon: f64,
    pub dt: f64,
    pub n_traj: usize,
    pub seed: u64,
}

impl McConfig {
    pub fn validate(&self, p: &Parameters) -> Result<()> {
        p.validate()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.horizon >= 100.0 / p.alpha) {
            return Err(Error::InvalidInput(format!(
                "horizon {} is shorter than 100/alpha = {}",
                self.horizon,
                100.0 / p.alpha
            )));
        }
        if self.n_traj < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 trajectories, got {}",
                self.n_traj
            )));
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    fn burn_in_steps(&self, alpha: f64) -> usize {
        (burn_in(self.horizon, alpha) / self.dt).round() as usize
    }
}

/// Transient discarded before averaging: `max(T/10, 20/alpha)`.
pub fn burn_in(horizon: f64, alpha: f64) -> f64 {
    (0.1 * horizon).max(20.0 / alpha)
}

/// Top exponent and exponent sum from tangent-frame growth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub lambda1: Estimate,
    /// Estimates `lambda_1 + lambda_2`, which is `-alpha` exactly.
    pub sum12: Estimate,
}

impl McEstimate {
    pub fn lambda2(&self) -> f64 {
        self.sum12.value - self.lambda1.value
    }
}

/// Random start for trajectory `i`: `y = 0`, uniform phase, uniform tangent direction.
fn initial_state(noise: &mut NoiseStream) -> Result<CylinderState> {
    let theta = noise.uniform();
    let angle = PI * noise.uniform();
    CylinderState::new(0.0, theta)?.with_tangent([angle.cos(), angle.sin()])
}

/// `(log growth of v, log growth of the frame area)` after burn-in, per unit time.
fn tangent_growth(
    p: &Parameters,
    c: &PhaseCoupling,
    cfg: &McConfig,
    stream: u64,
) -> Result<(f64, f64)> {
    let mut noise = NoiseStream::new(cfg.seed, stream, cfg.dt)?;
    let mut s = initial_state(&mut noise)?;
    let (steps, burn) = (cfg.steps(), cfg.burn_in_steps(p.alpha));
    let mut base = (0.0, 0.0);
    for i in 0..steps {
        if i == burn {
            let t = s.tangent.expect("tangent attached");
            base = (t.total_log_norm(), t.total_area_log());
        }
        let dw = noise.increments(c.drivers());
        s = step_system(&s, p, c, &dw, cfg.dt)?;
    }
    let t = s.tangent.expect("tangent attached");
    let window = (steps - burn) as f64 * cfg.dt;
    Ok((
        (t.total_log_norm() - base.0) / window,
        (t.total_area_log() - base.1) / window,
    ))
}

/// Monte Carlo Lyapunov exponents from `n_traj` independent trajectories.
///
/// Trajectory `i` draws its noise from stream `i` of `seed`; results do not
/// depend on the rayon thread count.
pub fn mc_lyapunov(p: &Parameters, c: &PhaseCoupling, cfg: &McConfig) -> Result<McEstimate> {
    cfg.validate(p)?;
    let runs: Vec<(f64, f64)> = (0..cfg.n_traj as u64)
        .into_par_iter()
        .map(|i| tangent_growth(p, c, cfg, i))
        .collect::<Result<_>>()?;
    let window = cfg.horizon - burn_in(cfg.horizon, p.alpha);
    let top: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let sum: Vec<f64> = runs.iter().map(|r| r.1).collect();
    Ok(McEstimate {
        lambda1: Estimate::from_samples(&top, window, cfg.dt)?,
        sum12: Estimate::from_samples(&sum, window, cfg.dt)?,
    })
}

fn q_time_average(p: &Parameters, c: &PhaseCoupling, cfg: &McConfig, stream: u64) -> Result<f64> {
    let mut noise = NoiseStream::new(cfg.seed, stream, cfg.dt)?;
    let mut s = CylinderState::new(0.0, noise.uniform())?;
    let mut phi = PI * noise.uniform();
    let (steps, burn) = (cfg.steps(), cfg.burn_in_steps(p.alpha));
    let mut q_prev = q_integrand(phi, p);
    let mut integral = 0.0;
    for i in 0..steps {
        let dw = noise.increments(c.drivers());
        let mid = phase_midpoint(s.theta, s.theta + (1.0 + p.b * s.y) * cfg.dt);
        s = step_system(&s, p, c, &dw, cfg.dt)?;
        phi = step_phi(phi, mid, p, c, &dw, cfg.dt)?;
        let q = q_integrand(phi, p);
        if i >= burn {
            integral += 0.5 * (q_prev + q) * cfg.dt;
        }
        q_prev = q;
    }
    Ok(integral / ((steps - burn) as f64 * cfg.dt))
}

/// Furstenberg–Khasminskii estimate: time average of `q(phi_t)` along the
/// angle process driven jointly with `(y, theta)`.
///
/// Requires a coupling with `sum_i f_i'^2 = 1`, which all built-in kinds satisfy.
pub fn fk_time_average(p: &Parameters, c: &PhaseCoupling, cfg: &McConfig) -> Result<Estimate> {
    cfg.validate(p)?;
    let runs: Vec<f64> = (0..cfg.n_traj as u64)
        .into_par_iter()
        .map(|i| q_time_average(p, c, cfg, i))
        .collect::<Result<_>>()?;
    let window = cfg.horizon - burn_in(cfg.horizon, p.alpha);
    Estimate::from_samples(&runs, window, cfg.dt)
}
