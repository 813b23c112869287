use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ensemble mean with its CLT standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    /// Sample standard deviation over trajectories divided by `sqrt(n_samples)`.
    pub stderr: f64,
    pub n_samples: usize,
    /// Simulated time per trajectory.
    pub horizon: f64,
    pub dt: f64,
}

impl Estimate {
    pub fn from_samples(samples: &[f64], horizon: f64, dt: f64) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "a standard error needs at least 2 samples, got {n}"
            )));
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Ok(Self {
            value: mean,
            stderr: (var / n as f64).sqrt(),
            n_samples: n,
            horizon,
            dt,
        })
    }

    /// The sampling error swamps a nonzero estimate.
    pub fn insufficient_horizon(&self) -> bool {
        self.value != 0.0 && self.stderr > self.value.abs()
    }

    /// Accumulated floating-point error per unit time, `64 eps / dt`.
    ///
    /// When the dynamics are (nearly) deterministic the sampling error
    /// collapses to zero while rounding in each step still leaves a systematic
    /// residue of a few ulps per step.
    pub fn rounding_floor(&self) -> f64 {
        64.0 * f64::EPSILON / self.dt
    }

    /// `|value - target| <= k * stderr + rounding_floor()`.
    pub fn consistent_with(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.stderr + self.rounding_floor()
    }

    /// `sqrt(se_a^2 + se_b^2)`, for comparing independent estimates.
    pub fn combined_stderr(&self, other: &Estimate) -> f64 {
        self.stderr.hypot(other.stderr)
    }
}
