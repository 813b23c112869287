use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Largest number of independent Wiener drivers any coupling uses.
pub const MAX_DRIVERS: usize = 2;

/// Phase-dependent noise couplings `f_i`, all with `sum_i f_i'(theta)^2 = 1`
/// away from kinks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CouplingKind {
    /// `f(theta) = theta` on `[0, 1/2]`, `1 - theta` on `[1/2, 1)`.
    Tent,
    /// `f_1 = cos(2 pi theta) / 2 pi`, `f_2 = sin(2 pi theta) / 2 pi`.
    TrigPair,
    /// Piecewise-linear sine: slope +1 on `[0, 1/4]`, -1 on `[1/4, 3/4]`,
    /// +1 on `[3/4, 1)`.
    SineApprox4,
}

/// Value assigned to `f'` exactly at a kink of a piecewise-linear coupling.
///
/// The choice does not change the tangent flow, since kinks are visited on a
/// time set of measure zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KinkSign {
    /// `sign(0) = +1`.
    #[default]
    Plus,
    Minus,
}

impl KinkSign {
    fn value(self) -> f64 {
        match self {
            KinkSign::Plus => 1.0,
            KinkSign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhaseCoupling {
    pub kind: CouplingKind,
    pub kink: KinkSign,
}

/// `f_i(theta)` and `f_i'(theta)`; entries past [`PhaseCoupling::drivers`] are zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CouplingValue {
    pub values: [f64; MAX_DRIVERS],
    pub derivatives: [f64; MAX_DRIVERS],
}

impl Default for PhaseCoupling {
    fn default() -> Self {
        Self::tent()
    }
}

impl PhaseCoupling {
    pub const fn new(kind: CouplingKind) -> Self {
        Self {
            kind,
            kink: KinkSign::Plus,
        }
    }

    pub const fn tent() -> Self {
        Self::new(CouplingKind::Tent)
    }

    pub const fn trig_pair() -> Self {
        Self::new(CouplingKind::TrigPair)
    }

    pub const fn sine_approx4() -> Self {
        Self::new(CouplingKind::SineApprox4)
    }

    pub fn with_kink(mut self, kink: KinkSign) -> Self {
        self.kink = kink;
        self
    }

    /// Number of independent Wiener drivers `m`.
    pub fn drivers(&self) -> usize {
        match self.kind {
            CouplingKind::Tent | CouplingKind::SineApprox4 => 1,
            CouplingKind::TrigPair => 2,
        }
    }

    /// Evaluates the coupling at `theta` in `[0, 1)`.
    pub fn eval(&self, theta: f64) -> CouplingValue {
        let kink = self.kink.value();
        match self.kind {
            CouplingKind::Tent => {
                let (f, df) = if theta == 0.0 || theta == 0.5 {
                    (theta.min(1.0 - theta), kink)
                } else if theta < 0.5 {
                    (theta, 1.0)
                } else {
                    (1.0 - theta, -1.0)
                };
                CouplingValue {
                    values: [f, 0.0],
                    derivatives: [df, 0.0],
                }
            }
            CouplingKind::SineApprox4 => {
                let (f, df) = if theta == 0.25 || theta == 0.75 {
                    (if theta == 0.25 { 0.25 } else { -0.25 }, kink)
                } else if theta < 0.25 {
                    (theta, 1.0)
                } else if theta < 0.75 {
                    (0.5 - theta, -1.0)
                } else {
                    (theta - 1.0, 1.0)
                };
                CouplingValue {
                    values: [f, 0.0],
                    derivatives: [df, 0.0],
                }
            }
            CouplingKind::TrigPair => {
                let (s, c) = (TAU * theta).sin_cos();
                CouplingValue {
                    values: [c / TAU, s / TAU],
                    derivatives: [-s, c],
                }
            }
        }
    }

    /// `sum_i f_i(theta)^2`, the instantaneous variance rate of the amplitude noise.
    pub fn squared_amplitude(&self, theta: f64) -> f64 {
        let v = self.eval(theta);
        v.values.iter().map(|f| f * f).sum()
    }
}

impl fmt::Display for CouplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CouplingKind::Tent => "tent",
            CouplingKind::TrigPair => "trig",
            CouplingKind::SineApprox4 => "sine4",
        })
    }
}

impl FromStr for CouplingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tent" => Ok(CouplingKind::Tent),
            "trig" | "trigpair" | "trig-pair" => Ok(CouplingKind::TrigPair),
            "sine4" | "sineapprox4" => Ok(CouplingKind::SineApprox4),
            other => Err(Error::InvalidInput(format!(
                "unknown coupling '{other}' (expected tent, trig or sine4)"
            ))),
        }
    }
}
