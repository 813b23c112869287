//! Independent estimators of the top Lyapunov exponent and the pullback
//! point-cloud sampler.
//!
//! | estimator | route |
//! |---|---|
//! | [`mc_lyapunov`] | tangent-frame growth along simulated trajectories |
//! | [`fk_time_average`] | ergodic average of `q(phi_t)` along the angle process |
//! | [`stationary_density_fp`] + [`lambda1_from_density`] | `int q p` over the stationary angle density |

mod fokker_planck;
mod monte_carlo;
mod pullback;
mod stats;

pub use fokker_planck::{lambda1_from_density, stationary_density_fp, DensityGrid, DENSITY_HEADER};
pub use monte_carlo::{burn_in, fk_time_average, mc_lyapunov, McConfig, McEstimate};
pub use pullback::{
    diameter, pullback_sample, DiameterSample, PullbackConfig, PullbackResult, DIAMETER_HEADER,
};
pub use stats::Estimate;
