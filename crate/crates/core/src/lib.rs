//! Lyapunov exponents of a stochastically driven limit cycle on the cylinder
//!
//! ```text
//! dy = -alpha*y dt + sigma * sum_i f_i(theta) o dW^i
//! dtheta = (1 + b*y) dt
//! ```
//!
//! The top exponent changes sign exactly once, at `sigma0(alpha, b)`, where
//! the random attractor turns from a synchronizing random equilibrium into a
//! random strange attractor. The crate computes the exponents three ways and
//! cross-checks them:
//!
//! - [`analytic`]: closed-form quadrature, the sign function `G(c)`, the
//!   universal constant `c0` and the critical curve `sigma0`.
//! - [`estimators`]: Monte Carlo tangent growth, the Furstenberg–Khasminskii
//!   time average and a stationary Fokker–Planck solve, plus the pullback
//!   point-cloud sampler.
//! - [`harness`]: parameter sweeps, bifurcation curves and CSV/JSON/SVG output.
//!
//! [`quadrature`] and [`sde`] are the numerical engines underneath.

// Validation is written as `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod quadrature;
pub mod roots;
pub mod sde;

pub use analytic::{
    c0, classify, find_c0, lyapunov_pair, sigma0, LyapunovPair, Method, Parameters, Regime,
    RegimeKind,
};
pub use error::{Error, Result};
pub use estimators::{DensityGrid, Estimate};
pub use harness::{Format, SweepMode, SweepResult, SweepSpec};
pub use quadrature::QuadratureSpec;
pub use sde::{CouplingKind, CylinderState, NoiseStream, PhaseCoupling};
