//! Closed-form Lyapunov exponents and the critical noise curve.
//!
//! With `k = |b*sigma|` the stationary amplitude density of the reduced
//! problem is
//!
//! ```text
//! m(v) = v^{-1/2} exp(-k v^3 / 6 + alpha^2 v / (2k)) / Z,      v > 0
//! ```
//!
//! and the exponents are `lambda_{1,2} = -alpha/2 +- (k/2) * E_m[v]`. The
//! exponent is maximal at `v* = alpha / k`, where it equals `c/3` with
//! `c = alpha^3 / (sigma b)^2`; every integrand here is evaluated relative to
//! that maximum so large `c` cannot overflow.
//!
//! Substituting `v = (alpha/k) u` gives a second form that depends on `c`
//! alone, `lambda_1 = (alpha/2) (E_{m~}[u] - 1)`; its sign is that of
//! [`sign_function`] `G(c)`, whose unique root is the universal constant
//! [`c0`]. The critical curve is `sigma0 = alpha^{3/2} / (sqrt(c0) |b|)`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{decay_cutoff, integrate_half_line, QuadratureSpec};
use crate::roots::brent;

/// Absolute tolerance on `lambda_1` below which a point is called critical.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-7;

/// Tolerance `c0` is cached at.
pub const C0_TOLERANCE: f64 = 1e-10;

/// Initial bracket for the root of `G`.
pub const C0_BRACKET: (f64, f64) = (0.05, 1.0);

/// Dissipation `alpha`, shear `b` and noise amplitude `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub alpha: f64,
    pub b: f64,
    pub sigma: f64,
}

impl Parameters {
    pub fn new(alpha: f64, b: f64, sigma: f64) -> Result<Self> {
        let p = Self { alpha, b, sigma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.b.is_finite() && self.sigma.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite parameters {self:?}"
            )));
        }
        if self.alpha <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if self.sigma < 0.0 {
            return Err(Error::InvalidInput(format!(
                "sigma must be nonnegative, got {}",
                self.sigma
            )));
        }
        Ok(())
    }

    /// `|b * sigma|`, the only way shear and noise enter the exponents.
    pub fn effective_noise(&self) -> f64 {
        (self.b * self.sigma).abs()
    }

    /// `alpha^3 / (sigma b)^2`.
    pub fn c(&self) -> f64 {
        self.alpha.powi(3) / (self.sigma * self.b).powi(2)
    }

    fn noise_strength(&self) -> Result<f64> {
        self.validate()?;
        let k = self.effective_noise();
        if k == 0.0 {
            return Err(Error::DegenerateNoise {
                alpha: self.alpha,
                b: self.b,
                sigma: self.sigma,
            });
        }
        Ok(k)
    }
}

/// How a pair of exponents was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Quadrature,
    MonteCarlo,
    FokkerPlanck,
    TimeAverage,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Quadrature => "Quadrature",
            Method::MonteCarlo => "MonteCarlo",
            Method::FokkerPlanck => "FokkerPlanck",
            Method::TimeAverage => "TimeAverage",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovPair {
    pub lambda1: f64,
    pub lambda2: f64,
    pub method: Method,
    /// Absolute error estimate (quadrature) or standard error (sampling).
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeKind {
    /// `lambda_1 < 0`: the random attractor is a single point.
    RandomEquilibrium,
    Critical,
    /// `lambda_1 > 0`: atomless random attractor.
    RandomStrangeAttractor,
}

impl RegimeKind {
    pub fn from_lambda1(lambda1: f64, tol: f64) -> Self {
        if lambda1 < -tol {
            RegimeKind::RandomEquilibrium
        } else if lambda1 > tol {
            RegimeKind::RandomStrangeAttractor
        } else {
            RegimeKind::Critical
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeKind::RandomEquilibrium => "RandomEquilibrium",
            RegimeKind::Critical => "Critical",
            RegimeKind::RandomStrangeAttractor => "RandomStrangeAttractor",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub kind: RegimeKind,
    pub lambda1: f64,
    pub sigma0: f64,
}

/// The normalized stationary amplitude density `m(v)` for one parameter set.
///
/// The normalizer is computed once at construction.
#[derive(Debug, Clone)]
pub struct StationaryDensity {
    k: f64,
    peak: f64,
    norm: f64,
    spec: QuadratureSpec,
    /// Absolute quadrature error actually requested for `norm`.
    abs_tol: f64,
}

impl StationaryDensity {
    pub fn new(p: &Parameters, spec: &QuadratureSpec) -> Result<Self> {
        let k = p.noise_strength()?;
        spec.validate()?;
        let peak = p.alpha / k;
        let cutoff = decay_cutoff(
            |v| 0.5 * v.max(1.0).ln() + log_weight(v, k, peak),
            peak,
            spec.tolerance,
        )?;
        let spec = spec.singular().with_cutoff(cutoff);

        let weight = |v: f64| log_weight(v, k, peak).exp() / v.sqrt();
        let mut norm = integrate_half_line(weight, &spec)?;
        let mut abs_tol = spec.tolerance;
        if norm < 1.0 {
            // keep the normalizer accurate in relative terms
            abs_tol = spec.tolerance * norm;
            norm = integrate_half_line(weight, &spec.with_tolerance(abs_tol))?;
        }
        Ok(Self {
            k,
            peak,
            norm,
            spec: spec.with_tolerance(abs_tol),
            abs_tol,
        })
    }

    /// `m(v)`; infinite at `v = 0`.
    pub fn density(&self, v: f64) -> Result<f64> {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::InvalidInput(format!(
                "density argument must be >= 0, got {v}"
            )));
        }
        if v == 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(log_weight(v, self.k, self.peak).exp() / (v.sqrt() * self.norm))
    }

    /// `E_m[v] = int_0^inf v m(v) dv`.
    pub fn first_moment(&self) -> Result<f64> {
        let (k, peak) = (self.k, self.peak);
        let moment = integrate_half_line(|v| v.sqrt() * log_weight(v, k, peak).exp(), &self.spec)?;
        Ok(moment / self.norm)
    }

    /// Unnormalized-integral cutoff used for every integral of this density.
    pub fn cutoff(&self) -> f64 {
        self.spec.cutoff.unwrap_or(f64::INFINITY)
    }

    pub fn normalizer(&self) -> f64 {
        self.norm
    }
}

/// `ln(v^{1/2} m(v) Z) - c/3`, written in factored form:
/// `-(k/6) (v - v*)^2 (v + 2 v*)`.
fn log_weight(v: f64, k: f64, peak: f64) -> f64 {
    let d = v - peak;
    -(k / 6.0) * d * d * (v + 2.0 * peak)
}

/// `(u - 1)^2 (u + 2) / 6 = u^3/6 - u/2 + 1/3`.
fn rescaled_exponent(u: f64) -> f64 {
    let d = u - 1.0;
    d * d * (u + 2.0) / 6.0
}

/// Stationary density `m(v)`; see [`StationaryDensity`] to amortize the normalizer.
pub fn density_m(v: f64, p: &Parameters) -> Result<f64> {
    StationaryDensity::new(p, &QuadratureSpec::default())?.density(v)
}

/// Both exponents at the default quadrature tolerance.
pub fn lyapunov_pair(p: &Parameters) -> Result<LyapunovPair> {
    lyapunov_pair_with(p, &QuadratureSpec::default())
}

pub fn lyapunov_pair_with(p: &Parameters, spec: &QuadratureSpec) -> Result<LyapunovPair> {
    let density = StationaryDensity::new(p, spec)?;
    let moment = density.first_moment()?;
    let half_k = 0.5 * density.k;
    let half_alpha = 0.5 * p.alpha;
    let error = half_k * density.abs_tol * (1.0 + moment) / density.norm;
    Ok(LyapunovPair {
        lambda1: -half_alpha + half_k * moment,
        lambda2: -half_alpha - half_k * moment,
        method: Method::Quadrature,
        error,
    })
}

/// `lambda_1` from the `c`-only form `(alpha/2)(E_{m~}[u] - 1)`.
///
/// Independent of [`lyapunov_pair`] past the shared quadrature engine; the
/// two must agree to quadrature accuracy.
pub fn lambda1_rescaled(p: &Parameters, spec: &QuadratureSpec) -> Result<f64> {
    p.noise_strength()?;
    let c = p.c();
    let ratio = rescaled_moment_ratio(c, spec)?;
    Ok(0.5 * p.alpha * (ratio - 1.0))
}

fn rescaled_moment_ratio(c: f64, spec: &QuadratureSpec) -> Result<f64> {
    let cutoff = decay_cutoff(
        |u| 0.5 * u.max(1.0).ln() - c * rescaled_exponent(u),
        1.0,
        spec.tolerance,
    )?;
    let spec = spec.singular().with_cutoff(cutoff);
    let mut den = integrate_half_line(|u| (-c * rescaled_exponent(u)).exp() / u.sqrt(), &spec)?;
    let mut spec_num = spec;
    if den < 1.0 {
        let tighter = spec.with_tolerance(spec.tolerance * den);
        den = integrate_half_line(|u| (-c * rescaled_exponent(u)).exp() / u.sqrt(), &tighter)?;
        spec_num = tighter;
    }
    let num = integrate_half_line(|u| u.sqrt() * (-c * rescaled_exponent(u)).exp(), &spec_num)?;
    Ok(num / den)
}

/// `G(c) = int_0^inf (sqrt(u) - 1/sqrt(u)) exp(-c (u^3/6 - u/2)) du`.
///
/// Strictly decreasing in `c`, positive below [`c0`] and negative above it;
/// `sign(G(c)) = sign(lambda_1)` whenever `alpha^3 / (sigma b)^2 = c`.
pub fn sign_function(c: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(sign_function_scaled(c, spec)? * (c / 3.0).exp())
}

/// `exp(-c/3) G(c)`: same sign as `G`, but finite for every `c > 0`.
pub fn sign_function_scaled(c: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidInput(format!("G needs c > 0, got {c}")));
    }
    spec.validate()?;
    let scale = (-c / 3.0).exp();
    let tol = spec.tolerance * scale.min(1.0);
    let cutoff = decay_cutoff(
        |u| 0.5 * u.max(1.0).ln() - c * rescaled_exponent(u),
        1.0,
        tol,
    )?;
    let spec = spec.with_tolerance(tol).singular().with_cutoff(cutoff);
    integrate_half_line(
        |u| (u.sqrt() - 1.0 / u.sqrt()) * (-c * rescaled_exponent(u)).exp(),
        &spec,
    )
}

/// Root of `G` in [`C0_BRACKET`] with final bracket narrower than `tol`.
pub fn find_c0(tol: f64) -> Result<f64> {
    find_c0_in(tol, C0_BRACKET.0, C0_BRACKET.1)
}

pub fn find_c0_in(tol: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let spec = QuadratureSpec::default().with_tolerance(1e-13);
    let g = |c: f64| sign_function(c, &spec);
    let (g_lo, g_hi) = (g(lo)?, g(hi)?);
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(Error::BracketFailure {
            lo,
            hi,
            f_lo: g_lo,
            f_hi: g_hi,
        });
    }
    Ok(brent(g, lo, hi, tol, 200)?.x)
}

/// The universal constant `c0 ~ 0.2823`, computed once per process.
pub fn c0() -> f64 {
    static C0: OnceLock<f64> = OnceLock::new();
    *C0.get_or_init(|| find_c0(C0_TOLERANCE).expect("G changes sign on the built-in bracket"))
}

/// Critical noise amplitude `alpha^{3/2} / (sqrt(c0) |b|)`.
pub fn sigma0(alpha: f64, b: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if b == 0.0 || !b.is_finite() {
        return Err(Error::InvalidInput(format!(
            "b must be nonzero and finite, got {b}"
        )));
    }
    Ok(alpha.powf(1.5) / (c0().sqrt() * b.abs()))
}

pub fn classify(p: &Parameters, tol: f64) -> Result<Regime> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "classification tolerance must be positive, got {tol}"
        )));
    }
    let pair = lyapunov_pair(p)?;
    Ok(Regime {
        kind: RegimeKind::from_lambda1(pair.lambda1, tol),
        lambda1: pair.lambda1,
        sigma0: sigma0(p.alpha, p.b)?,
    })
}

/// Furstenberg–Khasminskii integrand on the projective angle `phi`.
pub fn q_integrand(phi: f64, p: &Parameters) -> f64 {
    let (s, c) = phi.sin_cos();
    -p.alpha * c * c + p.b * c * s + 0.5 * p.sigma * p.sigma * (1.0 - 2.0 * c * c) * s * s
}
