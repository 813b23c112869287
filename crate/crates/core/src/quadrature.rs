//! Adaptive Gauss–Legendre quadrature on finite intervals and on `[0, inf)`.
//!
//! Error control is by step halving: each panel's error is estimated as the
//! gap between the 10-point rule on the whole panel and on its two halves,
//! and the worst panel is bisected until the summed estimate meets the target.
//! Half-line integrals with an inverse square-root factor at the origin are
//! mapped through `u = t^2`, which turns `u^{-1/2} g(u) du` into
//! `2 g(t^2) dt`, and then truncated either at a caller-supplied cutoff or at
//! the first doubling panel whose contribution falls below `tolerance / 10`.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Abscissas (positive half) of the 10-point Gauss–Legendre rule on [-1, 1].
#[allow(clippy::excessive_precision)]
const GL_NODES: [f64; 5] = [
    0.148_874_338_981_631_210_884_826_001_130,
    0.433_395_394_129_247_190_799_265_943_166,
    0.679_409_568_299_024_406_234_327_365_115,
    0.865_063_366_688_984_510_732_096_688_424,
    0.973_906_528_517_171_720_077_964_012_085,
];

#[allow(clippy::excessive_precision)]
const GL_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_870_173_892_994_651,
    0.269_266_719_309_996_355_091_226_921_569,
    0.219_086_362_515_982_043_995_534_934_228,
    0.149_451_349_150_580_593_145_776_339_658,
    0.066_671_344_308_688_137_593_568_809_893,
];

/// Panels a finite interval is split into before adaptive refinement starts.
const INITIAL_PANELS: usize = 16;

/// Upper bound on doubling panels tried when searching for a truncation point.
const MAX_TAIL_PANELS: usize = 60;

/// Settings for one quadrature call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Absolute error target.
    pub tolerance: f64,
    /// Maximum bisection depth for any panel.
    pub max_refinements: u32,
    /// The integrand carries a `u^{-1/2}` factor at the origin.
    pub singularity_at_zero: bool,
    /// Truncation point in the original variable; found automatically if `None`.
    pub cutoff: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_refinements: 30,
            singularity_at_zero: false,
            cutoff: None,
        }
    }
}

impl QuadratureSpec {
    pub fn new(tolerance: f64, max_refinements: u32) -> Result<Self> {
        let spec = Self {
            tolerance,
            max_refinements,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn singular(mut self) -> Self {
        self.singularity_at_zero = true;
        self
    }

    pub fn with_cutoff(mut self, cutoff: f64) -> Self {
        self.cutoff = Some(cutoff);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "quadrature tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_refinements < 1 {
            return Err(Error::InvalidInput("max_refinements must be >= 1".into()));
        }
        if let Some(c) = self.cutoff {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "cutoff must be positive, got {c}"
                )));
            }
        }
        Ok(())
    }
}

/// Integrates `f` over `[0, inf)`.
///
/// With `singularity_at_zero` set, `sqrt(u) * f(u)` must stay bounded near the
/// origin; the integrand is never evaluated at `u = 0`.
///
/// Without a cutoff the tail search stops at the first doubling panel where
/// both the panel integral and the edge value are negligible, so an integrand
/// whose mass sits far from the origin needs an explicit cutoff.
pub fn integrate_half_line<F>(f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if spec.singularity_at_zero {
        let g = |t: f64| 2.0 * t * f(t * t);
        half_line_transformed(&g, spec.cutoff.map(f64::sqrt), spec)
    } else {
        half_line_transformed(&f, spec.cutoff, spec)
    }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidInput(format!(
            "need finite a < b, got [{a}, {b}]"
        )));
    }
    Ok(adaptive(&f, a, b, spec.tolerance, spec.max_refinements)?.0)
}

/// Smallest point beyond `start` where `log_bound` drops below `ln(tolerance / 10)`.
///
/// `log_bound` must be eventually decreasing past `start`; the search doubles
/// outward and then bisects.
pub fn decay_cutoff<F>(log_bound: F, start: f64, tolerance: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let target = (tolerance / 10.0).ln();
    let mut lo = start.max(f64::MIN_POSITIVE);
    let mut hi = lo.max(1.0);
    let mut doublings = 0;
    while log_bound(hi) >= target {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 1000 || !hi.is_finite() {
            return Err(Error::NonConvergence(
                "integrand bound does not decay below tolerance".into(),
            ));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if log_bound(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Ok(hi)
}

fn half_line_transformed<G>(g: &G, cutoff: Option<f64>, spec: &QuadratureSpec) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    let tol = spec.tolerance;
    if let Some(end) = cutoff {
        return Ok(adaptive(g, 0.0, end, 0.9 * tol, spec.max_refinements)?.0);
    }

    let mut total = adaptive(g, 0.0, 1.0, 0.25 * tol, spec.max_refinements)?.0;
    let mut lo = 1.0;
    for k in 1..MAX_TAIL_PANELS {
        let hi = 2.0 * lo;
        let budget = tol * 0.5f64.powi(k as i32 + 2);
        let piece = adaptive(g, lo, hi, budget, spec.max_refinements)?.0;
        total += piece;
        let edge = g(hi);
        if !edge.is_finite() {
            return Err(Error::InvalidInput(format!("integrand not finite at {hi}")));
        }
        if piece.abs() <= 0.1 * tol && edge.abs() * hi <= 0.1 * tol {
            return Ok(total);
        }
        lo = hi;
    }
    Err(Error::NonConvergence(format!(
        "integrand has not decayed by u = {lo:e}"
    )))
}

/// Upper bound on live panels in one adaptive integration.
const MAX_PANELS: usize = 200_000;

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq()
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive integration: the panel with the largest step-halving
/// error is bisected until the summed estimate is within `tol`.
///
/// Returns the integral and the final error estimate.
fn adaptive<F>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let h = (b - a) / INITIAL_PANELS as f64;
    let mut heap = BinaryHeap::with_capacity(4 * INITIAL_PANELS);
    let mut done_value = 0.0;
    let mut done_error = 0.0;
    let mut live_error = 0.0;
    for i in 0..INITIAL_PANELS {
        let lo = a + i as f64 * h;
        let hi = if i + 1 == INITIAL_PANELS { b } else { lo + h };
        let panel = evaluate(f, lo, hi, 0)?;
        live_error += panel.error;
        heap.push(panel);
    }

    loop {
        if live_error + done_error <= tol {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        live_error -= worst.error;
        let roundoff = 64.0 * f64::EPSILON * worst.value.abs() + f64::MIN_POSITIVE;
        if worst.error <= roundoff {
            done_value += worst.value;
            done_error += worst.error;
            continue;
        }
        if worst.depth + 1 >= max_depth || heap.len() >= MAX_PANELS {
            return Err(Error::NonConvergence(format!(
                "refinement budget of {max_depth} exhausted on [{}, {}] (error estimate {:e}, target {tol:e})",
                worst.a,
                worst.b,
                live_error + worst.error + done_error
            )));
        }
        let mid = 0.5 * (worst.a + worst.b);
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let panel = evaluate(f, lo, hi, worst.depth + 1)?;
            live_error += panel.error;
            heap.push(panel);
        }
    }

    let mut panels = heap.into_vec();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = done_value + panels.iter().map(|p| p.value).sum::<f64>();
    Ok((value, live_error.max(0.0) + done_error))
}

/// Whole-panel and two-half 10-point rules; keeps the finer value.
fn evaluate<F>(f: &F, a: f64, b: f64, depth: u32) -> Result<Panel>
where
    F: Fn(f64) -> f64,
{
    let mid = 0.5 * (a + b);
    let whole = gauss_legendre(f, a, b)?;
    let fine = gauss_legendre(f, a, mid)? + gauss_legendre(f, mid, b)?;
    Ok(Panel {
        a,
        b,
        value: fine,
        error: (fine - whole).abs(),
        depth,
    })
}

fn gauss_legendre<F>(f: &F, a: f64, b: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let mut sum = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
        let dx = half * x;
        let lo = f(center - dx);
        let hi = f(center + dx);
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "integrand is not finite near {center} (values {lo}, {hi})"
            )));
        }
        sum += w * (lo + hi);
    }
    Ok(sum * half)
}
