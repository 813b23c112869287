use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::analytic::{q_integrand, Parameters};
use crate::error::{Error, Result};
use crate::sde::step::angle_drift;

/// CSV header for a density dump.
pub const DENSITY_HEADER: &str = "phi,p";

/// Smallest grid accepted by [`stationary_density_fp`].
pub const MIN_CELLS: usize = 200;

const MAX_INVERSE_ITERATIONS: usize = 60;
const RESIDUAL_TOL: f64 = 1e-9;

/// Cell-centred density on the projective circle `[0, pi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    /// Nodes at `(k + 1/2) h`, `h = pi / n`.
    pub phi: Vec<f64>,
    /// Normalized so that `h * sum(p) = 1`.
    pub p: Vec<f64>,
    /// Net probability current around the circle. Constant in the stationary state.
    pub flux: f64,
}

impl DensityGrid {
    pub fn uniform(n: usize) -> Self {
        let h = PI / n as f64;
        Self {
            phi: (0..n).map(|k| (k as f64 + 0.5) * h).collect(),
            p: vec![1.0 / PI; n],
            flux: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        PI / self.p.len() as f64
    }

    /// Midpoint-rule mass `h * sum(p)`.
    pub fn mass(&self) -> f64 {
        self.spacing() * self.p.iter().sum::<f64>()
    }
}

/// Bernoulli function `x / (e^x - 1)`.
fn bernoulli(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        1.0 - 0.5 * x + x * x / 12.0
    } else if x > 700.0 {
        x * (-x).exp()
    } else {
        x / x.exp_m1()
    }
}

/// Scharfetter–Gummel transition rates across the face at `phi`.
///
/// The flux `J = a p - D p'` becomes `fwd * p_left - bwd * p_right`. Where
/// the diffusion vanishes the scheme reduces to pure upwinding.
fn face_rates(phi: f64, p: &Parameters, h: f64) -> (f64, f64) {
    let (s, c) = phi.sin_cos();
    let s2 = s * s;
    let sig2 = p.sigma * p.sigma;
    let a = angle_drift(phi, p) - sig2 * s2 * s * c;
    let d = 0.5 * sig2 * s2 * s2;
    if d == 0.0 {
        return (a.max(0.0), (-a).max(0.0));
    }
    let pe = a * h / d;
    (d / h * bernoulli(-pe), d / h * bernoulli(pe))
}

/// Tridiagonal factorization (no pivoting) reused across right-hand sides.
struct Thomas {
    sub: Vec<f64>,
    sup_mod: Vec<f64>,
    pivot: Vec<f64>,
}

impl Thomas {
    fn factor(sub: &[f64], diag: &[f64], sup: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut sup_mod = vec![0.0; n];
        let mut pivot = vec![0.0; n];
        pivot[0] = diag[0];
        for k in 1..n {
            if pivot[k - 1] == 0.0 {
                return Err(Error::SingularDiscretization(format!(
                    "zero pivot at row {}",
                    k - 1
                )));
            }
            sup_mod[k - 1] = sup[k - 1] / pivot[k - 1];
            pivot[k] = diag[k] - sub[k] * sup_mod[k - 1];
        }
        if pivot[n - 1] == 0.0 {
            return Err(Error::SingularDiscretization("zero final pivot".into()));
        }
        Ok(Self {
            sub: sub.to_vec(),
            sup_mod,
            pivot,
        })
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut x = vec![0.0; n];
        x[0] = rhs[0] / self.pivot[0];
        for k in 1..n {
            x[k] = (rhs[k] - self.sub[k] * x[k - 1]) / self.pivot[k];
        }
        for k in (0..n - 1).rev() {
            x[k] -= self.sup_mod[k] * x[k + 1];
        }
        x
    }
}

/// Periodic tridiagonal solver via the Sherman–Morrison correction.
struct Cyclic {
    inner: Thomas,
    z: Vec<f64>,
    gamma: f64,
    top_right: f64,
}

impl Cyclic {
    /// `top_right = A[0][n-1]`, `bottom_left = A[n-1][0]`.
    fn factor(
        sub: &[f64],
        diag: &[f64],
        sup: &[f64],
        top_right: f64,
        bottom_left: f64,
    ) -> Result<Self> {
        let n = diag.len();
        let gamma = -diag[0];
        let mut d = diag.to_vec();
        d[0] -= gamma;
        d[n - 1] -= bottom_left * top_right / gamma;
        let inner = Thomas::factor(sub, &d, sup)?;
        let mut u = vec![0.0; n];
        u[0] = gamma;
        u[n - 1] = bottom_left;
        let z = inner.solve(&u);
        Ok(Self {
            inner,
            z,
            gamma,
            top_right,
        })
    }

    fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = rhs.len();
        let mut x = self.inner.solve(rhs);
        let denom = 1.0 + self.z[0] + self.top_right * self.z[n - 1] / self.gamma;
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::SingularDiscretization(
                "Sherman–Morrison denominator vanished".into(),
            ));
        }
        let fact = (x[0] + self.top_right * x[n - 1] / self.gamma) / denom;
        for (xi, zi) in x.iter_mut().zip(&self.z) {
            *xi -= fact * zi;
        }
        Ok(x)
    }
}

/// Stationary density of the projective angle process by finite volumes.
///
/// Scharfetter–Gummel fluxes on `n` periodic cells give a generator `Q`
/// whose null vector is found by shifted inverse iteration.
///
/// # Errors
/// `InvalidInput` for `n < 200`, `DegenerateNoise` for `sigma = 0`, and
/// `SingularDiscretization` when the discrete chain is not irreducible
/// (e.g. `b = 0`, where the flow has absorbing directions).
pub fn stationary_density_fp(p: &Parameters, n: usize) -> Result<DensityGrid> {
    p.validate()?;
    if n < MIN_CELLS {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_CELLS} cells, got {n}"
        )));
    }
    if p.sigma == 0.0 {
        return Err(Error::DegenerateNoise {
            alpha: p.alpha,
            b: p.b,
            sigma: p.sigma,
        });
    }
    let h = PI / n as f64;
    // Face k sits between cell k and cell k+1 (cyclically).
    let (fwd, bwd): (Vec<f64>, Vec<f64>) =
        (0..n).map(|k| face_rates((k + 1) as f64 * h, p, h)).unzip();

    let scale = fwd.iter().chain(&bwd).fold(0.0f64, |m, &r| m.max(r));
    let floor = 1e-12 * scale;
    let forward_ring = fwd.iter().all(|&r| r > floor);
    let backward_ring = bwd.iter().all(|&r| r > floor);
    if scale == 0.0 || !(forward_ring || backward_ring) {
        return Err(Error::SingularDiscretization(format!(
            "transition graph is not strongly connected at alpha={}, b={}, sigma={}",
            p.alpha, p.b, p.sigma
        )));
    }

    // (Q p)_k = fwd[k-1] p[k-1] + bwd[k] p[k+1] - (fwd[k] + bwd[k-1]) p[k]
    let prev = |k: usize| (k + n - 1) % n;
    let sub: Vec<f64> = (0..n).map(|k| fwd[prev(k)]).collect();
    let sup: Vec<f64> = bwd.clone();
    let diag: Vec<f64> = (0..n).map(|k| -(fwd[k] + bwd[prev(k)])).collect();

    // Q - mu I with a tiny positive shift: the null vector dominates and the
    // shifted matrix stays diagonally dominant.
    let mu = 1e-9 * diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let shifted: Vec<f64> = diag.iter().map(|d| d - mu).collect();
    let solver = Cyclic::factor(&sub, &shifted, &sup, sub[0], sup[n - 1])?;

    let apply = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|k| sub[k] * x[prev(k)] + diag[k] * x[k] + sup[k] * x[(k + 1) % n])
            .collect()
    };

    let mut x = vec![1.0 / PI; n];
    let mut converged = false;
    for _ in 0..MAX_INVERSE_ITERATIONS {
        let mut next = solver.solve(&x)?;
        let mass = h * next.iter().sum::<f64>();
        if !(mass.is_finite() && mass != 0.0) {
            return Err(Error::SingularDiscretization(
                "inverse iteration lost mass".into(),
            ));
        }
        next.iter_mut().for_each(|v| *v /= mass);
        let change = next
            .iter()
            .zip(&x)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let peak = next.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        x = next;
        if change <= 1e-13 * peak {
            converged = true;
            break;
        }
    }
    let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let residual = apply(&x).iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let max_diag = diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if !converged && residual > RESIDUAL_TOL * max_diag * peak {
        return Err(Error::SingularDiscretization(format!(
            "inverse iteration stalled, residual {residual:e}"
        )));
    }
    // Round-off can leave tiny negative values where the density vanishes.
    x.iter_mut().for_each(|v| *v = v.max(0.0));
    let mass = h * x.iter().sum::<f64>();
    x.iter_mut().for_each(|v| *v /= mass);

    let flux = (0..n)
        .map(|k| fwd[k] * x[k] - bwd[k] * x[(k + 1) % n])
        .sum::<f64>()
        / n as f64;
    Ok(DensityGrid {
        phi: (0..n).map(|k| (k as f64 + 0.5) * h).collect(),
        p: x,
        flux,
    })
}

/// `lambda_1 = int q(phi) p(phi) dphi` by the midpoint rule on the grid.
pub fn lambda1_from_density(grid: &DensityGrid, p: &Parameters) -> f64 {
    let h = grid.spacing();
    grid.phi
        .iter()
        .zip(&grid.p)
        .map(|(&phi, &w)| q_integrand(phi, p) * w)
        .sum::<f64>()
        * h
}
