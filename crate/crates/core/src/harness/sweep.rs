use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use crate::analytic::{
    lyapunov_pair, sigma0, Method, Parameters, RegimeKind, DEFAULT_CLASSIFY_TOL,
};
use crate::error::{Error, Result};
use crate::estimators::{mc_lyapunov, McConfig};
use crate::sde::{PhaseCoupling, DEFAULT_DT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepMode {
    Analytic,
    MonteCarlo,
    Both,
}

impl std::str::FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "analytic" => Ok(SweepMode::Analytic),
            "montecarlo" | "monte-carlo" | "mc" => Ok(SweepMode::MonteCarlo),
            "both" => Ok(SweepMode::Both),
            _ => Err(Error::InvalidInput(format!("unknown sweep mode {s:?}"))),
        }
    }
}

/// Monte Carlo budget per grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSettings {
    pub horizon: f64,
    pub dt: f64,
    pub n_traj: usize,
    pub coupling: PhaseCoupling,
}

impl Default for McSettings {
    fn default() -> Self {
        Self {
            horizon: 200.0,
            dt: DEFAULT_DT,
            n_traj: 16,
            coupling: PhaseCoupling::tent(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub alpha_grid: Vec<f64>,
    pub b_grid: Vec<f64>,
    pub sigma_grid: Vec<f64>,
    pub mode: SweepMode,
    /// Where a caller should write the result; [`run_sweep`] itself never writes.
    pub output_path: Option<PathBuf>,
    pub seed: u64,
    pub mc: McSettings,
    /// `|lambda_1|` at or below this is classified critical (analytic rows).
    pub classify_tol: f64,
}

impl SweepSpec {
    pub fn new(
        alpha_grid: Vec<f64>,
        b_grid: Vec<f64>,
        sigma_grid: Vec<f64>,
        mode: SweepMode,
    ) -> Self {
        Self {
            alpha_grid,
            b_grid,
            sigma_grid,
            mode,
            output_path: None,
            seed: 0,
            mc: McSettings::default(),
            classify_tol: DEFAULT_CLASSIFY_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, grid) in [
            ("alpha", &self.alpha_grid),
            ("b", &self.b_grid),
            ("sigma", &self.sigma_grid),
        ] {
            if grid.is_empty() {
                return Err(Error::InvalidInput(format!("{name} grid is empty")));
            }
            if grid.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "{name} grid has non-finite values"
                )));
            }
            if grid.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidInput(format!(
                    "{name} grid must be strictly increasing"
                )));
            }
        }
        if self.alpha_grid[0] <= 0.0 {
            return Err(Error::InvalidInput("every alpha must be positive".into()));
        }
        if self.sigma_grid[0] < 0.0 {
            return Err(Error::InvalidInput(
                "every sigma must be nonnegative".into(),
            ));
        }
        if !(self.classify_tol >= 0.0) {
            return Err(Error::InvalidInput(
                "classification tolerance must be nonnegative".into(),
            ));
        }
        if self.mode != SweepMode::Analytic {
            McConfig {
                horizon: self.mc.horizon,
                dt: self.mc.dt,
                n_traj: self.mc.n_traj,
                seed: self.seed,
            }
            .validate(&Parameters::new(self.alpha_grid[0], 0.0, 0.0)?)?;
        }
        Ok(())
    }
}

/// The `error` column: an error estimate for a successful row, otherwise the
/// failure kind and message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RowError {
    Estimate(f64),
    Failure(String),
}

impl RowError {
    fn failure(e: &Error) -> Self {
        RowError::Failure(format!("{}: {e}", e.kind()))
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, RowError::Failure(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub b: f64,
    pub sigma: f64,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub regime: Option<RegimeKind>,
    pub sigma0: Option<f64>,
    pub method: Method,
    pub error: RowError,
}

/// A sign change of `lambda_1` between two neighbouring sigma grid points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub alpha: f64,
    pub b: f64,
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    /// Linear interpolation of the zero.
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub alpha: f64,
    pub sigma0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Rows of one method grouped into `(alpha, b)` slices, each ordered by sigma.
    pub fn slices(&self, method: Method) -> Vec<Vec<&SweepRow>> {
        let mut out: Vec<Vec<&SweepRow>> = Vec::new();
        for row in self.rows.iter().filter(|r| r.method == method) {
            match out.last_mut() {
                Some(s) if s[0].alpha == row.alpha && s[0].b == row.b => s.push(row),
                _ => out.push(vec![row]),
            }
        }
        out
    }

    /// Sign changes of `lambda_1` along sigma in every slice, skipping failed rows.
    pub fn crossings(&self, method: Method) -> Vec<Crossing> {
        let mut out = Vec::new();
        for slice in self.slices(method) {
            let pts: Vec<(f64, f64)> = slice
                .iter()
                .filter_map(|r| r.lambda1.map(|l| (r.sigma, l)))
                .collect();
            for w in pts.windows(2) {
                let ((s0, l0), (s1, l1)) = (w[0], w[1]);
                if l0 == 0.0 || (l0 < 0.0) != (l1 < 0.0) {
                    let sigma = if l0 == l1 {
                        s0
                    } else {
                        s0 + (s1 - s0) * l0 / (l0 - l1)
                    };
                    out.push(Crossing {
                        alpha: slice[0].alpha,
                        b: slice[0].b,
                        sigma_lo: s0,
                        sigma_hi: s1,
                        sigma,
                    });
                }
            }
        }
        out
    }
}

/// Mixes a base seed with grid indices (splitmix64 finalizer per word) so each
/// point gets an independent seed regardless of evaluation order.
pub fn derive_seed(seed: u64, alpha_index: usize, b_index: usize, sigma_index: usize) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    [alpha_index, b_index, sigma_index]
        .iter()
        .fold(mix(seed), |h, &i| mix(h ^ i as u64))
}

fn base_row(p: &Parameters, method: Method) -> SweepRow {
    SweepRow {
        alpha: p.alpha,
        b: p.b,
        sigma: p.sigma,
        lambda1: None,
        lambda2: None,
        regime: None,
        sigma0: sigma0(p.alpha, p.b).ok(),
        method,
        error: RowError::Failure(String::new()),
    }
}

fn analytic_row(p: &Parameters, tol: f64) -> SweepRow {
    let mut row = base_row(p, Method::Quadrature);
    match lyapunov_pair(p) {
        Ok(pair) => {
            row.lambda1 = Some(pair.lambda1);
            row.lambda2 = Some(pair.lambda2);
            row.regime = Some(RegimeKind::from_lambda1(pair.lambda1, tol));
            row.error = RowError::Estimate(pair.error);
        }
        Err(e) => row.error = RowError::failure(&e),
    }
    row
}

/// Monte Carlo row. Degenerate points are reported as such even though the
/// simulation itself is well defined there, so both methods mark the same rows.
fn mc_row(p: &Parameters, mc: &McSettings, seed: u64) -> SweepRow {
    let mut row = base_row(p, Method::MonteCarlo);
    if p.effective_noise() == 0.0 {
        row.error = RowError::failure(&Error::DegenerateNoise {
            alpha: p.alpha,
            b: p.b,
            sigma: p.sigma,
        });
        return row;
    }
    let cfg = McConfig {
        horizon: mc.horizon,
        dt: mc.dt,
        n_traj: mc.n_traj,
        seed,
    };
    match mc_lyapunov(p, &mc.coupling, &cfg) {
        Ok(est) => {
            row.lambda1 = Some(est.lambda1.value);
            row.lambda2 = Some(est.lambda2());
            // within three standard errors of zero counts as critical
            row.regime = Some(RegimeKind::from_lambda1(
                est.lambda1.value,
                3.0 * est.lambda1.stderr,
            ));
            row.error = RowError::Estimate(est.lambda1.stderr);
        }
        Err(e) => row.error = RowError::failure(&e),
    }
    row
}

/// Evaluate the requested methods on the full grid.
///
/// Rows come out in lexicographic `(alpha, b, sigma)` order with the
/// quadrature row before the Monte Carlo row. Per-point failures land in the
/// `error` column instead of aborting the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let mut points = Vec::new();
    for (ai, &alpha) in spec.alpha_grid.iter().enumerate() {
        for (bi, &b) in spec.b_grid.iter().enumerate() {
            for (si, &sigma) in spec.sigma_grid.iter().enumerate() {
                points.push((
                    Parameters { alpha, b, sigma },
                    derive_seed(spec.seed, ai, bi, si),
                ));
            }
        }
    }
    let per_point: Vec<Vec<SweepRow>> = points
        .par_iter()
        .map(|(p, seed)| {
            let mut rows = Vec::with_capacity(2);
            if spec.mode != SweepMode::MonteCarlo {
                rows.push(analytic_row(p, spec.classify_tol));
            }
            if spec.mode != SweepMode::Analytic {
                rows.push(mc_row(p, &spec.mc, *seed));
            }
            rows
        })
        .collect();
    Ok(SweepResult {
        rows: per_point.into_iter().flatten().collect(),
    })
}

/// `sigma0(alpha, b)` along an alpha grid.
pub fn bifurcation_curve(alpha_grid: &[f64], b: f64) -> Result<Vec<CurvePoint>> {
    alpha_grid
        .iter()
        .map(|&alpha| {
            Ok(CurvePoint {
                alpha,
                sigma0: sigma0(alpha, b)?,
            })
        })
        .collect()
}

/// Checks that every quadrature slice reads `(-)* 0? (+)*` along sigma.
///
/// Returns the `(alpha, b)` slices that break the pattern; failed rows are skipped.
pub fn check_sign_structure(result: &SweepResult) -> Vec<(f64, f64)> {
    let mut bad = Vec::new();
    for slice in result.slices(Method::Quadrature) {
        // 0 = negative, 1 = critical, 2 = positive; must be nondecreasing with at most one critical
        let ranks: Vec<u8> = slice
            .iter()
            .filter_map(|r| r.regime)
            .map(|k| match k {
                RegimeKind::RandomEquilibrium => 0,
                RegimeKind::Critical => 1,
                RegimeKind::RandomStrangeAttractor => 2,
            })
            .collect();
        let monotone = ranks.windows(2).all(|w| w[0] <= w[1]);
        let zeros = ranks.iter().filter(|&&r| r == 1).count();
        if !monotone || zeros > 1 {
            bad.push((slice[0].alpha, slice[0].b));
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(start: f64, step: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| start + step * i as f64).collect()
    }

    #[test]
    fn one_crossing_brackets_sigma0() {
        let spec = SweepSpec::new(
            vec![1.0],
            vec![2.0],
            grid(0.2, 0.2, 10),
            SweepMode::Analytic,
        );
        let r = run_sweep(&spec).unwrap();
        assert_eq!(r.rows.len(), 10);
        let c = r.crossings(Method::Quadrature);
        assert_eq!(c.len(), 1);
        let s0 = sigma0(1.0, 2.0).unwrap();
        assert!(c[0].sigma_lo < s0 && s0 < c[0].sigma_hi);
        assert!(check_sign_structure(&r).is_empty());
    }

    #[test]
    fn degenerate_rows_are_marked_not_fatal() {
        let spec = SweepSpec::new(
            vec![1.0],
            vec![0.0, 2.0],
            vec![0.0, 1.0],
            SweepMode::Analytic,
        );
        let r = run_sweep(&spec).unwrap();
        let failed: Vec<_> = r.rows.iter().filter(|r| r.error.is_failure()).collect();
        assert_eq!(failed.len(), 3);
        for row in failed {
            assert!(row.lambda1.is_none());
            match &row.error {
                RowError::Failure(msg) => assert!(msg.starts_with("DegenerateNoise"), "{msg}"),
                _ => unreachable!(),
            }
        }
        assert!(r.rows[0].sigma0.is_none());
        assert!(r.rows[3].lambda1.is_some());
    }

    #[test]
    fn rows_are_lexicographic() {
        let spec = SweepSpec::new(
            vec![0.5, 1.0],
            vec![-2.0, 2.0],
            vec![0.5, 1.5],
            SweepMode::Analytic,
        );
        let r = run_sweep(&spec).unwrap();
        let keys: Vec<_> = r.rows.iter().map(|r| (r.alpha, r.b, r.sigma)).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(keys, sorted);
    }

    #[test]
    fn invalid_specs() {
        let ok = SweepSpec::new(vec![1.0], vec![2.0], vec![1.0], SweepMode::Analytic);
        assert!(ok.validate().is_ok());
        for bad in [
            SweepSpec {
                alpha_grid: vec![],
                ..ok.clone()
            },
            SweepSpec {
                alpha_grid: vec![0.0, 1.0],
                ..ok.clone()
            },
            SweepSpec {
                sigma_grid: vec![1.0, 1.0],
                ..ok.clone()
            },
            SweepSpec {
                b_grid: vec![f64::NAN],
                ..ok.clone()
            },
            SweepSpec {
                mode: SweepMode::MonteCarlo,
                mc: McSettings {
                    n_traj: 1,
                    ..McSettings::default()
                },
                ..ok.clone()
            },
        ] {
            assert!(
                matches!(run_sweep(&bad), Err(Error::InvalidInput(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn seeds_depend_on_every_index() {
        let s = derive_seed(7, 1, 2, 3);
        assert_eq!(s, derive_seed(7, 1, 2, 3));
        for other in [
            derive_seed(8, 1, 2, 3),
            derive_seed(7, 2, 1, 3),
            derive_seed(7, 1, 3, 2),
            derive_seed(7, 1, 2, 4),
        ] {
            assert_ne!(s, other);
        }
    }

    #[test]
    fn sign_structure_flags_violations() {
        let row = |sigma: f64, k: RegimeKind| SweepRow {
            alpha: 1.0,
            b: 2.0,
            sigma,
            lambda1: Some(0.0),
            lambda2: Some(-1.0),
            regime: Some(k),
            sigma0: None,
            method: Method::Quadrature,
            error: RowError::Estimate(0.0),
        };
        use RegimeKind::*;
        let good = SweepResult {
            rows: vec![
                row(1.0, RandomEquilibrium),
                row(2.0, Critical),
                row(3.0, RandomStrangeAttractor),
            ],
        };
        assert!(check_sign_structure(&good).is_empty());
        let flipped = SweepResult {
            rows: vec![
                row(1.0, RandomStrangeAttractor),
                row(2.0, RandomEquilibrium),
            ],
        };
        assert_eq!(check_sign_structure(&flipped), vec![(1.0, 2.0)]);
        let two_zeros = SweepResult {
            rows: vec![row(1.0, Critical), row(2.0, Critical)],
        };
        assert_eq!(check_sign_structure(&two_zeros).len(), 1);
    }

    #[test]
    fn curve_power_law() {
        let c = bifurcation_curve(&[0.5, 1.0, 2.0], 2.0).unwrap();
        assert!((c[0].sigma0 / c[1].sigma0 - 0.5f64.powf(1.5)).abs() < 1e-14);
        assert!((c[2].sigma0 / c[1].sigma0 - 2f64.powf(1.5)).abs() < 1e-14);
        let half = bifurcation_curve(&[0.5, 1.0, 2.0], 4.0).unwrap();
        for (a, b) in c.iter().zip(&half) {
            assert!((a.sigma0 - 2.0 * b.sigma0).abs() < 1e-15);
        }
        assert!(matches!(
            bifurcation_curve(&[-1.0], 2.0),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            bifurcation_curve(&[1.0], 0.0),
            Err(Error::InvalidInput(_))
        ));
    }
}
