use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use shearchaos::analytic::{find_c0, lyapunov_pair_with, DEFAULT_CLASSIFY_TOL};
use shearchaos::estimators::{
    fk_time_average, lambda1_from_density, mc_lyapunov, pullback_sample, stationary_density_fp,
    DensityGrid, DiameterSample, McConfig, PullbackConfig,
};
use shearchaos::harness::{
    bifurcation_curve, check_sign_structure, emit, init_worker_pool, load_config, parse_grid,
    phase_diagram_spec, render, run_sweep, sigma_scan_spec, Config, CurvePoint, Emit, Format,
    McSettings, SweepMode, SweepResult,
};
use shearchaos::sde::{simulate_trajectory, CylinderState, NoiseStream, DEFAULT_DT};
use shearchaos::{
    sigma0, CouplingKind, Error, Method, Parameters, PhaseCoupling, QuadratureSpec, RegimeKind,
    Result,
};

use crate::args::{Cli, Command, Output, Point, Sampling};

/// Flag values fall back to the config file, then to built-in defaults.
struct Resolver {
    cfg: Config,
}

impl Resolver {
    fn value<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match cli {
            Some(v) => Ok(Some(v)),
            None => self.cfg.parsed(key),
        }
    }

    fn or<T: FromStr>(&self, cli: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.value(cli, key)?.unwrap_or(default))
    }

    fn required<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.value(cli, key)?
            .ok_or_else(|| Error::InvalidInput(format!("--{} is required", key.replace('_', "-"))))
    }

    fn params(&self, p: &Point) -> Result<Parameters> {
        Parameters::new(
            self.required(p.alpha, "alpha")?,
            self.required(p.b, "b")?,
            self.required(p.sigma, "sigma")?,
        )
    }

    fn coupling(&self, s: &Sampling) -> Result<PhaseCoupling> {
        let kind: CouplingKind = self.or(
            s.coupling.as_deref().map(str::parse).transpose()?,
            "coupling",
            CouplingKind::Tent,
        )?;
        Ok(PhaseCoupling::new(kind))
    }

    fn mc(&self, s: &Sampling, horizon: f64, n_traj: usize) -> Result<McConfig> {
        Ok(McConfig {
            horizon: self.or(s.horizon, "t", horizon)?,
            dt: self.or(s.dt, "dt", DEFAULT_DT)?,
            n_traj: self.or(s.n_traj, "n_traj", n_traj)?,
            seed: self.or(s.seed, "seed", 0)?,
        })
    }

    fn output(&self, o: &Output) -> Result<(Option<PathBuf>, Format)> {
        let out = self.value(o.out.clone(), "out")?;
        let format = match self.value(o.format.clone(), "format")? {
            Some(f) => f.parse()?,
            None => out
                .as_deref()
                .and_then(Format::from_path)
                .unwrap_or(Format::Csv),
        };
        Ok((out, format))
    }

    /// `text` (default) or `json` for single-point summaries.
    fn text_or_json(&self, cli: Option<String>) -> Result<bool> {
        match self.value(cli, "format")?.as_deref() {
            None | Some("text") => Ok(false),
            Some("json") => Ok(true),
            Some(other) => Err(Error::InvalidInput(format!(
                "unknown format {other:?} (text, json)"
            ))),
        }
    }
}

fn write_artifact<T: Emit + ?Sized>(artifact: &T, target: (Option<PathBuf>, Format)) -> Result<()> {
    match target {
        (Some(path), format) => emit(artifact, format, &path),
        (None, format) => {
            print!("{}", render(artifact, format)?);
            Ok(())
        }
    }
}

fn json_line(value: serde_json::Value) -> String {
    format!(
        "{}\n",
        serde_json::to_string_pretty(&value).expect("json values serialize")
    )
}

pub fn run(cli: Cli) -> Result<()> {
    init_worker_pool()?;
    let cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => Config::default(),
    };
    let r = Resolver { cfg };
    match cli.command {
        Command::Lyapunov(a) => lyapunov(&r, &a.point, a.tol, a.format),
        Command::C0 { tol } => {
            let tol = r.or(tol, "tol", shearchaos::analytic::C0_TOLERANCE)?;
            let start = Instant::now();
            let c0 = find_c0(tol)?;
            println!("{c0}");
            eprintln!("c0 found in {:.3} s", start.elapsed().as_secs_f64());
            Ok(())
        }
        Command::Bifurcation(a) => {
            let grid = match r.value(a.alpha, "alpha")? {
                Some(g) => parse_grid(&g)?,
                None => parse_grid("0.25:3:0.05")?,
            };
            let curve: Vec<CurvePoint> = bifurcation_curve(&grid, r.or(a.b, "b", 2.0)?)?;
            write_artifact(curve.as_slice(), r.output(&a.output)?)
        }
        Command::Sweep(a) => sweep(&r, a),
        Command::Simulate(a) => simulate(&r, a),
        Command::Fp(a) => {
            let p = r.params(&a.point)?;
            let grid = stationary_density_fp(&p, r.or(a.n, "n", 2000)?)?;
            eprintln!(
                "lambda1 = {}  flux = {}  cells = {}",
                lambda1_from_density(&grid, &p),
                grid.flux,
                grid.len()
            );
            write_artifact(&grid, r.output(&a.output)?)
        }
        Command::Attractor(a) => attractor(&r, a),
        Command::Render(a) => {
            let text = std::fs::read_to_string(&a.input)?;
            let bad =
                |e: serde_json::Error| Error::InvalidInput(format!("{}: {e}", a.input.display()));
            let target = r.output(&a.output)?;
            match a.kind.as_str() {
                "sweep" => write_artifact(
                    &serde_json::from_str::<SweepResult>(&text).map_err(bad)?,
                    target,
                ),
                "curve" => write_artifact(
                    serde_json::from_str::<Vec<CurvePoint>>(&text)
                        .map_err(bad)?
                        .as_slice(),
                    target,
                ),
                "density" => write_artifact(
                    &serde_json::from_str::<DensityGrid>(&text).map_err(bad)?,
                    target,
                ),
                "diameter" => write_artifact(
                    serde_json::from_str::<Vec<DiameterSample>>(&text)
                        .map_err(bad)?
                        .as_slice(),
                    target,
                ),
                other => Err(Error::InvalidInput(format!(
                    "unknown kind {other:?} (sweep, curve, density, diameter)"
                ))),
            }
        }
    }
}

fn lyapunov(r: &Resolver, point: &Point, tol: Option<f64>, format: Option<String>) -> Result<()> {
    let p = r.params(point)?;
    let spec = QuadratureSpec::default().with_tolerance(r.or(tol, "tol", 1e-10)?);
    let pair = lyapunov_pair_with(&p, &spec)?;
    let regime = RegimeKind::from_lambda1(pair.lambda1, DEFAULT_CLASSIFY_TOL);
    let s0 = sigma0(p.alpha, p.b)?;
    if r.text_or_json(format)? {
        print!(
            "{}",
            json_line(serde_json::json!({
                "alpha": p.alpha, "b": p.b, "sigma": p.sigma,
                "lambda1": pair.lambda1, "lambda2": pair.lambda2,
                "regime": regime.as_str(), "sigma0": s0, "error": pair.error,
            }))
        );
    } else {
        println!("lambda1 = {}", pair.lambda1);
        println!("lambda2 = {}", pair.lambda2);
        println!("regime  = {}", regime.as_str());
        println!("sigma0  = {}", s0);
    }
    Ok(())
}

fn sweep(r: &Resolver, a: crate::args::SweepArgs) -> Result<()> {
    let preset = r.value(a.preset, "preset")?;
    let mut spec = match preset.as_deref() {
        None => sigma_scan_spec(2.0),
        Some("phase-diagram") => phase_diagram_spec(),
        Some("sigma-scan") => sigma_scan_spec(2.0),
        Some(other) => {
            return Err(Error::InvalidInput(format!(
                "unknown preset {other:?} (phase-diagram, sigma-scan)"
            )))
        }
    };
    if let Some(g) = r.value(a.alpha, "alpha")? {
        spec.alpha_grid = parse_grid(&g)?;
    }
    if let Some(g) = r.value(a.b, "b")? {
        spec.b_grid = parse_grid(&g)?;
    }
    if let Some(g) = r.value(a.sigma, "sigma")? {
        spec.sigma_grid = parse_grid(&g)?;
    }
    spec.mode = r.or(
        a.mode.as_deref().map(SweepMode::from_str).transpose()?,
        "mode",
        spec.mode,
    )?;
    spec.classify_tol = r.or(a.tol, "tol", spec.classify_tol)?;
    let mc = r.mc(
        &a.sampling,
        McSettings::default().horizon,
        McSettings::default().n_traj,
    )?;
    spec.seed = mc.seed;
    spec.mc = McSettings {
        horizon: mc.horizon,
        dt: mc.dt,
        n_traj: mc.n_traj,
        coupling: r.coupling(&a.sampling)?,
    };
    let (out, format) = r.output(&a.output)?;
    spec.output_path = out.clone();

    let start = Instant::now();
    let result = run_sweep(&spec)?;
    let failed = result
        .rows
        .iter()
        .filter(|row| row.error.is_failure())
        .count();
    let method = if spec.mode == SweepMode::MonteCarlo {
        Method::MonteCarlo
    } else {
        Method::Quadrature
    };
    eprintln!(
        "{} rows ({} failed), {} sign change(s), {:.2} s",
        result.rows.len(),
        failed,
        result.crossings(method).len(),
        start.elapsed().as_secs_f64()
    );
    for (alpha, b) in check_sign_structure(&result) {
        eprintln!("warning: sign pattern broken in slice alpha={alpha}, b={b}");
    }
    write_artifact(&result, (out, format))
}

fn simulate(r: &Resolver, a: crate::args::SimulateArgs) -> Result<()> {
    let p = r.params(&a.point)?;
    let c = r.coupling(&a.sampling)?;
    let cfg = r.mc(&a.sampling, 200.0, 16)?;
    let which = r.or(a.estimator, "estimator", "both".to_string())?;
    let (run_mc, run_fk) = match which.as_str() {
        "mc" => (true, false),
        "fk" => (false, true),
        "both" => (true, true),
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown estimator {other:?} (mc, fk, both)"
            )))
        }
    };
    let json = r.text_or_json(a.format)?;
    let mut report = serde_json::Map::new();
    let mut text = String::new();
    if run_mc {
        let est = mc_lyapunov(&p, &c, &cfg)?;
        report.insert(
            "monte_carlo".into(),
            serde_json::json!({
                "lambda1": est.lambda1.value, "lambda1_stderr": est.lambda1.stderr,
                "lambda2": est.lambda2(), "sum": est.sum12.value, "sum_stderr": est.sum12.stderr,
            }),
        );
        let _ = writeln!(
            text,
            "mc lambda1 = {} +- {}",
            est.lambda1.value, est.lambda1.stderr
        );
        let _ = writeln!(text, "mc lambda2 = {}", est.lambda2());
        let _ = writeln!(
            text,
            "mc lambda1 + lambda2 = {} +- {}",
            est.sum12.value, est.sum12.stderr
        );
        if est.lambda1.insufficient_horizon() {
            eprintln!("warning: standard error exceeds |lambda1|; increase --T or --n-traj");
        }
    }
    if run_fk {
        let est = fk_time_average(&p, &c, &cfg)?;
        report.insert(
            "time_average".into(),
            serde_json::json!({
                "lambda1": est.value, "lambda1_stderr": est.stderr,
            }),
        );
        let _ = writeln!(text, "fk lambda1 = {} +- {}", est.value, est.stderr);
    }
    if let Ok(pair) = shearchaos::lyapunov_pair(&p) {
        report.insert(
            "quadrature".into(),
            serde_json::json!({ "lambda1": pair.lambda1, "lambda2": pair.lambda2 }),
        );
        let _ = writeln!(text, "quadrature lambda1 = {}", pair.lambda1);
    }
    if json {
        print!("{}", json_line(serde_json::Value::Object(report)));
    } else {
        print!("{text}");
    }
    if let Some(path) = a.trajectory {
        let every = r.or(a.sample_every, "sample_every", 100)?;
        let mut noise = NoiseStream::new(cfg.seed, 0, cfg.dt)?;
        let start = CylinderState::new(0.0, 0.0)?.with_tangent([1.0, 0.0])?;
        let records = simulate_trajectory(&p, &c, start, cfg.horizon, &mut noise, every)?;
        emit(records.as_slice(), Format::Csv, &path)?;
    }
    Ok(())
}

fn attractor(r: &Resolver, a: crate::args::AttractorArgs) -> Result<()> {
    let p = r.params(&a.point)?;
    let c = r.coupling(&a.sampling)?;
    let cfg = PullbackConfig {
        n_points: r.or(a.n_points, "n_points", 200)?,
        horizon: r.or(a.sampling.horizon, "t", 200.0)?,
        dt: r.or(a.sampling.dt, "dt", DEFAULT_DT)?,
        seed: r.or(a.sampling.seed, "seed", 0)?,
        sample_every: r.or(a.sample_every, "sample_every", 100)?,
    };
    let result = pullback_sample(&p, &c, &cfg)?;
    let last = result.diameters.last().map_or(0.0, |d| d.diameter);
    eprintln!("final diameter = {last:e} after t = {}", cfg.horizon);
    if let Some(path) = a.points {
        write_points(&path, &result.points)?;
    }
    write_artifact(result.diameters.as_slice(), r.output(&a.output)?)
}

fn write_points(path: &Path, points: &[CylinderState]) -> Result<()> {
    let mut s = String::from("y,theta\n");
    for q in points {
        let _ = writeln!(s, "{},{}", q.y, q.theta);
    }
    std::fs::write(path, s)?;
    Ok(())
}
