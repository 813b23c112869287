//! Parameter sweeps, the critical curve, sweep presets and output.

mod config;
mod emit;
mod sweep;

pub use config::{
    load_config, parse_config, parse_grid, phase_diagram_spec, sigma_scan_spec, Config,
};
pub use emit::{emit, render, Emit, Format, CURVE_HEADER, SWEEP_HEADER};
pub use sweep::{
    bifurcation_curve, check_sign_structure, derive_seed, run_sweep, Crossing, CurvePoint,
    McSettings, RowError, SweepMode, SweepResult, SweepRow, SweepSpec,
};

/// Environment variable holding the worker count for parallel sweeps and ensembles.
pub const WORKERS_ENV: &str = "SHEARCHAOS_WORKERS";

/// Size the global rayon pool from [`WORKERS_ENV`], falling back to the
/// available parallelism. Has no effect once the pool exists.
pub fn init_worker_pool() -> crate::Result<usize> {
    let workers = match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                return Err(crate::Error::InvalidInput(format!(
                    "{WORKERS_ENV} must be a positive integer, got {v:?}"
                )))
            }
        },
        Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global();
    Ok(rayon::current_num_threads())
}
