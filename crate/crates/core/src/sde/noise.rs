use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::coupling::MAX_DRIVERS;
use crate::error::{Error, Result};

/// Wiener increments for one step; entries past the coupling's driver count are unused.
pub type Increments = [f64; MAX_DRIVERS];

/// Reproducible source of Wiener increments for one trajectory.
///
/// `(seed, stream_id)` selects an independent ChaCha stream, so trajectories
/// can be generated in any order or in parallel with identical results.
#[derive(Debug, Clone)]
pub struct NoiseStream {
    seed: u64,
    stream_id: u64,
    dt: f64,
    sqrt_dt: f64,
    rng: ChaCha8Rng,
}

impl NoiseStream {
    pub fn new(seed: u64, stream_id: u64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "dt must be positive, got {dt}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Ok(Self {
            seed,
            stream_id,
            dt,
            sqrt_dt: dt.sqrt(),
            rng,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Next step's increments for `drivers` independent Wiener processes.
    pub fn increments(&mut self, drivers: usize) -> Increments {
        let mut dw = [0.0; MAX_DRIVERS];
        for slot in dw.iter_mut().take(drivers) {
            *slot = self.sqrt_dt * self.standard_normal();
        }
        dw
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Uniform draw on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        use rand::Rng;
        self.rng.random::<f64>()
    }
}
