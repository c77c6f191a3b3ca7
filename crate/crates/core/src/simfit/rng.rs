use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::params::BgParams;

/// Seeded random stream. Equal seeds give bit-identical streams.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        RngState { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform on `(0, 1]`.
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.rng.random::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Independent child stream derived from this one.
    pub fn fork(&mut self) -> RngState {
        RngState::new(self.rng.random())
    }
}

/// Marsaglia–Tsang squeeze for shape `a >= 1`, unit rate.
fn gamma_unit_ge1(a: f64, rng: &mut RngState) -> f64 {
    let d = a - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = rng.normal();
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = rng.uniform_open0();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// `Gamma(shape, rate)` variate. Shapes below 1 use `G(a) = G(a + 1) U^{1/a}`.
pub fn gamma_variate(shape: f64, rate: f64, rng: &mut RngState) -> Result<f64> {
    if !(shape > 0.0 && shape.is_finite() && rate > 0.0 && rate.is_finite()) {
        return Err(Error::domain("gamma_variate", format!("shape and rate must be positive, got ({shape}, {rate})")));
    }
    let g = if shape < 1.0 {
        let g1 = gamma_unit_ge1(shape + 1.0, rng);
        let u = rng.uniform_open0();
        (g1.ln() + u.ln() / shape).exp().max(f64::MIN_POSITIVE)
    } else {
        gamma_unit_ge1(shape, rng)
    };
    Ok(g / rate)
}

/// `n` independent draws of `X - Y`.
pub fn sample(p: &BgParams, n: usize, rng: &mut RngState) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let x = gamma_variate(p.alpha_plus(), p.lambda_plus(), rng).expect("validated parameters");
            let y = gamma_variate(p.alpha_minus(), p.lambda_minus(), rng).expect("validated parameters");
            x - y
        })
        .collect()
}
