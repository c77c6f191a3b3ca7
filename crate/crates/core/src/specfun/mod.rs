//! Special-function kernel.
//!
//! Everything here works on real arguments in `f64` and returns either a
//! finite value or a typed [`Error`](crate::Error).

mod bessel;
mod expint;
mod gamma;
mod kummer;
mod whittaker;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bessel::{bessel_k, bessel_k_scaled, ln_bessel_k};
pub use expint::exp_integral_e1;
pub use gamma::{
    gamma, ln_gamma, recip_gamma, reg_incomplete_gamma_pair, reg_lower_incomplete_gamma,
    reg_upper_incomplete_gamma,
};
pub(crate) use gamma::ln_gamma_unchecked;
pub use kummer::{kummer_phi, kummer_phi_with};
pub use whittaker::{
    ln_whittaker_w, ln_whittaker_w_with, whittaker_m, whittaker_w, whittaker_w_asymptotic, whittaker_w_quadrature,
    whittaker_w_via_m, whittaker_w_with,
};
pub(crate) use whittaker::ln_shifted_gamma_integral;

/// Euler–Mascheroni constant, 20 significant digits.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// Accuracy and strategy knobs shared by the special functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPolicy {
    /// Target relative accuracy of series and quadratures.
    pub rel_tol: f64,
    /// Cap on the number of series terms.
    pub max_terms: usize,
    /// Absolute tolerance of quadratures on their (rescaled) integrands.
    pub quad_abs_tol: f64,
    /// Whittaker arguments above this use the large-`z` expansion.
    pub asymptotic_switch_z: f64,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        EvalPolicy { rel_tol: 1e-12, max_terms: 500, quad_abs_tol: 1e-15, asymptotic_switch_z: 50.0 }
    }
}

impl EvalPolicy {
    pub fn new(rel_tol: f64, max_terms: usize, quad_abs_tol: f64, asymptotic_switch_z: f64) -> Result<Self> {
        let p = EvalPolicy { rel_tol, max_terms, quad_abs_tol, asymptotic_switch_z };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        const FUNC: &str = "EvalPolicy";
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-3) {
            return Err(Error::domain(FUNC, format!("rel_tol must lie in (0, 1e-3), got {}", self.rel_tol)));
        }
        if self.max_terms < 100 {
            return Err(Error::domain(FUNC, format!("max_terms must be at least 100, got {}", self.max_terms)));
        }
        if !(self.quad_abs_tol > 0.0 && self.quad_abs_tol.is_finite()) {
            return Err(Error::domain(FUNC, format!("quad_abs_tol must be positive, got {}", self.quad_abs_tol)));
        }
        if !(self.asymptotic_switch_z > 0.0) {
            return Err(Error::domain(
                FUNC,
                format!("asymptotic_switch_z must be positive, got {}", self.asymptotic_switch_z),
            ));
        }
        Ok(())
    }

    pub(crate) fn quad_options(&self) -> crate::quad::QuadOptions {
        crate::quad::QuadOptions { abs_tol: self.quad_abs_tol, rel_tol: self.rel_tol, max_subdivisions: 4000 }
    }
}
