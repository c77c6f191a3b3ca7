//! Brute-force references used by the tests and the `verify` command. They
//! rely only on elementary special functions and their own integration and
//! inversion code, never on the product evaluation paths.

mod mc;
mod pdf;
mod tanh_sinh;
mod verify;

pub use mc::{mc_moment_oracle, McMoments};
pub use pdf::{default_fft_halfwidth, pdf_fft_oracle, pdf_quadrature_oracle};
pub use tanh_sinh::{ln_integral_half_line, ln_integral_unit, Tolerance, UnitNode};
pub use verify::{verification_suite, OracleReport};
