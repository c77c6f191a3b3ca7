//! Numerics for the four-parameter bilateral Gamma family.
//!
//! A bilateral Gamma law is the distribution of `X - Y` for independent
//! `X ~ Gamma(alpha_plus, lambda_plus)` and `Y ~ Gamma(alpha_minus, lambda_minus)`
//! (shape/rate parametrization). The crate is organised as:
//!
//! | module | contents |
//! |---|---|
//! | [`specfun`] | log-gamma, incomplete gamma, `E1`, Kummer `Φ`, Whittaker `W`, Bessel `K` |
//! | [`quad`] | adaptive Gauss–Kronrod integration used by the product code paths |
//! | [`density`] | the density and its derivative, with representation dispatch |
//! | [`distribution`] | characteristic function, Lévy data, moments, CDF, quantile, Variance Gamma bridge |
//! | [`analysis`] | smoothness index, mode, near-zero and tail asymptotics, shape taxonomy |
//! | [`simfit`] | exact sampling and maximum-likelihood fitting |
//! | [`oracle`] | brute-force references used for verification |
//!
//! Parameter tuples are always ordered `(alpha_plus, lambda_plus, alpha_minus, lambda_minus)`.

pub mod analysis;
pub mod density;
pub mod distribution;
mod error;
pub mod oracle;
mod params;
pub mod quad;
pub mod simfit;
pub mod specfun;

pub use error::{Error, Result};
pub use params::BgParams;
