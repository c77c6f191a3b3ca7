//! Exact sampling of `X - Y` and maximum-likelihood fitting.

mod fit;
mod nelder_mead;
mod rng;
mod spline;

pub use fit::{fit_mle, fit_mle_with, loglik, moment_match_init, FitOptions, FitResult, LogLikelihood};
pub use nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use rng::{gamma_variate, sample, RngState};
