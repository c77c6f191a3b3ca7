use thiserror::Error;

/// Errors raised by the library. Every numerical routine either returns a
/// finite value or one of these; NaN is never used as an error signal.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("contract violation in {func}: {msg}")]
    Contract { func: &'static str, msg: String },

    #[error("evaluation failed in {func}: {msg}")]
    Evaluation { func: &'static str, msg: String },

    #[error(
        "series in {func} did not converge after {terms} terms \
         (partial sum {partial_sum:e}, last term {last_term:e})"
    )]
    SeriesNotConverged {
        func: &'static str,
        terms: usize,
        partial_sum: f64,
        last_term: f64,
    },

    #[error("density has a pole at x = 0 (alpha_plus + alpha_minus = {sum} <= 1)")]
    Pole { sum: f64 },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("oracle failure in {func}: {msg}")]
    Oracle { func: &'static str, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { func, msg: msg.into() }
    }

    pub(crate) fn contract(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Contract { func, msg: msg.into() }
    }

    pub(crate) fn evaluation(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Evaluation { func, msg: msg.into() }
    }

    pub(crate) fn oracle(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Oracle { func, msg: msg.into() }
    }

    /// True for failures of a numerical method (as opposed to invalid input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Evaluation { .. } | Error::SeriesNotConverged { .. } | Error::Oracle { .. }
        )
    }
}
