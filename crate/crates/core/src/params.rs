use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four positive parameters of a bilateral Gamma law.
///
/// `alpha_*` are shapes (dimensionless), `lambda_*` are rates (inverse
/// x-units). The positive side is the `X` component of `X - Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct BgParams {
    alpha_plus: f64,
    lambda_plus: f64,
    alpha_minus: f64,
    lambda_minus: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha_plus: f64,
    lambda_plus: f64,
    alpha_minus: f64,
    lambda_minus: f64,
}

impl TryFrom<RawParams> for BgParams {
    type Error = Error;

    fn try_from(r: RawParams) -> Result<Self> {
        BgParams::new(r.alpha_plus, r.lambda_plus, r.alpha_minus, r.lambda_minus)
    }
}

impl From<BgParams> for RawParams {
    fn from(p: BgParams) -> Self {
        RawParams {
            alpha_plus: p.alpha_plus,
            lambda_plus: p.lambda_plus,
            alpha_minus: p.alpha_minus,
            lambda_minus: p.lambda_minus,
        }
    }
}

impl BgParams {
    pub fn new(alpha_plus: f64, lambda_plus: f64, alpha_minus: f64, lambda_minus: f64) -> Result<Self> {
        for (name, v) in [
            ("alpha_plus", alpha_plus),
            ("lambda_plus", lambda_plus),
            ("alpha_minus", alpha_minus),
            ("lambda_minus", lambda_minus),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain("BgParams::new", format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(BgParams { alpha_plus, lambda_plus, alpha_minus, lambda_minus })
    }

    #[inline]
    pub fn alpha_plus(&self) -> f64 {
        self.alpha_plus
    }

    #[inline]
    pub fn lambda_plus(&self) -> f64 {
        self.lambda_plus
    }

    #[inline]
    pub fn alpha_minus(&self) -> f64 {
        self.alpha_minus
    }

    #[inline]
    pub fn lambda_minus(&self) -> f64 {
        self.lambda_minus
    }

    /// `alpha_plus + alpha_minus`, which governs regularity at zero.
    #[inline]
    pub fn alpha_sum(&self) -> f64 {
        self.alpha_plus + self.alpha_minus
    }

    /// `lambda_plus + lambda_minus`.
    #[inline]
    pub fn lambda_sum(&self) -> f64 {
        self.lambda_plus + self.lambda_minus
    }

    /// Parameters of `-X`: the two sides swap roles.
    pub fn reflect(&self) -> Self {
        BgParams {
            alpha_plus: self.alpha_minus,
            lambda_plus: self.lambda_minus,
            alpha_minus: self.alpha_plus,
            lambda_minus: self.lambda_plus,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.alpha_plus, self.lambda_plus, self.alpha_minus, self.lambda_minus]
    }

    pub fn from_array(v: [f64; 4]) -> Result<Self> {
        BgParams::new(v[0], v[1], v[2], v[3])
    }
}

impl fmt::Display for BgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?},{:?},{:?},{:?}", self.alpha_plus, self.lambda_plus, self.alpha_minus, self.lambda_minus)
    }
}

/// Parses `"alpha_plus,lambda_plus,alpha_minus,lambda_minus"`.
impl FromStr for BgParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::domain(
                "BgParams::from_str",
                format!("expected 4 comma-separated values (alpha+,lambda+,alpha-,lambda-), got {}", parts.len()),
            ));
        }
        let mut v = [0.0; 4];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p
                .parse::<f64>()
                .map_err(|e| Error::domain("BgParams::from_str", format!("cannot parse {p:?}: {e}")))?;
        }
        BgParams::from_array(v)
    }
}
